"""Special-function contracts.

Independent oracles: direct Kahan-accumulated series with analytic tail
bounds (computed here, not in the library) and mpmath at 40 digits.
"""

import math

import mpmath
import numpy as np
import pytest

from miptlab import specfun
from miptlab.errors import DomainError, PoleError


def zeta_series_oracle(s: float, terms: int = 200_000) -> float:
    """Direct summation plus integral tail bound (independent of the
    Euler-Maclaurin path used by the library)."""
    r = np.arange(1, terms + 1, dtype=float)
    partial = math.fsum(r**-s)
    tail = terms ** (1.0 - s) / (s - 1.0)  # integral tail estimate
    return partial + tail


def polylog_series_oracle(s: float, k: float, terms: int = 400_000) -> complex:
    """Kahan-style direct summation of sum e^{ikr}/r^s (usable when the
    Abel tail bound 2 R^-s / |1 - e^{ik}| is small)."""
    r = np.arange(1, terms + 1, dtype=float)
    vals = np.exp(1j * k * r) / r**s
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


class TestRiemannZeta:
    def test_limit_large_s(self):
        # s -> infinity: leading term dominates
        assert abs(specfun.riemann_zeta(30.0) - (1.0 + 2.0**-30)) < 1e-9

    def test_basel(self):
        # frozen from the series oracle; equals pi^2/6
        oracle = zeta_series_oracle(2.0)
        assert abs(oracle - math.pi**2 / 6) < 1e-10
        assert abs(specfun.riemann_zeta(2.0) - math.pi**2 / 6) < 1e-12

    def test_divergence_approach(self):
        assert specfun.riemann_zeta(1.000001) > 1e5

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.riemann_zeta(1.0)
        with pytest.raises(DomainError):
            specfun.riemann_zeta(0.5)

    def test_strictly_decreasing(self):
        grid = np.linspace(1.01, 40.0, 300)
        vals = [specfun.riemann_zeta(s) for s in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert abs(vals[-1] - 1.0) < 1e-11

    @pytest.mark.parametrize("s", [1.1, 1.5, 2.0, 3.0, 7.7, 21.0])
    def test_against_mpmath(self, s):
        ref = float(mpmath.zeta(s))
        assert abs(specfun.riemann_zeta(s) / ref - 1.0) < 1e-12


class TestPolylogUnitCircle:
    def test_branch_point_limit(self):
        # k -> 0+ at s = 3 approaches zeta(3)
        val = specfun.polylog_unit_circle(3.0, 1e-8)
        assert abs(val.real - specfun.riemann_zeta(3.0)) < 1e-7

    def test_alternating_series_value(self):
        # Li_2(-1) = -pi^2/12; oracle: alternating series via direct sum
        oracle = polylog_series_oracle(2.0, math.pi, terms=2_000_000)
        assert abs(oracle.real + math.pi**2 / 12) < 1e-6
        val = specfun.polylog_unit_circle(2.0, math.pi)
        assert abs(val.real + math.pi**2 / 12) < 1e-12
        assert abs(val.imag) < 1e-12

    def test_large_s_first_term(self):
        for k in (0.3, 1.0, 2.5, 4.4):
            val = specfun.polylog_unit_circle(30.0, k)
            assert abs(val - np.exp(1j * k)) < 1e-9

    @pytest.mark.parametrize("s", [0.6, 0.9, 1.0, 1.2, 1.5, 2.0, 2.5, 3.0, 4.5])
    @pytest.mark.parametrize("k", [1e-4, 0.1, 1.0, math.pi / 2, 3.0, 5.5])
    def test_against_mpmath(self, s, k):
        with mpmath.workdps(40):
            ref = complex(mpmath.polylog(s, mpmath.exp(1j * mpmath.mpf(k))))
        val = specfun.polylog_unit_circle(s, k)
        assert abs(val - ref) <= 1e-10 * max(1.0, abs(ref))

    def test_direct_series_agreement(self):
        # where the direct series converges fast, both paths agree
        val = specfun.polylog_unit_circle(4.0, 2.0)
        oracle = polylog_series_oracle(4.0, 2.0, terms=100_000)
        assert abs(val - oracle) < 1e-12

    def test_symmetric_combination_real(self):
        for s in (0.7, 1.3, 2.0, 3.1):
            for k in np.linspace(0.05, 2 * math.pi - 0.05, 37):
                both = specfun.polylog_unit_circle(s, k) + \
                    specfun.polylog_unit_circle(s, 2 * math.pi - k)
                assert abs(both.imag) < 1e-12

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            specfun.polylog_unit_circle(0.8, 0.0)
        with pytest.raises(DomainError):
            specfun.polylog_unit_circle(-1.0, 1.0)

    def test_partial_sum_envelope(self):
        # doubling the oracle cutoff moves the result by less than the
        # tail bound used to certify it
        s, k = 3.0, 1.1
        a = polylog_series_oracle(s, k, terms=50_000)
        b = polylog_series_oracle(s, k, terms=100_000)
        bound = 2.0 * 50_000.0**-s / abs(1 - np.exp(1j * k))
        assert abs(a - b) < bound

    def test_grid_matches_scalar(self):
        ks = np.linspace(1e-4, 2 * math.pi - 1e-4, 101)
        grid = specfun.polylog_grid(1.7, ks)
        scal = np.array([specfun.polylog_unit_circle(1.7, k) for k in ks])
        np.testing.assert_allclose(grid, scal, rtol=0, atol=1e-14)


class TestGammaReal:
    def test_one(self):
        assert specfun.gamma_real(1.0) == 1.0

    def test_half(self):
        assert abs(specfun.gamma_real(0.5) - math.sqrt(math.pi)) < 1e-12

    def test_reflection_negative_half(self):
        # Gamma(-1/2) = -2 sqrt(pi), cross-checked by reflection
        val = specfun.gamma_real(-0.5)
        refl = math.pi / (math.sin(-0.5 * math.pi) * specfun.gamma_real(1.5))
        assert abs(val + 2 * math.sqrt(math.pi)) < 1e-10
        assert abs(val - refl) < 1e-10

    def test_reflection_identity_on_grid(self):
        for x in np.linspace(0.05, 0.95, 19):
            lhs = specfun.gamma_real(x) * specfun.gamma_real(1.0 - x)
            rhs = math.pi / math.sin(math.pi * x)
            assert abs(lhs / rhs - 1.0) < 1e-10

    def test_poles(self):
        for x in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                specfun.gamma_real(x)
