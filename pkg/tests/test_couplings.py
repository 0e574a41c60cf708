"""Coupling-kernel contracts: closed forms, inversions, dispersion."""

import math

import numpy as np
import pytest

from miptlab import couplings as cp
from miptlab import specfun
from miptlab.errors import DivergentRegimeError, DomainError, StabilityError

NN = cp.KernelForm.NEAREST_NEIGHBOR
PL = cp.KernelForm.POWER_LAW


def nn_spec(g, L=256, J=1.0):
    return cp.CouplingSpec(J=J, g=g, form=NN, L=L)


class TestJHat:
    def test_nn_at_pi(self):
        spec = nn_spec(0.3)
        assert abs(cp.j_hat_k(spec, math.pi) - (1 - 0.6)) < 1e-15

    def test_pl_zero_momentum_zeta_form(self):
        spec = cp.CouplingSpec(J=1.0, g=1.0, alpha=1.0, L=64)
        want = 1.0 + 2.0 * math.pi**2 / 6.0
        assert abs(cp.j_hat_k(spec, 0.0) - want) < 1e-12

    def test_pl_large_alpha_matches_nn(self):
        pl = cp.CouplingSpec(J=1.3, g=0.3, alpha=40.0, L=64)
        nn = cp.CouplingSpec(J=1.3, g=0.3, form=NN, L=64)
        ks = np.linspace(0, 2 * math.pi, 97, endpoint=False)
        np.testing.assert_allclose(cp.j_hat_grid(pl, ks), cp.j_hat_grid(nn, ks),
                                   rtol=0, atol=1e-8)

    def test_divergent_regime_rejected(self):
        with pytest.raises(DivergentRegimeError):
            cp.CouplingSpec(J=1.0, g=1.0, alpha=0.4, L=64)

    def test_stability_error(self):
        spec = cp.CouplingSpec(J=1.0, g=1.0, alpha=0.75, L=64)  # J_hat(pi) < 0
        with pytest.raises(StabilityError):
            cp.effective_interaction(spec)


class TestEffectiveInteraction:
    def test_nn_closed_form_values(self):
        # frozen spec values at g = 1/4, J = 1
        spec = nn_spec(0.25, L=1024)
        eff = cp.effective_interaction(spec)
        assert abs(eff.values[1] - (-(2 - math.sqrt(3)) / math.sqrt(0.75))) < 1e-12
        assert abs(eff.values[1] - (-0.30940107675850304)) < 1e-10
        assert abs(eff.values[0] - 1 / math.sqrt(0.75)) < 1e-12

    @pytest.mark.parametrize("g", [0.1, 0.25, 0.4])
    def test_nn_matches_closed_form_everywhere(self, g):
        spec = nn_spec(g, L=1024)
        eff = cp.effective_interaction(spec)
        closed = np.array([cp.nn_closed_form(spec, min(q, 1024 - q))
                           for q in range(1024)])
        assert np.abs(eff.values - closed).max() < 1e-8

    def test_mu_fit_matches_acosh(self):
        spec = nn_spec(0.25, L=512)
        eff = cp.effective_interaction(spec)
        assert abs(eff.mu_fit - math.acosh(2.0)) < 1e-4

    def test_pl_tail_slope_example(self):
        # log-log slope of |Jeff| over q in [50, 200] ~ -2 alpha; the
        # +-0.05 tolerance absorbs the subleading branch-cut corrections
        spec = cp.CouplingSpec(J=1.0, g=0.3, alpha=0.75, L=1024)
        dense = cp._invert_kernel(spec, spec.k_grid)
        q = np.arange(50, 201)
        slope = np.polyfit(np.log(q), np.log(np.abs(dense[50:201])), 1)[0]
        assert abs(slope + 1.5) < 0.05
        # the library fit removes the leading 1/q bias and is tighter
        eff = cp.effective_interaction(
            cp.CouplingSpec(J=1.0, g=0.5, alpha=0.75, L=1024))
        assert abs(eff.tail_exponent_fit - 1.5) < 0.05

    def test_symmetry_and_sum_rule(self):
        spec = cp.CouplingSpec(J=1.7, g=0.5, alpha=0.8, L=128)
        eff = cp.effective_interaction(spec)
        np.testing.assert_allclose(eff.values[1:], eff.values[1:][::-1],
                                   rtol=0, atol=1e-14)
        assert abs(eff.total - 1.0 / spec.j_hat_zero) < 1e-12

    def test_alternating_sign_small_q(self):
        for spec in (nn_spec(0.3, L=256),
                     cp.CouplingSpec(J=1.0, g=0.5, alpha=1.2, L=256)):
            eff = cp.effective_interaction(spec)
            signs = np.sign(eff.values[:6])
            assert all(signs == [1, -1, 1, -1, 1, -1])

    def test_round_trip_convolution(self):
        spec = cp.CouplingSpec(J=1.3, g=0.5, alpha=0.8, L=256)
        eff = cp.effective_interaction(spec)
        ks = 2 * math.pi * np.arange(256) / 256
        conv = np.fft.ifft(np.fft.fft(eff.values) * cp.j_hat_grid(spec, ks)).real
        delta = np.zeros(256)
        delta[0] = 1.0
        assert np.abs(conv - delta).max() < 1e-8


class TestEpsilonK:
    def test_value_at_zero(self):
        for alpha in (0.6, 1.0, 2.5):
            assert cp.epsilon_k(alpha, 0.0) == 1.0

    def test_large_alpha_cos(self):
        for k in (0.4, 1.1, 2.9):
            assert abs(cp.epsilon_k(40.0, k) - math.cos(k)) < 1e-8

    def test_bounded_even_periodic(self):
        ks = np.linspace(0, 2 * math.pi, 64, endpoint=False)
        for alpha in (0.55, 0.8, 1.2, 1.7, 3.0):
            eps = cp.epsilon_k_grid(alpha, ks)
            assert eps.max() <= 1.0 + 1e-12
            assert abs(eps.max() - 1.0) < 1e-12  # max at k = 0
            for k in (0.3, 1.2):
                assert abs(cp.epsilon_k(alpha, k) - cp.epsilon_k(alpha, -k)) < 1e-12
                assert abs(cp.epsilon_k(alpha, k) -
                           cp.epsilon_k(alpha, k + 2 * math.pi)) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            cp.epsilon_k(0.5, 1.0)


class TestKineticSmallK:
    def test_quadratic_branch_value(self):
        # alpha = 2, k = 0.01: (zeta(2)/zeta(4)) k^2/2
        want = specfun.riemann_zeta(2.0) / specfun.riemann_zeta(4.0) * 0.5e-4
        assert abs(cp.kinetic_smallk(2.0, 0.01) - want) < 1e-18

    def test_anomalous_matches_dispersion_at_alpha_one(self):
        # the Gamma(1-2a) sin(pi a) pole cancellation: compare to 1 - eps_k
        k = 0.01
        lhs = cp.kinetic_smallk(1.0, k)
        rhs = 1.0 - cp.epsilon_k(1.0, k)
        assert abs(lhs / rhs - 1.0) < 0.02

    def test_asymptotic_ratio(self):
        for k in (1e-3, 1e-4, 1e-5):
            ratio = cp.kinetic_smallk(1.2, k) / (1.0 - cp.epsilon_k(1.2, k))
            assert abs(ratio - 1.0) < 0.05 * (k / 1e-3) ** 0.1 + 0.02

    def test_anomalous_exponent_fit(self):
        ks = np.geomspace(1e-3, 1e-1, 30)
        one_minus = 1.0 - cp.epsilon_k_grid(1.0, ks)
        slope = np.polyfit(np.log(ks), np.log(one_minus), 1)[0]
        assert abs(slope - 1.0) < 0.05

    def test_marginal_alpha_rejected(self):
        with pytest.raises(DomainError):
            cp.kinetic_smallk(1.5, 0.01)
