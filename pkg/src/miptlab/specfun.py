"""Special functions needed by the analytic pipeline.

Three callables cover every formula in the package:

* ``riemann_zeta(s)``      -- zeta on s > 1,
* ``polylog_unit_circle``  -- Li_s(e^{ik}) for s > 0 on the unit circle,
* ``gamma_real(x)``        -- real Gamma away from its poles.

The polylogarithm is the workhorse: the momentum-space kernel of a
power-law chain is J*(1 + g*(Li_s(e^{ik}) + Li_s(e^{-ik}))) with s = 2*alpha,
and the small-k singular part Gamma(1-s) * k^(s-1) of Li_s is exactly the
fractional kinetic term of the Goldstone/order-parameter modes.  The
implementation therefore uses the expansion around the branch point

    Li_s(e^{mu}) = Gamma(1-s) (-mu)^(s-1) + sum_n zeta(s-n) mu^n / n!

(mu = i*k, |mu| < 2*pi, s not a positive integer; the n = s-1 term is
replaced by the standard harmonic/log term when s is an integer).  After
reflecting k -> 2*pi - k into (0, pi] the series converges at least as
fast as 2^(-n), so a fixed number of terms reaches full double precision
for every admissible argument.  A direct Kahan summation of
sum e^{ikr} / r^s cannot reach the 1e-10 contract for s near 1 at any k
and is kept only as an independent cross-check (see tests).

zeta is evaluated by Euler-Maclaurin: a direct sum plus integral,
half-term and Bernoulli corrections.  The same formula analytically
continues zeta to s < 1, which the polylog expansion coefficients need.
"""

import cmath
import math
from functools import lru_cache

import numpy as np

from .constants import (
    POLYLOG_INTEGER_SNAP,
    POLYLOG_MAX_TERMS,
    POLYLOG_NEAR_INTEGER,
    ZETA_SERIES_CUTOFF,
)
from .errors import DomainError, PoleError

TWO_PI = 2.0 * math.pi

# B_2, B_4, ..., B_20
_BERNOULLI = (
    1.0 / 6,
    -1.0 / 30,
    1.0 / 42,
    -1.0 / 30,
    5.0 / 66,
    -691.0 / 2730,
    7.0 / 6,
    -3617.0 / 510,
    43867.0 / 798,
    -174611.0 / 330,
)


@lru_cache(maxsize=None)
def _zeta_em(s: float, n_direct: int = 64) -> float:
    """Euler-Maclaurin evaluation of zeta(s), valid for real s > -15, s != 1.

    Direct sum over r < n_direct, then integral + half-term + Bernoulli
    tail at n_direct.  The remainder after p Bernoulli pairs scales like
    n_direct^(-s - 2p - 1); with p = 10 and n_direct >= 64 it is far below
    double precision for the whole domain used here.
    """
    if s == 1.0:
        raise PoleError("zeta has a pole at s = 1")
    n = n_direct
    r = np.arange(1, n, dtype=float)
    total = math.fsum(r**(-s))
    total += n ** (1.0 - s) / (s - 1.0) + 0.5 * n ** (-s)
    # Bernoulli corrections: B_2k/(2k)! * s(s+1)...(s+2k-2) * n^(-s-2k+1)
    poch = 1.0
    fact = 1.0
    for idx, b2k in enumerate(_BERNOULLI):
        k = idx + 1
        poch *= s + (2 * k - 2)
        if k > 1:
            poch *= s + (2 * k - 3)
        fact *= (2 * k) * (2 * k - 1)
        total += b2k / fact * poch * n ** (-s - 2 * k + 1)
    return total


def riemann_zeta(s: float) -> float:
    """zeta(s) = sum_{r>=1} r^(-s) for s > 1, to relative error <= 1e-12."""
    if s <= 1.0:
        raise DomainError(f"riemann_zeta requires s > 1, got s = {s}")
    # The long direct sum keeps the error bound elementary; the Bernoulli
    # tail then contributes only far below the target tolerance.
    return _zeta_em(s, n_direct=min(ZETA_SERIES_CUTOFF, 10_000))


def _zeta_continued(x: float) -> float:
    """zeta continued to any real x != 1 (needed for expansion coefficients).

    Euler-Maclaurin is only well conditioned while the direct sum does not
    cancel against the tail corrections, so anything left of x = 1/2 goes
    through the reflection formula instead.
    """
    if x == 1.0:
        raise PoleError("zeta has a pole at s = 1")
    if x >= 0.5:
        return _zeta_em(x)
    # reflection: zeta(x) = 2 (2 pi)^(x-1) sin(pi x / 2) Gamma(1-x) zeta(1-x)
    return (
        2.0
        * TWO_PI ** (x - 1.0)
        * math.sin(math.pi * x / 2.0)
        * math.exp(math.lgamma(1.0 - x))
        * _zeta_em(1.0 - x)
    )


def gamma_real(x: float) -> float:
    """Real Gamma function; raises PoleError at non-positive integers."""
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at x = {x}")
    return math.gamma(x)


def _harmonic(m: int) -> float:
    return sum(1.0 / j for j in range(1, m + 1))


@lru_cache(maxsize=None)
def _expansion_coeffs(s: float) -> tuple:
    """Coefficients zeta(s - n)/n! of the branch-point expansion.

    For very negative arguments the zeta reflection and 1/n! are combined
    through lgamma so no intermediate overflows.
    """
    coeffs = []
    lnfact = 0.0
    for n in range(POLYLOG_MAX_TERMS):
        if n > 0:
            lnfact += math.log(n)
        coeffs.append(_zeta_over_factorial(s - n, lnfact))
    return tuple(coeffs)


def _zeta_over_factorial(x: float, lnfact: float) -> float:
    """zeta(x) / n! with lnfact = ln(n!), computed without overflow."""
    if x == 0.0:
        return -0.5 * math.exp(-lnfact)
    if x >= 0.5:
        return _zeta_em(x) * math.exp(-lnfact)
    return (
        2.0
        * TWO_PI ** (x - 1.0)
        * math.sin(math.pi * x / 2.0)
        * math.exp(math.lgamma(1.0 - x) - lnfact)
        * _zeta_em(1.0 - x)
    )


@lru_cache(maxsize=None)
def _expansion_coeffs_integer(m: int) -> tuple:
    """Like _expansion_coeffs but for integer s = m (skips the n = m-1 pole)."""
    coeffs = []
    lnfact = 0.0
    for n in range(POLYLOG_MAX_TERMS):
        if n > 0:
            lnfact += math.log(n)
        if n == m - 1:
            coeffs.append(0.0)
            continue
        coeffs.append(_zeta_over_factorial(float(m - n), lnfact))
    return tuple(coeffs)


def _polylog_mpmath(s: float, k: float) -> complex:
    # |s - integer| in (1e-12, 1e-6): the Gamma(1-s) and zeta(s-m+1) poles
    # cancel but float arithmetic cannot resolve the cancellation.
    import mpmath

    with mpmath.workdps(40):
        val = mpmath.polylog(s, mpmath.exp(1j * mpmath.mpf(k)))
        return complex(val)


def _polylog_reduced(s: float, k) -> "np.ndarray | complex":
    """Li_s(e^{ik}) for scalar or array k, all values in (0, pi]."""
    k = np.asarray(k, dtype=float)
    mu = 1j * k
    m = round(s)
    if abs(s - m) <= POLYLOG_INTEGER_SNAP and m >= 1:
        if m == 1:
            out = -np.log(1.0 - np.exp(mu))
        else:
            coeffs = _expansion_coeffs_integer(m)
            out = np.zeros(k.shape, dtype=complex)
            for c in reversed(coeffs):
                out = out * mu + c
            # ln(-mu) = ln k - i pi/2 on the principal branch (k > 0)
            log_neg_mu = np.log(k) - 0.5j * math.pi
            out += mu ** (m - 1) / math.factorial(m - 1) * (
                _harmonic(m - 1) - log_neg_mu
            )
    elif abs(s - m) < POLYLOG_NEAR_INTEGER and m >= 1:
        out = np.array([_polylog_mpmath(s, kk) for kk in np.atleast_1d(k)])
        out = out.reshape(k.shape)
    else:
        coeffs = _expansion_coeffs(s)
        out = np.zeros(k.shape, dtype=complex)
        for c in reversed(coeffs):
            out = out * mu + c
        # (-mu)^(s-1) = k^(s-1) e^{-i pi (s-1)/2}
        phase = cmath.exp(-0.5j * math.pi * (s - 1.0))
        out += math.gamma(1.0 - s) * k ** (s - 1.0) * phase
    return out


def polylog_unit_circle(s: float, k: float) -> complex:
    """Li_s(e^{ik}) = sum_{r>=1} e^{ikr} / r^s, to relative error <= 1e-10.

    Domain: s > 0 and k in [0, 2*pi); k = 0 requires s > 1 (the series
    diverges at the branch point otherwise) and returns zeta(s).
    """
    if s <= 0.0:
        raise DomainError(f"polylog_unit_circle requires s > 0, got s = {s}")
    k = float(k)
    if not 0.0 <= k < TWO_PI:
        k = k % TWO_PI
    if k == 0.0:
        if s <= 1.0:
            raise DomainError("Li_s(1) diverges for s <= 1")
        return complex(riemann_zeta(s))
    if k > math.pi:
        return complex(np.conj(_polylog_reduced(s, TWO_PI - k)))
    return complex(_polylog_reduced(s, k))


def polylog_grid(s: float, ks: np.ndarray) -> np.ndarray:
    """Vectorized Li_s(e^{ik}) over an array of momenta in (0, 2*pi).

    Same accuracy contract as polylog_unit_circle; used for whole-grid
    kernel construction.  k = 0 entries are rejected for s <= 1.
    """
    if s <= 0.0:
        raise DomainError(f"polylog_grid requires s > 0, got s = {s}")
    ks = np.asarray(ks, dtype=float) % TWO_PI
    out = np.empty(ks.shape, dtype=complex)
    zero = ks == 0.0
    if zero.any():
        if s <= 1.0:
            raise DomainError("Li_s(1) diverges for s <= 1")
        out[zero] = riemann_zeta(s)
    upper = ks > math.pi
    lower = ~zero & ~upper
    if lower.any():
        out[lower] = _polylog_reduced(s, ks[lower])
    if upper.any():
        out[upper] = np.conj(_polylog_reduced(s, TWO_PI - ks[upper]))
    return out


def polylog_cos_sum(s: float, k: float) -> float:
    """Li_s(e^{ik}) + Li_s(e^{-ik}) = 2 sum_{r>=1} cos(kr)/r^s (real)."""
    return 2.0 * polylog_unit_circle(s, k).real
