"""Momentum-space coupling kernels and their real-space inversions.

A chain of L clusters carries a translation-invariant two-cluster coupling,
either nearest-neighbor (NN) or power-law (PL, |r - r'|^(-2*alpha)).  Its
Fourier transform J_hat(k) enters every mean-field formula; the inverse
transform of 1/J_hat(k) is the effective replica-field interaction: an
alternating exponentially-decaying piece from the pole of 1/J_hat inside
the unit circle, plus a -|q|^(-2*alpha) tail from the branch cut of the
polylogarithm.  Both decay constants are extracted here by fits and used
downstream (the pole rate mu feeds the Landau-Ginzburg gradient
coefficient).

Also hosts the normalized hopping dispersion eps(k) of the fermion chain
and its small-k asymptotics, whose k^(2*alpha - 1) branch is the origin of
the anomalous dynamical exponent.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .constants import KERNEL_GRID_DEFAULT
from .errors import DivergentRegimeError, DomainError, StabilityError
from .specfun import gamma_real, polylog_grid, polylog_unit_circle, riemann_zeta

TWO_PI = 2.0 * math.pi


class KernelForm(Enum):
    NEAREST_NEIGHBOR = "nn"
    POWER_LAW = "power-law"


@dataclass(frozen=True)
class CouplingSpec:
    """Physical parameters defining all coupling kernels.

    J > 0 is the overall energy scale, g >= 0 the inter-cluster strength,
    alpha the power-law exponent (PL only; alpha > 1/2 or the zeta sum
    diverges and no thermodynamic limit exists at fixed J), L the number
    of clusters.  k_grid sets the dense momentum grid used for
    infinite-chain inversions.
    """

    J: float = 1.0
    g: float = 1.0
    alpha: float = 1.0
    form: KernelForm = KernelForm.POWER_LAW
    L: int = 256
    k_grid: int = KERNEL_GRID_DEFAULT

    def __post_init__(self):
        if self.J <= 0:
            raise DomainError(f"J must be positive, got {self.J}")
        if self.g < 0:
            raise DomainError(f"g must be non-negative, got {self.g}")
        if self.L < 2:
            raise DomainError(f"L must be at least 2, got {self.L}")
        if self.form is KernelForm.POWER_LAW and self.alpha <= 0.5:
            raise DivergentRegimeError(
                f"power-law kernel needs alpha > 1/2 (got alpha = {self.alpha}): "
                "zeta(2*alpha) diverges and the coupling sum is superextensive"
            )

    @property
    def j_hat_zero(self) -> float:
        """J_hat(k = 0) = J * (1 + 2 g zeta(2 alpha)) (PL) or J (1 + 2g) (NN)."""
        if self.form is KernelForm.NEAREST_NEIGHBOR:
            return self.J * (1.0 + 2.0 * self.g)
        return self.J * (1.0 + 2.0 * self.g * riemann_zeta(2.0 * self.alpha))


def j_hat_k(spec: CouplingSpec, k: float) -> float:
    """Momentum-space kernel J_hat(k) at a single momentum in [0, 2*pi)."""
    k = float(k) % TWO_PI
    if spec.form is KernelForm.NEAREST_NEIGHBOR:
        return spec.J * (1.0 + 2.0 * spec.g * math.cos(k))
    if k == 0.0:
        return spec.j_hat_zero
    # Li_s(e^{ik}) + Li_s(e^{-ik}) = 2 Re Li_s(e^{ik})
    s = 2.0 * spec.alpha
    return spec.J * (1.0 + 2.0 * spec.g * polylog_unit_circle(s, k).real)


def j_hat_grid(spec: CouplingSpec, ks: np.ndarray) -> np.ndarray:
    """Vectorized J_hat over an array of momenta."""
    ks = np.asarray(ks, dtype=float) % TWO_PI
    if spec.form is KernelForm.NEAREST_NEIGHBOR:
        return spec.J * (1.0 + 2.0 * spec.g * np.cos(ks))
    s = 2.0 * spec.alpha
    out = np.empty_like(ks)
    zero = ks == 0.0
    out[zero] = spec.j_hat_zero
    if (~zero).any():
        out[~zero] = spec.J * (
            1.0 + 2.0 * spec.g * polylog_grid(s, ks[~zero]).real
        )
    return out


def _invert_kernel(spec: CouplingSpec, n: int) -> np.ndarray:
    """Real-space interaction on an n-site periodic ring: IDFT of 1/J_hat."""
    ks = TWO_PI * np.arange(n) / n
    jh = j_hat_grid(spec, ks)
    if np.any(jh <= 0.0):
        kmin = ks[np.argmin(jh)]
        raise StabilityError(
            f"J_hat(k) <= 0 at k = {kmin:.6f} (min {jh.min():.3e}); "
            "kernel is not invertible -- reduce g"
        )
    vals = np.fft.ifft(1.0 / jh)
    return vals.real


@dataclass(frozen=True)
class EffectiveInteraction:
    """Real-space replica-field interaction on the periodic chain.

    values[q] for cluster separation q = 0 .. L-1 (symmetric under
    q -> L - q).  mu_fit is the decay rate of the alternating pole piece,
    tail_exponent_fit the fitted power of the |q|^(-p) tail (expected
    p = 2*alpha; NaN for NN kernels, whose inversion is purely
    exponential).
    """

    values: np.ndarray
    mu_fit: float
    tail_exponent_fit: float
    spec: CouplingSpec = field(repr=False, default=None)

    @property
    def total(self) -> float:
        """sum_q values[q]; equals 1/J_hat(0) identically."""
        return float(self.values.sum())


def _fit_pole_rate(vals: np.ndarray) -> float:
    """Decay rate of the alternating (-1)^q e^{-mu q} small-q region.

    The fit stops where the sign alternation breaks (tail takes over) or
    the magnitude approaches the double-precision floor of the transform.
    """
    floor = 1e-12 * abs(vals[1])
    qmax = 1
    limit = min(len(vals) // 4, 40)
    while (
        qmax + 1 < limit
        and vals[qmax + 1] * vals[qmax] < 0.0
        and floor < abs(vals[qmax + 1]) < abs(vals[qmax])
    ):
        qmax += 1
    if qmax < 3:
        return math.nan
    q = np.arange(1, qmax + 1)
    slope = np.polyfit(q, np.log(np.abs(vals[1 : qmax + 1])), 1)[0]
    return -slope


def _fit_tail_exponent(vals: np.ndarray, lo: int, hi: int) -> float:
    """Least squares on log|values| over [lo, hi] with a 1/q nuisance term.

    The branch-cut tail is c q^(-p) (1 + O(1/q)); fitting
    log|J| = a - p log q + c/q removes the leading subfractional bias of
    the window without touching the exponent.
    """
    q = np.arange(lo, hi + 1, dtype=float)
    y = np.abs(vals[lo : hi + 1])
    if np.any(y == 0.0):
        return math.nan
    design = np.column_stack([np.ones_like(q), np.log(q), 1.0 / q])
    coef, *_ = np.linalg.lstsq(design, np.log(y), rcond=None)
    return -coef[1]


def effective_interaction(spec: CouplingSpec) -> EffectiveInteraction:
    """Invert J_hat to the real-space interaction and fit its decays.

    values comes from the L-point periodic ring (momenta at multiples of
    2*pi/L).  The two fits use a dense k_grid-point inversion instead,
    which represents the infinite chain out to separations ~ k_grid/2, so
    the fit windows [1, ~12] and [L/8, L/4] are free of periodic images.
    """
    values = _invert_kernel(spec, spec.L)
    dense = _invert_kernel(spec, max(spec.k_grid, 4 * spec.L))
    mu = _fit_pole_rate(dense)
    if spec.form is KernelForm.POWER_LAW:
        tail = _fit_tail_exponent(dense, spec.L // 8, spec.L // 4)
    else:
        tail = math.nan
    return EffectiveInteraction(
        values=values, mu_fit=mu, tail_exponent_fit=tail, spec=spec
    )


def nn_closed_form(spec: CouplingSpec, q: int) -> float:
    """Exact inversion for the NN kernel on the infinite chain (units 1/J):

        (-1)^q e^{-acosh(1/(2g)) |q|} / sqrt(1 - 4 g^2)

    Valid for g < 1/2 (pole inside the unit circle).
    """
    if spec.form is not KernelForm.NEAREST_NEIGHBOR:
        raise DomainError("closed form applies to the NN kernel only")
    g = spec.g
    if not 0.0 < g < 0.5:
        raise DomainError(f"NN closed form needs 0 < g < 1/2, got g = {g}")
    mu = math.acosh(1.0 / (2.0 * g))
    return (-1.0) ** (q % 2) * math.exp(-mu * abs(q)) / (
        math.sqrt(1.0 - 4.0 * g * g) * spec.J
    )


# --- fermion-chain dispersion -------------------------------------------


def epsilon_k(alpha: float, k: float) -> float:
    """Normalized power-law hopping dispersion.

    eps(k) = (1/zeta(2 alpha)) sum_{r>=1} cos(k r) / r^(2 alpha);
    eps(0) = 1 exactly and eps(k) <= 1 everywhere.
    """
    if alpha <= 0.5:
        raise DomainError(f"epsilon_k requires alpha > 1/2, got {alpha}")
    k = float(k) % TWO_PI
    if k == 0.0:
        return 1.0
    s = 2.0 * alpha
    return polylog_unit_circle(s, k).real / riemann_zeta(s)


def epsilon_k_grid(alpha: float, ks: np.ndarray) -> np.ndarray:
    if alpha <= 0.5:
        raise DomainError(f"epsilon_k requires alpha > 1/2, got {alpha}")
    s = 2.0 * alpha
    ks = np.asarray(ks, dtype=float) % TWO_PI
    out = np.empty_like(ks)
    zero = ks == 0.0
    out[zero] = 1.0
    if (~zero).any():
        out[~zero] = polylog_grid(s, ks[~zero]).real / riemann_zeta(s)
    return out


def kinetic_smallk(alpha: float, k: float) -> float:
    """Leading small-k behaviour of 1 - eps(k).

    Quadratic branch (zeta(2 alpha - 2)/zeta(2 alpha)) k^2/2 for
    alpha > 3/2; anomalous branch
    -(Gamma(1 - 2 alpha) sin(pi alpha) / zeta(2 alpha)) k^(2 alpha - 1)
    for 1/2 < alpha < 3/2.  The anomalous coefficient is evaluated through
    the reflection identity

        Gamma(1 - 2a) sin(pi a) = pi / (2 cos(pi a) Gamma(2a)),

    which stays finite at integer 2*alpha (the raw Gamma(1 - 2 alpha) has
    poles there that cancel against sin(pi alpha)).
    """
    if alpha <= 0.5:
        raise DomainError(f"kinetic_smallk requires alpha > 1/2, got {alpha}")
    if alpha == 1.5:
        raise DomainError(
            "alpha = 3/2 is the log-corrected marginal case and is not supported"
        )
    s = 2.0 * alpha
    if alpha > 1.5:
        return riemann_zeta(s - 2.0) / riemann_zeta(s) * k * k / 2.0
    coeff = -math.pi / (
        2.0 * math.cos(math.pi * alpha) * gamma_real(s) * riemann_zeta(s)
    )
    return coeff * k ** (s - 1.0)
