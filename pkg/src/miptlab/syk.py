"""Large-N saddle of the monitored Brownian SYK chain.

Two Majorana chains coupled by inter-chain parity monitoring, with
power-law two-fermion hopping (variance ~ J |r-r'|^(-2 alpha)) and
on-site q-fermion interaction of strength U.  With the renormalized
hopping Jhat = J zeta(2 alpha) and reduced rates gt = gamma/Jhat,
ut = U/Jhat, the replica saddle is parametrized by a single amplitude
lambda solving

    (1 - lambda^2) (1 + ut lambda^(q-2))^2 = gt^2,

with lambda = 0 for gt >= 1.  lambda is the order parameter of the
relative replica-rotation symmetry: it feeds the saddle Green function,
the Goldstone stiffness rho = Jhat (1 - gt^2) (free case), and the
quadratic Goldstone action (rho/2)(Omega^2/gamma^2 + 1 - eps_k).  At the
transition gt = 1 the nonzero roots of the lambda equation determine the
order: none for 2 ut < 1 (continuous), a degenerate nonzero pair for
2 ut > 1 (first order, discontinuous jump).
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .couplings import epsilon_k, epsilon_k_grid
from .errors import DomainError
from .meanfield import Phase
from .specfun import riemann_zeta

_SIGMA_Z = np.diag([1.0, -1.0])
_I_SIGMA_Y = np.array([[0.0, 1.0], [-1.0, 0.0]])  # i * sigma_y (real)
_TAU_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_EYE2 = np.eye(2)


@dataclass(frozen=True)
class SykParams:
    """Physical parameters and reduced couplings of the monitored chain.

    The measurement strength per step is s = sqrt(gamma dt); only the
    rate gamma survives the continuum limit and enters here.
    """

    J: float
    U: float
    gamma: float
    alpha: float
    q: int = 4

    def __post_init__(self):
        if self.J <= 0:
            raise DomainError(f"J must be positive, got {self.J}")
        if self.U < 0 or self.gamma < 0:
            raise DomainError("U and gamma must be non-negative")
        if self.q < 2 or self.q % 2:
            raise DomainError(f"q must be an even integer >= 2, got {self.q}")
        if self.alpha <= 0.5:
            raise DomainError(
                f"alpha must exceed 1/2 (zeta(2 alpha) diverges), got {self.alpha}"
            )

    @property
    def j_hat(self) -> float:
        return self.J * riemann_zeta(2.0 * self.alpha)

    @property
    def gamma_tilde(self) -> float:
        return self.gamma / self.j_hat

    @property
    def u_tilde(self) -> float:
        return self.U / self.j_hat


@dataclass(frozen=True)
class LambdaSolution:
    """Physical root plus every real root in (0, 1] (several coexist near
    a first-order transition)."""

    value: float
    roots: tuple
    residuals: tuple

    @property
    def multiple(self) -> bool:
        return len(self.roots) > 1


def _lambda_residual(lam: float, gt: float, ut: float, q: int) -> float:
    return (1.0 - lam * lam) * (1.0 + ut * lam ** (q - 2)) ** 2 - gt * gt


def _all_roots(gt: float, ut: float, q: int, grid: int = 1000) -> list:
    """Bracketed bisection on a uniform grid over (0, 1], Newton-polished."""
    lams = np.linspace(0.0, 1.0, grid + 1)
    vals = np.array([_lambda_residual(l, gt, ut, q) for l in lams])
    roots = []
    for i in range(grid):
        a, b = lams[i], lams[i + 1]
        fa, fb = vals[i], vals[i + 1]
        root = None
        if fa == 0.0 and a > 0.0:
            root = a
        elif fa * fb < 0.0:
            root = brentq(_lambda_residual, a, b, args=(gt, ut, q),
                          xtol=1e-15, rtol=8.9e-16)
        if root is None:
            continue
        for _ in range(4):  # Newton polish
            f = _lambda_residual(root, gt, ut, q)
            h = 1e-7
            df = (_lambda_residual(root + h, gt, ut, q)
                  - _lambda_residual(root - h, gt, ut, q)) / (2 * h)
            if df == 0.0:
                break
            root -= f / df
            root = min(max(root, 0.0), 1.0)
        if root > 1e-12 and not any(abs(root - r) < 1e-9 for r in roots):
            roots.append(root)
    if vals[-1] == 0.0 and not any(abs(1.0 - r) < 1e-9 for r in roots):
        roots.append(1.0)
    return sorted(roots)


def solve_lambda(p: SykParams) -> LambdaSolution:
    """All real roots of the saddle equation in (0, 1]; the physical
    branch (largest root, continuously connected to lambda = 1 at
    gamma = 0) is `value`, or 0 for gamma_tilde >= 1 by convention."""
    gt, ut, q = p.gamma_tilde, p.u_tilde, p.q
    roots = _all_roots(gt, ut, q)
    residuals = tuple(abs(_lambda_residual(r, gt, ut, q)) for r in roots)
    if gt >= 1.0:
        return LambdaSolution(0.0, tuple(roots), residuals)
    if not roots:
        raise DomainError(
            f"no saddle amplitude found for gamma_tilde = {gt}, "
            f"u_tilde = {ut}; equation has no root in (0, 1]"
        )
    return LambdaSolution(roots[-1], tuple(roots), residuals)


@dataclass(frozen=True)
class SaddleGreen:
    """Equal-site saddle Green function sample at time difference t12.

    matrix is 4x4 over (contour in {1,2}) x (chain in {L,R}), i.e.
    sigma (x) tau with sigma acting on contours and tau on chains.
    """

    lam: float
    decay_rate: float
    matrix: np.ndarray


def saddle_green(p: SykParams, t12: float) -> SaddleGreen:
    """Closed-form saddle solution at a time difference.

        gt < 1:  e^{-(Jhat + U lam^(q-2)) |t|/2} / 2 *
                 [sgn(t) sz - lam i sy + gt ty / (1 + ut lam^(q-2))]
        gt >= 1: e^{-gamma |t|/2} (sgn(t) sz + ty) / 2
    """
    gt, ut = p.gamma_tilde, p.u_tilde
    sgn = float(np.sign(t12))
    if gt < 1.0:
        lam = solve_lambda(p).value
        lam_pow = lam ** (p.q - 2)
        rate = (p.j_hat + p.U * lam_pow) / 2.0
        core = (
            sgn * np.kron(_SIGMA_Z, _EYE2)
            - lam * np.kron(_I_SIGMA_Y, _EYE2)
            + gt / (1.0 + ut * lam_pow) * np.kron(_EYE2, _TAU_Y)
        )
    else:
        lam = 0.0
        rate = p.gamma / 2.0
        core = sgn * np.kron(_SIGMA_Z, _EYE2) + np.kron(_EYE2, _TAU_Y)
    matrix = 0.5 * math.exp(-rate * abs(t12)) * core.astype(complex)
    return SaddleGreen(lam=lam, decay_rate=rate, matrix=matrix)


def stiffness(p: SykParams) -> float:
    """Goldstone stiffness rho = Jhat (1 - gamma_tilde^2), clipped at 0.

    Defined on the free-fermion branch (U = 0)."""
    if p.U != 0.0:
        raise DomainError("stiffness is defined on the U = 0 branch")
    return max(p.j_hat * (1.0 - p.gamma_tilde**2), 0.0)


def goldstone_action_quadratic(p: SykParams, k: float, omega: float) -> float:
    """(rho/2)(Omega^2/gamma^2 + 1 - eps_k); identically 0 when rho = 0."""
    rho = stiffness(p)
    if rho == 0.0:
        return 0.0
    return 0.5 * rho * (omega**2 / p.gamma**2 + 1.0 - epsilon_k(p.alpha, k))


def goldstone_action_grid(p: SykParams, ks: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """Vectorized quadratic action on a (k, Omega) product grid."""
    rho = stiffness(p)
    if rho == 0.0:
        return np.zeros((len(ks), len(omegas)))
    eps = epsilon_k_grid(p.alpha, np.asarray(ks, float))
    om2 = (np.asarray(omegas, float) / p.gamma) ** 2
    return 0.5 * rho * (om2[None, :] + (1.0 - eps)[:, None])


class TransitionOrder(Enum):
    SECOND = "second"
    FIRST = "first"
    TRICRITICAL = "tricritical"


def transition_order(p: SykParams) -> TransitionOrder:
    """Order of the measurement transition at gamma = Jhat.

    Continuous for 2 U < Jhat, first order for 2 U > Jhat (nonzero saddle
    roots coexist with lambda = 0 at the transition, so lambda jumps).
    The root multiplicity reported by solve_lambda at gamma_tilde = 1
    must agree: nonzero roots exist exactly when 2 u_tilde > 1.
    """
    two_ut = 2.0 * p.u_tilde
    if two_ut == 1.0:
        return TransitionOrder.TRICRITICAL
    return TransitionOrder.FIRST if two_ut > 1.0 else TransitionOrder.SECOND


def at_transition(p: SykParams) -> SykParams:
    """Same parameters moved exactly onto the transition gamma = Jhat."""
    return SykParams(J=p.J, U=p.U, gamma=p.j_hat, alpha=p.alpha, q=p.q)


@dataclass(frozen=True)
class EntropyScalingForm:
    form: str  # "log" | "power" | "bounded"
    exponent: float | None

    def describe(self) -> str:
        if self.form == "log":
            return "log A"
        if self.form == "power":
            return f"A^{self.exponent:g}"
        return "bounded"


def free_fermion_entropy_scaling(alpha: float, phase: Phase, A: float | None = None
                                 ) -> EntropyScalingForm:
    """Functional form of S_A/N for the non-interacting chain.

    Broken phase: log A for alpha >= 3/2 (vortex pair free energy),
    A^(3/2 - alpha) for 1/2 < alpha < 3/2.  Symmetric phase: the
    boundary energy gives A^(2 - 2 alpha) for alpha < 1 (fractal) and a
    bounded (area-law) entropy for alpha >= 1.
    """
    if alpha <= 0.5:
        raise DomainError(f"alpha must exceed 1/2, got {alpha}")
    if phase is Phase.BROKEN:
        if alpha >= 1.5:
            return EntropyScalingForm("log", None)
        return EntropyScalingForm("power", 1.5 - alpha)
    if alpha < 1.0:
        return EntropyScalingForm("power", 2.0 - 2.0 * alpha)
    return EntropyScalingForm("bounded", None)
