"""Bulk mean-field theory of the replica order parameter.

The four-replica dynamics of one cluster reduces to a two-state system
("r-bit") driven by two real fields: phi (the symmetry-breaking order
parameter, odd under the replica swap) and Theta (a symmetric companion
field).  For space- and time-independent fields the action per cluster,
per qubit and per unit time is

    I(phi, Theta) = Jc (phi^2 - 3 Theta^2) - 9 (Gamma + 1/9) Theta
                    - sqrt(phi^2 + Theta^2) / 2

with Gamma = gamma / J_hat(0) the reduced measurement rate and
Jc = (27/16) sum_q Jeff(q) the summed effective interaction.  Its saddle
points are known in closed form:

    symmetric (phi* = 0):   Theta* = -3 (Gamma_c + 2 Gamma) / (4 Jc)
    broken (Gamma < Gamma_c): Theta* = -9 (Gamma + Gamma_c) / (8 Jc),
                              phi*^2 = 1/(16 Jc^2) - Theta*^2

with Gamma_c = 1/9, so phi* ~ sqrt(Gamma_c - Gamma).  solve_saddle uses
them as Newton starting points and polishes to residual < 1e-10; the
broken pair (+phi, -phi) is reported through the +phi member.

lg_coefficients expands the full space-time action around the symmetric
saddle into the long-range phi^4 theory minimized by the lattice module.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import CRITICAL_GAMMA_SNAP, SADDLE_MAX_ITER, SADDLE_RESIDUAL_TOL
from .couplings import CouplingSpec
from .errors import ConvergenceError, DomainError

GAMMA_C = 1.0 / 9.0  # critical reduced measurement rate


class Phase(Enum):
    SYMMETRIC = "symmetric"
    BROKEN = "broken"
    CRITICAL = "critical"


@dataclass(frozen=True)
class MeanFieldParams:
    """Reduced parameters of the bulk theory for a given measurement rate."""

    spec: CouplingSpec
    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma}")

    @property
    def Gamma(self) -> float:
        """Reduced measurement rate gamma / J_hat(0)."""
        return self.gamma / self.spec.j_hat_zero

    @property
    def jcal(self) -> float:
        """Jc = (27/16) sum_q Jeff(q) = 27 / (16 J_hat(0)).

        The sum of the inverse-transformed kernel telescopes to
        1/J_hat(0) identically (verified numerically in the tests), so no
        inversion is needed here.
        """
        return 27.0 / (16.0 * self.spec.j_hat_zero)


@dataclass(frozen=True)
class MeanFieldPoint:
    """A saddle of the bulk action; phi >= 0 by convention, the broken
    partner at -phi is physics (spontaneous pair), not separate data."""

    phi: float
    theta: float
    phase: Phase
    action: float
    residual: float


def gamma_c(spec: CouplingSpec) -> float:
    """Critical measurement rate gamma_c = J_hat(0)/9 = (J/9)(1 + 2 g zeta(2 alpha)).

    CouplingSpec construction already signals the divergent regime
    2*alpha <= 1, where gamma_c has no thermodynamic limit.
    """
    return spec.j_hat_zero / 9.0


def bulk_action(phi: float, theta: float, params: MeanFieldParams) -> float:
    """Bulk action per (N T L); exactly even in phi."""
    jc = params.jcal
    g = params.Gamma
    return (
        jc * (phi * phi - 3.0 * theta * theta)
        - 9.0 * (g + GAMMA_C) * theta
        - 0.5 * math.hypot(phi, theta)
    )


def bulk_action_gradient(phi: float, theta: float, params: MeanFieldParams):
    jc = params.jcal
    g = params.Gamma
    s = math.hypot(phi, theta)
    if s == 0.0:
        raise DomainError("gradient undefined at the origin (|field| = 0)")
    return (
        2.0 * jc * phi - 0.5 * phi / s,
        -6.0 * jc * theta - 9.0 * (g + GAMMA_C) - 0.5 * theta / s,
    )


def _bulk_action_hessian(phi: float, theta: float, params: MeanFieldParams):
    jc = params.jcal
    s = math.hypot(phi, theta)
    s3 = s * s * s
    hpp = 2.0 * jc - 0.5 * theta * theta / s3
    htt = -6.0 * jc - 0.5 * phi * phi / s3
    hpt = 0.5 * phi * theta / s3
    return np.array([[hpp, hpt], [hpt, htt]])


def _newton_polish(phi: float, theta: float, params: MeanFieldParams, fix_phi_zero: bool):
    """Damped Newton on the stationarity conditions from a closed-form start."""
    for _ in range(SADDLE_MAX_ITER):
        gp, gt = bulk_action_gradient(phi, theta, params)
        res = math.hypot(gp, gt) if not fix_phi_zero else abs(gt)
        if res < SADDLE_RESIDUAL_TOL:
            return phi, theta, res
        if fix_phi_zero:
            # one-dimensional Newton in theta on the phi = 0 axis
            jc = params.jcal
            step = gt / (-6.0 * jc)  # d(gt)/d(theta) at phi = 0, theta < 0
            theta -= step
        else:
            hess = _bulk_action_hessian(phi, theta, params)
            step = np.linalg.solve(hess, [gp, gt])
            phi, theta = phi - step[0], theta - step[1]
    gp, gt = bulk_action_gradient(phi, theta, params)
    res = math.hypot(gp, gt)
    raise ConvergenceError(
        f"saddle Newton did not reach {SADDLE_RESIDUAL_TOL:g}", residual=res
    )


def symmetric_saddle_theta(params: MeanFieldParams) -> float:
    """Closed-form Theta* of the symmetric saddle."""
    return -3.0 * (GAMMA_C + 2.0 * params.Gamma) / (4.0 * params.jcal)


def solve_saddle(params: MeanFieldParams) -> MeanFieldPoint:
    """Dominant saddle of the bulk action with phase classification.

    For Gamma > Gamma_c only the symmetric point is real; below it the
    broken pair dominates (strictly lower action) and the phi >= 0
    member is returned.  Exactly at Gamma_c (within 1e-12) the phase is
    CRITICAL and phi* = 0 by convention.
    """
    g = params.Gamma
    jc = params.jcal
    if abs(g - GAMMA_C) <= CRITICAL_GAMMA_SNAP:
        theta = symmetric_saddle_theta(params)
        phi, theta, res = _newton_polish(0.0, theta, params, fix_phi_zero=True)
        return MeanFieldPoint(0.0, theta, Phase.CRITICAL,
                              bulk_action(0.0, theta, params), res)
    if g > GAMMA_C:
        theta = symmetric_saddle_theta(params)
        phi, theta, res = _newton_polish(0.0, theta, params, fix_phi_zero=True)
        return MeanFieldPoint(0.0, theta, Phase.SYMMETRIC,
                              bulk_action(0.0, theta, params), res)
    theta = -9.0 * (g + GAMMA_C) / (8.0 * jc)
    phi_sq = 1.0 / (16.0 * jc * jc) - theta * theta
    phi = math.sqrt(max(phi_sq, 0.0))
    phi, theta, res = _newton_polish(phi, theta, params, fix_phi_zero=False)
    phi = abs(phi)
    return MeanFieldPoint(phi, theta, Phase.BROKEN,
                          bulk_action(phi, theta, params), res)


def symmetric_saddle(params: MeanFieldParams) -> MeanFieldPoint:
    """The phi = 0 saddle regardless of which phase dominates."""
    theta = symmetric_saddle_theta(params)
    phi, theta, res = _newton_polish(0.0, theta, params, fix_phi_zero=True)
    return MeanFieldPoint(0.0, theta, Phase.SYMMETRIC,
                          bulk_action(0.0, theta, params), res)


# --- r-bit propagator -----------------------------------------------------

TRACE_CLOSURE = "trace"


def rbit_log_propagator(phi_of_t, theta_of_t, T: float, boundary=TRACE_CLOSURE) -> float:
    """ln K for the two-state cluster propagator under driving fields.

    phi_of_t, theta_of_t: field samples on a uniform grid covering [0, T],
    interpreted as piecewise-constant over M = len(samples) steps of
    dt = T/M.  The propagator is the time-ordered product of the exact
    2x2 exponentials of (phi sigma_x + theta sigma_z) dt / 2, accumulated
    in normalized-matrix + log-magnitude form so arbitrarily long T
    cannot overflow.  boundary is TRACE_CLOSURE or a pair
    (initial, final) of 2-vectors; the identity-channel constant (B T/2)
    is not included -- it cancels in every entropy ratio.
    """
    phi = np.asarray(phi_of_t, dtype=float)
    theta = np.asarray(theta_of_t, dtype=float)
    if phi.shape != theta.shape or phi.ndim != 1 or len(phi) == 0:
        raise DomainError("field samples must be equal-length 1-d arrays")
    m = len(phi)
    dt = T / m
    fmax = max(np.abs(phi).max(), np.abs(theta).max())
    constant = np.all(phi == phi[0]) and np.all(theta == theta[0])
    # Each step is an exact 2x2 exponential, so constant fields need no
    # resolution; time-varying fields must be sampled finely enough that
    # piecewise-constant holds.
    if not constant and fmax > 0.0 and dt * fmax > 0.01 * (1.0 + 1e-9):
        raise DomainError(
            f"time step dt = {dt:.3g} too coarse for field scale {fmax:.3g}"
        )
    prod = np.eye(2)
    log_mag = 0.0
    for p, t in zip(phi, theta):
        h = 0.5 * dt * math.hypot(p, t)
        if h == 0.0:
            step = np.eye(2)
        else:
            n = math.hypot(p, t)
            sx = p / n
            sz = t / n
            ch, sh = math.cosh(h), math.sinh(h)
            step = np.array([[ch + sh * sz, sh * sx], [sh * sx, ch - sh * sz]])
        prod = step @ prod
        norm = np.linalg.norm(prod)
        prod /= norm
        log_mag += math.log(norm)
    if boundary == TRACE_CLOSURE:
        value = prod[0, 0] + prod[1, 1]
    else:
        initial, final = boundary
        value = float(np.asarray(final) @ prod @ np.asarray(initial))
    if value <= 0.0:
        raise DomainError("propagator matrix element is not positive")
    return log_mag + math.log(value)


# --- Landau-Ginzburg coefficients -----------------------------------------


@dataclass(frozen=True)
class LgCoefficients:
    """Coefficients of the long-range phi^4 theory (units of J = 1).

    beta: short-range gradient stiffness, b: long-range strength,
    delta: mass (> 0 in the broken phase), quartic fixed at 1/4 by the
    field rescaling.
    """

    beta: float
    b: float
    delta: float
    quartic: float = 0.25


def lg_coefficients(params: MeanFieldParams, mu: float) -> LgCoefficients:
    """Expand around the symmetric saddle into LG form.

    With th = |Theta*|/J and W = J/J_hat(0):

        beta  = 4 th^3 (27/16) e^{-2 mu} (1 - e^{-mu}) / (1 + e^{-mu})^3
        b     = 4 th^3 (27/16)
        delta = 8 th^3 ( 1/(4 th) - (27/16) W )

    mu is the fitted pole decay rate of the effective interaction.  The
    lattice sum of the pole piece in the mass term is evaluated exactly
    as W = J/J_hat(0) (its geometric-series form (1-e^{-mu})/(1+e^{-mu})
    is the pole-only approximation of the same sum), which makes delta
    vanish exactly at gamma = gamma_c:  sign(delta) = sign(gamma_c - gamma).
    """
    if mu <= 0 or math.isnan(mu):
        raise DomainError(f"pole decay rate mu must be positive, got {mu}")
    th = abs(symmetric_saddle_theta(params)) / params.spec.J
    w = params.spec.J / params.spec.j_hat_zero
    emu = math.exp(-mu)
    pref = 4.0 * th**3 * (27.0 / 16.0)
    beta = pref * emu * emu * (1.0 - emu) / (1.0 + emu) ** 3
    b = pref
    delta = 8.0 * th**3 * (0.25 / th - (27.0 / 16.0) * w)
    return LgCoefficients(beta=beta, b=b, delta=delta)
