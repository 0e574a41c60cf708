"""Closed-form entanglement scaling and error-correcting-code calculators.

In the symmetry-broken (volume-law) phase, monitored dynamics encodes the
reference into the chain as a quantum code.  With wall tension sigma, time
correlation length xi_t and upsilon = 2 - 2*alpha, the quasi-entropy
branches are

    S_A / N = c xi_t A^upsilon                  (symmetric phase)
    S_A / N = sigma A + c xi_t A^upsilon        (broken phase)

(all energies in units of the coupling scale J; sigma, xi_t, c are fitted
inputs from the lattice sweeps, never hard-coded).  The complement
entropy is the cheaper of two domain-wall configurations; the crossover
size A* = c xi_t L^upsilon / (2 sigma) separates the region whose loss
reveals nothing about the reference (mutual information exactly zero at
leading large-N order) from the region that does, so N A* is the
contiguous code distance.  All expressions here are the leading
(A << L, large-N) forms used consistently: the second configuration is
written so the two branches cross exactly at A*.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .meanfield import Phase


class ScalingForm(Enum):
    LOG = "log"
    POWER = "power"
    BOUNDED = "bounded"


@dataclass(frozen=True)
class PhasePoint:
    """A point of the phase diagram with its fitted scaling inputs."""

    alpha: float
    gamma_over_J: float
    phase: Phase
    sigma: float = 1.0
    xi_t: float = 1.0
    c_fit: float = 1.0
    N: int = 1
    L: int = 256

    def __post_init__(self):
        if self.alpha <= 0.5:
            raise DomainError(f"alpha must exceed 1/2, got {self.alpha}")
        if self.xi_t <= 0:
            raise DomainError("xi_t must be positive")
        if self.phase is Phase.BROKEN and self.sigma <= 0:
            raise DomainError("broken phase requires sigma > 0")

    @property
    def upsilon(self) -> float:
        return 2.0 - 2.0 * self.alpha


def entropy_scaling(p: PhasePoint, A: float) -> float:
    """Quasi-entropy of a contiguous subregion of size A (A = 0 -> 0).

    For alpha >= 1 the power term decays with A; the branches then
    reproduce the pure area law (symmetric) and pure volume law (broken).
    """
    if A < 0 or A > p.L:
        raise DomainError(f"need 0 <= A <= L, got A = {A}")
    if A == 0:
        return 0.0
    power = p.c_fit * p.xi_t * A**p.upsilon
    if p.phase is Phase.SYMMETRIC:
        return p.N * power
    return p.N * (p.sigma * A + power)


def reference_entropy(p: PhasePoint) -> float:
    """Code rate: S_R = N sigma L in the broken phase."""
    _require_broken(p)
    return p.N * p.sigma * p.L


def a_star(p: PhasePoint) -> float:
    """Crossover size A* = c xi_t L^upsilon / (2 sigma)."""
    _require_broken(p)
    return p.c_fit * p.xi_t * p.L**p.upsilon / (2.0 * p.sigma)


def complement_entropy(p: PhasePoint, A: float) -> tuple:
    """S of the complement region: min over the two wall configurations.

    Returns (value, winning_branch) with branch 1 = wall around A plus
    wall around the reference, branch 2 = single wall around the
    complement (leading A << L form, crossing branch 1 exactly at A*).
    """
    _require_broken(p)
    branch1 = entropy_scaling(p, A) + reference_entropy(p)
    branch2 = p.N * (
        p.sigma * (p.L - A)
        + p.c_fit * p.xi_t * (p.L**p.upsilon + (A**p.upsilon if A > 0 else 0.0))
    )
    if branch1 <= branch2:
        return branch1, 1
    return branch2, 2


def mutual_information(p: PhasePoint, A: float) -> float:
    """I(A : R) = S_A + S_R - S_{A^c}; exactly 0 below A*, growing above."""
    value, branch = complement_entropy(p, A)
    if branch == 1:
        return 0.0
    return entropy_scaling(p, A) + reference_entropy(p) - value


@dataclass(frozen=True)
class CodeDistance:
    form: ScalingForm
    value: float = math.nan  # N * A_star when form is POWER

    @property
    def is_power_law(self) -> bool:
        return self.form is ScalingForm.POWER


def code_distance(p: PhasePoint) -> CodeDistance:
    """Contiguous code distance of the broken-phase code.

    N A* ~ N L^(2 - 2 alpha) for alpha < 1.  For alpha >= 1 the distance
    is 1/N-suppressed and grows only logarithmically with L; no prefactor
    is defined at leading order, so only the branch flag is returned.
    """
    _require_broken(p)
    if p.alpha >= 1.0:
        return CodeDistance(ScalingForm.LOG)
    return CodeDistance(ScalingForm.POWER, p.N * a_star(p))


def _require_broken(p: PhasePoint):
    if p.phase is not Phase.BROKEN:
        raise DomainError("defined only in the symmetry-broken phase")


@dataclass(frozen=True)
class CriticalExponents:
    z: float
    nu: float
    nu_source: str


def critical_exponents(alpha: float) -> CriticalExponents:
    """Dynamical exponent z(alpha) and the free-fermion nu.

    z = 1 for 2 alpha > 3 and z = (2 alpha - 1)/2 for 1 < 2 alpha < 3
    (the branches agree at alpha = 3/2).  nu = 1 is the free-fermion
    stiffness exponent; the interacting nu(alpha) curve has no closed
    form and is only available as an empirical fit from lattice sweeps.
    """
    if alpha <= 0.5:
        raise DomainError(f"alpha must exceed 1/2, got {alpha}")
    z = 1.0 if 2.0 * alpha >= 3.0 else (2.0 * alpha - 1.0) / 2.0
    return CriticalExponents(z=z, nu=1.0, nu_source="free-fermion")
