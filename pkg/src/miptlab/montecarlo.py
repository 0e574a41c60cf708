"""Exact quantum-trajectory simulator of the monitored Brownian spin chain.

Desk-scale (2 N L <= 24 qubits) unbiased estimator of quasi-Renyi
entropies.  The chain has L clusters of N spin-1/2 each; every qubit is
initially EPR-paired with a reference qubit.  Each step of size dt runs

* a Brownian two-body unitary exp(-i H dt / 2), H built from fresh
  Gaussian couplings: intra-cluster S.S terms with variance
  J / (N (S+1)^4 dt/2) and inter-cluster terms with the power-law profile
  g J |r-r'|^(-2 alpha) / (N (S+1)^4 dt/2) (minimum-image distance on the
  periodic chain), applied by second-order Trotter splitting with a fixed
  lexicographic term order, and

* a weak measurement of the random one-body operator
  O = sum n_i.S_i, n Gaussian with variance gamma / ((S+1)^2 dt/2):
  coupling an ancilla via exp(-i (dt/2) O sx) and post-selecting sy = +1
  gives the non-unitary factor M = (cos((dt/2) O) - sin((dt/2) O))/sqrt(2),
  applied exactly by rotating every qubit into its n-hat eigenbasis
  (the per-qubit terms commute).  |M psi| <= |psi|, so the accumulated
  log-norm never increases.

States are stored normalized with the log-norm carried separately, so
long post-selected evolutions cannot underflow.  Randomness is
counter-based: every (seed, trajectory, step) opens its own Philox
stream, making trajectories reproducible bit-for-bit and embarrassingly
parallel; estimator reductions are indexed by trajectory and summed
pairwise, so results do not depend on scheduling.
"""

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .constants import MAX_TOTAL_QUBITS, UNITARITY_TOL
from .errors import DomainError, ResourceLimitError

SPIN_S = 0.5  # spin-1/2 clusters; (S+1) enters the Brownian variances
_S1_SQ = (SPIN_S + 1.0) ** 2
_S1_QU = (SPIN_S + 1.0) ** 4


class AnnihilatedTrajectory(Exception):
    """Post-selection reduced the state to exact norm zero."""


@dataclass(frozen=True)
class CircuitParams:
    """Parameters of one simulation ensemble."""

    N: int
    L: int
    gamma: float
    T: float
    J: float = 1.0
    g: float = 1.0
    alpha: float = 1.0
    dt: float = 0.01
    seed: int = 0
    n_traj: int = 100

    def __post_init__(self):
        if self.N < 1 or self.L < 1:
            raise DomainError("need N >= 1 and L >= 1")
        if 2 * self.N * self.L > MAX_TOTAL_QUBITS:
            raise ResourceLimitError(
                f"2*N*L = {2 * self.N * self.L} exceeds the "
                f"{MAX_TOTAL_QUBITS}-qubit bound"
            )
        if self.dt * self.J > 0.01 * (1 + 1e-12):
            raise DomainError(f"dt*J = {self.dt * self.J:g} exceeds 0.01")
        if self.gamma * self.dt > 0.1 * (1 + 1e-12):
            raise DomainError(f"gamma*dt = {self.gamma * self.dt:g} exceeds 0.1")
        if self.gamma < 0 or self.J <= 0 or self.g < 0:
            raise DomainError("need J > 0, gamma >= 0, g >= 0")

    @property
    def n_system(self) -> int:
        return self.N * self.L

    @property
    def n_qubits(self) -> int:
        return 2 * self.N * self.L

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))


@dataclass
class TrajectoryState:
    """Normalized amplitudes plus the accumulated log of the true norm."""

    psi: np.ndarray
    log_norm: float = 0.0
    step: int = 0


@dataclass(frozen=True)
class TermTable:
    """Static two-body term list in lexicographic (r, r', i, j, a, b) order."""

    qubits1: np.ndarray
    paulis1: np.ndarray
    qubits2: np.ndarray
    paulis2: np.ndarray
    scales: np.ndarray  # standard deviation of each coupling
    n_scale: float      # standard deviation of each measurement field


def _min_image(r1: int, r2: int, L: int) -> int:
    d = abs(r1 - r2)
    return min(d, L - d)


_TERM_CACHE: dict = {}


def term_table(params: CircuitParams) -> TermTable:
    """Build (and cache) the coupling term list and draw scales."""
    key = (params.N, params.L, params.J, params.g, params.alpha, params.dt)
    if key in _TERM_CACHE:
        return _TERM_CACHE[key]
    N, L = params.N, params.L
    half_dt = params.dt / 2.0
    scale_intra = math.sqrt(params.J / (N * _S1_QU * half_dt))
    rows = []
    # lexicographic in (r, r', i, j, a, b); r' = r holds the intra terms
    # (i < j), r' != r the independently drawn ordered inter pairs
    for r in range(L):
        for rp in range(L):
            if rp == r:
                for i in range(N):
                    for j in range(i + 1, N):
                        for a in range(3):
                            for b in range(3):
                                rows.append((r * N + i, a, r * N + j, b,
                                             scale_intra))
            else:
                d = _min_image(r, rp, L)
                scale = math.sqrt(
                    params.g * params.J * d ** (-2.0 * params.alpha)
                    / (N * _S1_QU * half_dt)
                )
                for i in range(N):
                    for j in range(N):
                        for a in range(3):
                            for b in range(3):
                                rows.append((r * N + i, a, rp * N + j, b, scale))
    if rows:
        q1, p1, q2, p2, sc = (np.asarray(x) for x in zip(*rows))
    else:
        q1 = p1 = q2 = p2 = np.zeros(0, dtype=int)
        sc = np.zeros(0)
    table = TermTable(
        qubits1=q1.astype(np.int64), paulis1=p1.astype(np.int64),
        qubits2=q2.astype(np.int64), paulis2=p2.astype(np.int64),
        scales=sc.astype(float),
        n_scale=math.sqrt(params.gamma / (_S1_SQ * half_dt)),
    )
    _TERM_CACHE[key] = table
    return table


def step_rng(params: CircuitParams, trajectory: int, step: int) -> np.random.Generator:
    """Counter-based stream for one (seed, trajectory, step)."""
    bg = np.random.Philox(key=params.seed, counter=[0, 0, step, trajectory])
    return np.random.Generator(bg)


@dataclass(frozen=True)
class StepCoefficients:
    couplings: np.ndarray  # one coefficient per term-table row
    n_fields: np.ndarray   # (N*L, 3) measurement field vectors


def sample_step_hamiltonian(params: CircuitParams, trajectory: int,
                            step: int) -> StepCoefficients:
    """Draw all Brownian coefficients for one step (couplings first, then
    measurement fields -- the order is part of the determinism contract)."""
    table = term_table(params)
    gen = step_rng(params, trajectory, step)
    couplings = gen.standard_normal(len(table.scales)) * table.scales
    n_fields = gen.standard_normal((params.n_system, 3)) * table.n_scale
    return StepCoefficients(couplings=couplings, n_fields=n_fields)


def initial_state(params: CircuitParams) -> TrajectoryState:
    """System qubit k maximally entangled with reference qubit NL + k."""
    ns = params.n_system
    dim = 1 << params.n_qubits
    psi = np.zeros(dim, dtype=complex)
    amp = 2.0 ** (-ns / 2.0)
    for x in range(1 << ns):
        psi[x | (x << ns)] = amp
    return TrajectoryState(psi=psi)


def apply_unitary_step(state: TrajectoryState, coeffs: StepCoefficients,
                       params: CircuitParams) -> TrajectoryState:
    """exp(-i H dt/2) by symmetric (order-2) Trotter over the term list.

    Each term c S.S contributes a rotation angle c*dt/16 per half-sweep
    (S = sigma/2 twice, dt/2 evolution, halved again by the splitting).
    Exactly norm-preserving; drift beyond rounding raises.
    """
    table = term_table(params)
    if len(table.scales):
        theta = coeffs.couplings * (params.dt / 16.0)
        angles = np.concatenate([theta, theta[::-1]])
        q1 = np.concatenate([table.qubits1, table.qubits1[::-1]])
        p1 = np.concatenate([table.paulis1, table.paulis1[::-1]])
        q2 = np.concatenate([table.qubits2, table.qubits2[::-1]])
        p2 = np.concatenate([table.paulis2, table.paulis2[::-1]])
        kernels.apply_pauli_pair_rotations(state.psi, q1, p1, q2, p2, angles)
    norm = float(np.linalg.norm(state.psi))
    if abs(norm - 1.0) > max(UNITARITY_TOL, 1e-13 * len(table.scales)):
        raise RuntimeError(f"unitary step drifted the norm by {norm - 1.0:.2e}")
    state.psi /= norm
    return state


def _measurement_basis(n_fields: np.ndarray):
    """Per-qubit rotations into the n-hat eigenbasis and the weights |n|."""
    nx, ny, nz = n_fields[:, 0], n_fields[:, 1], n_fields[:, 2]
    w = np.sqrt(nx * nx + ny * ny + nz * nz)
    safe = np.where(w > 0, w, 1.0)
    ct = np.clip(nz / safe, -1.0, 1.0)
    half = 0.5 * np.arccos(ct)
    phi = np.arctan2(ny, nx)
    c, s = np.cos(half), np.sin(half)
    eip = np.exp(1j * phi)
    rots = np.empty((len(w), 2, 2), dtype=complex)
    rots[:, 0, 0] = c
    rots[:, 0, 1] = -s * np.conj(eip)
    rots[:, 1, 0] = s * eip
    rots[:, 1, 1] = c
    return rots, w


def apply_measurement_step(state: TrajectoryState, n_fields: np.ndarray,
                           params: CircuitParams) -> TrajectoryState:
    """Exact post-selected weak measurement of O = sum n_i . S_i.

    M = (cos((dt/2) O) - sin((dt/2) O)) / sqrt(2): the per-qubit terms of
    O commute, so each qubit is rotated into its n-hat basis, O becomes
    diagonal with eigenvalues sum_i (+-)|n_i|/2, and the diagonal factor
    is applied exactly.  log_norm decreases by -log |M psi| >= 0.
    """
    rots, weights = _measurement_basis(np.asarray(n_fields, dtype=float))
    qubits = np.arange(params.n_system, dtype=np.int64)
    full_weights = np.zeros(params.n_qubits)
    full_weights[: params.n_system] = weights
    dagger = np.conj(np.transpose(rots, (0, 2, 1)))
    kernels.apply_single_qubit_gates(state.psi, qubits, np.ascontiguousarray(dagger))
    norm = kernels.apply_diagonal_measurement(state.psi, full_weights,
                                              params.dt / 2.0)
    if norm == 0.0:
        raise AnnihilatedTrajectory
    state.psi /= norm
    kernels.apply_single_qubit_gates(state.psi, qubits, np.ascontiguousarray(rots))
    state.psi /= float(np.linalg.norm(state.psi))
    state.log_norm += math.log(norm)
    return state


def run_trajectory(params: CircuitParams, trajectory: int) -> TrajectoryState:
    """Full circuit for one trajectory index."""
    state = initial_state(params)
    for step in range(params.n_steps):
        coeffs = sample_step_hamiltonian(params, trajectory, step)
        apply_unitary_step(state, coeffs, params)
        apply_measurement_step(state, coeffs.n_fields, params)
        state.step = step + 1
    return state


# --- reduced-state functionals ---------------------------------------------


def reduced_density_matrix(psi: np.ndarray, qubits, n_qubits: int) -> np.ndarray:
    """Density matrix of the given qubit subset of a pure normalized state."""
    qubits = sorted(int(q) for q in qubits)
    tensor = psi.reshape([2] * n_qubits)  # axis a holds qubit n_qubits-1-a
    axes_a = [n_qubits - 1 - q for q in reversed(qubits)]
    rest = [a for a in range(n_qubits) if a not in axes_a]
    m = np.transpose(tensor, axes_a + rest).reshape(1 << len(qubits), -1)
    return m @ m.conj().T


def purity(psi: np.ndarray, qubits, n_qubits: int) -> float:
    rho = reduced_density_matrix(psi, qubits, n_qubits)
    return float(np.sum(np.abs(rho) ** 2).real)


def cluster_block_qubits(params: CircuitParams, block) -> list:
    """System qubits of the contiguous cluster interval [lo, hi)."""
    lo, hi = block
    if not 0 <= lo <= hi <= params.L:
        raise DomainError(f"cluster block {block} outside [0, {params.L})")
    return list(range(lo * params.N, hi * params.N))


# --- estimators -------------------------------------------------------------


@dataclass(frozen=True)
class QuasiEntropyEstimate:
    value: float
    stderr: float
    n_traj_effective: int
    n_annihilated: int
    numerators: np.ndarray = field(repr=False)   # tr rho_A^2 per trajectory
    denominators: np.ndarray = field(repr=False)  # (tr rho_A)^2 per trajectory


def _trajectory_moment(args):
    params, trajectory, qubits = args
    try:
        state = run_trajectory(params, trajectory)
    except AnnihilatedTrajectory:
        return trajectory, -math.inf, 0.0, True
    # log of tr rho; exponentiated only after a common shift so that the
    # deterministic 1/sqrt(2)-per-step factor can never underflow
    log_w = 2.0 * state.log_norm
    pur = purity(state.psi, qubits, params.n_qubits)
    return trajectory, log_w, pur, False


def _jackknife_log_ratio(num: np.ndarray, den: np.ndarray):
    """Mean and jackknife stderr of -log(mean(num)/mean(den))."""
    ns = num.sum()
    ds = den.sum()
    n = len(num)
    value = -math.log(ns / ds)
    loo = -np.log((ns - num) / (ds - den))
    se = math.sqrt((n - 1) / n * np.sum((loo - loo.mean()) ** 2))
    return value, se


def estimate_quasi_renyi(params: CircuitParams, block,
                         processes: int | None = None) -> QuasiEntropyEstimate:
    """Quasi-Renyi-2 entropy of a contiguous cluster block:

        S2 = -log( E[tr rho_A^2] / E[(tr rho_A)^2] )

    with rho the unnormalized post-selected state (weights exp(2 log_norm)).
    Annihilated trajectories contribute zero weight to both averages.
    """
    qubits = cluster_block_qubits(params, block)
    if not qubits:
        raise DomainError("empty cluster block")
    jobs = [(params, t, qubits) for t in range(params.n_traj)]
    results = _map_jobs(_trajectory_moment, jobs, processes)
    log_w = np.full(params.n_traj, -np.inf)
    pur = np.zeros(params.n_traj)
    annihilated = 0
    for traj, lw, p_i, dead in results:
        log_w[traj] = lw
        pur[traj] = p_i
        annihilated += dead
    shift = log_w.max()
    if not np.isfinite(shift):
        raise DomainError("every trajectory was annihilated")
    rel = np.exp(2.0 * (log_w - shift))  # (tr rho / max)^2
    num = rel * pur
    den = rel
    value, se = _jackknife_log_ratio(num, den)
    return QuasiEntropyEstimate(value=value, stderr=se,
                                n_traj_effective=params.n_traj - annihilated,
                                n_annihilated=annihilated,
                                numerators=num, denominators=den)


def _map_jobs(fn, jobs, processes):
    if processes is None:
        processes = min(2, os.cpu_count() or 1)
    if processes <= 1 or len(jobs) < 4:
        return [fn(j) for j in jobs]
    import multiprocessing as mp

    with mp.Pool(processes) as pool:
        return pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * processes)))


# --- replica-limit identity --------------------------------------------------


@dataclass(frozen=True)
class ReplicaIdentityReport:
    lhs: float    # two-sided n -> 1 limit of the quasi-Renyi entropy
    rhs: float    # weighted trajectory average of the von Neumann entropy
    gap: float
    stderr: float


def _trajectory_spectrum(args):
    params, trajectory, qubits = args
    try:
        state = run_trajectory(params, trajectory)
    except AnnihilatedTrajectory:
        return trajectory, -math.inf, None
    rho = reduced_density_matrix(state.psi, qubits, params.n_qubits)
    evs = np.clip(np.linalg.eigvalsh(rho).real, 0.0, None)
    evs = evs / evs.sum()
    return trajectory, 2.0 * state.log_norm, evs


def replica_limit_identity_check(params: CircuitParams, block,
                                 h: float = 1e-3, split: bool = True,
                                 processes: int | None = None) -> ReplicaIdentityReport:
    """Check that the n -> 1 quasi-entropy equals the weighted von Neumann
    average -E[tr rho_A tr(rho~ log rho~)] / E[tr rho_A].

    lhs: two-sided numerical limit of S^(n) at n = 1 +- h through the
    eigenvalue powers of the per-trajectory reduced matrices; rhs: the
    trajectory-weighted entropy.  The gap carries a jackknife error.

    With split=True the two sides are evaluated on disjoint trajectory
    halves (even/odd indices), making the gap a genuine statistical
    comparison.  On a shared sample the two estimators coincide
    identically and the gap is just the O(h^2) finite-difference
    truncation -- a much stronger but purely deterministic statement,
    exercised separately in the tests with split=False.
    """
    if params.n_qubits > 16:
        raise DomainError("identity check is restricted to 2NL <= 16")
    qubits = cluster_block_qubits(params, block)
    jobs = [(params, t, qubits) for t in range(params.n_traj)]
    results = _map_jobs(_trajectory_spectrum, jobs, processes)
    n = params.n_traj
    log_w = np.full(n, -np.inf)
    spectra = [None] * n
    for traj, lw, evs in results:
        log_w[traj] = lw
        spectra[traj] = evs
    shift = log_w[np.isfinite(log_w)].max()
    tr_up = np.zeros(n)      # tr rho_A^(1+h), in units of the common shift
    tr_dn = np.zeros(n)      # tr rho_A^(1-h)
    w_up = np.zeros(n)       # (tr rho_A)^(1+h)
    w_dn = np.zeros(n)
    wvn = np.zeros(n)        # w * S_vN(rho~)
    w_arr = np.zeros(n)
    for traj in range(n):
        evs = spectra[traj]
        if evs is None:
            continue
        w = math.exp(log_w[traj] - shift)
        w_arr[traj] = w
        pos = evs[evs > 0]
        w_up[traj] = w ** (1 + h)
        w_dn[traj] = w ** (1 - h)
        tr_up[traj] = w_up[traj] * np.sum(pos ** (1 + h))
        tr_dn[traj] = w_dn[traj] * np.sum(pos ** (1 - h))
        wvn[traj] = -w * np.sum(pos * np.log(pos))

    idx = np.arange(n)
    lhs_mask_full = (idx % 2 == 0) if (split and n > 1) else np.ones(n, bool)
    rhs_mask_full = (idx % 2 == 1) if (split and n > 1) else np.ones(n, bool)

    def gap_of(keep):
        lm = lhs_mask_full & keep
        rm = rhs_mask_full & keep
        s_up = math.log(tr_up[lm].mean() / w_up[lm].mean()) / (-h)
        s_dn = math.log(tr_dn[lm].mean() / w_dn[lm].mean()) / (h)
        lhs = 0.5 * (s_up + s_dn)
        rhs = wvn[rm].mean() / w_arr[rm].mean()
        return lhs, rhs

    full = np.ones(n, dtype=bool)
    lhs, rhs = gap_of(full)
    gaps = []
    for t in range(n):
        keep = full.copy()
        keep[t] = False
        l_i, r_i = gap_of(keep)
        gaps.append(l_i - r_i)
    gaps = np.asarray(gaps)
    se = math.sqrt((n - 1) / n * np.sum((gaps - gaps.mean()) ** 2))
    return ReplicaIdentityReport(lhs=lhs, rhs=rhs, gap=lhs - rhs, stderr=se)


def chi_nm(params: CircuitParams, block, n: float, m: float,
           processes: int | None = None) -> float:
    """Generalized entropy chi^(n,m); chi at m = 1 is the quasi-Renyi S^(n)."""
    if n == 1.0:
        raise DomainError("n = 1 is the replica limit; use the identity check")
    qubits = cluster_block_qubits(params, block)
    jobs = [(params, t, qubits) for t in range(params.n_traj)]
    results = _map_jobs(_trajectory_spectrum, jobs, processes)
    log_w = np.full(params.n_traj, -np.inf)
    spectra = [None] * params.n_traj
    for traj, lw, evs in results:
        log_w[traj] = lw
        spectra[traj] = evs
    shift = log_w[np.isfinite(log_w)].max()
    num = np.zeros(params.n_traj)
    den = np.zeros(params.n_traj)
    for traj in range(params.n_traj):
        evs = spectra[traj]
        if evs is None:
            continue
        w = math.exp(log_w[traj] - shift)
        num[traj] = (w**n * np.sum(evs[evs > 0] ** n)) ** m
        den[traj] = w ** (n * m)
    return math.log(num.mean() / den.mean()) / (m * (1.0 - n))
