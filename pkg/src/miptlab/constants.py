"""Numerical tolerances and series cutoffs used throughout the package.

Everything tunable lives here so the accuracy contract of each routine can
be audited in one place.  The values are conservative: each series/tail
combination was sized so that doubling the cutoff moves results by less
than the corresponding *_TOL.
"""

# --- special functions -------------------------------------------------
ZETA_SERIES_CUTOFF = 10_000     # direct summation range for zeta
ZETA_TOL = 1e-12                # relative accuracy target of riemann_zeta
POLYLOG_TOL = 1e-10             # relative accuracy target on the unit circle
POLYLOG_MAX_TERMS = 90          # terms of the small-k (Hurwitz-type) expansion
POLYLOG_INTEGER_SNAP = 1e-12    # |s - m| below which s is treated as integer m
POLYLOG_NEAR_INTEGER = 1e-6     # |s - m| strip delegated to mpmath (float
                                # evaluation of the two cancelling poles would
                                # lose too many digits there)
GAMMA_TOL = 1e-12

# --- couplings ---------------------------------------------------------
KERNEL_GRID_DEFAULT = 2**14     # momentum grid for infinite-chain inversions
NN_CLOSED_FORM_TOL = 1e-8       # numeric vs closed-form real-space kernel

# --- mean field --------------------------------------------------------
SADDLE_RESIDUAL_TOL = 1e-10     # max |grad I_MF| at a returned saddle
SADDLE_MAX_ITER = 100
CRITICAL_GAMMA_SNAP = 1e-12     # |Gamma - Gamma_c| treated as exactly critical

# --- lattice minimization ----------------------------------------------
LATTICE_GRAD_TOL = 1e-8         # per-site gradient norm at convergence
LATTICE_MAX_ITER = 200_000
PIN_STRENGTH_FACTOR = 50.0      # h = 50*sqrt(|delta|)

# --- trajectory simulator ----------------------------------------------
UNITARITY_TOL = 1e-12           # allowed |d log_norm| across a unitary step
MAX_TOTAL_QUBITS = 24           # 2*N*L hard bound (system + reference)
