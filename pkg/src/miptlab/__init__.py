"""miptlab: numerical laboratory for monitored long-range Brownian chains.

Analytic pipeline (special functions, coupling kernels, mean-field saddle
points, Landau-Ginzburg lattice minimization, entanglement/QECC scaling
laws, SYK-chain Goldstone analysis) cross-validated by an exact
small-system quantum-trajectory simulator.
"""

__version__ = "0.1.0"

from .couplings import CouplingSpec, KernelForm  # noqa: F401
from .meanfield import MeanFieldParams, Phase  # noqa: F401
from .montecarlo import CircuitParams  # noqa: F401
from .qecc import PhasePoint  # noqa: F401
from .syk import SykParams  # noqa: F401
