"""State-vector kernels with a compiled core and a pure-numpy fallback.

The compiled extension (Cython) is selected automatically when it was
built; set MIPTLAB_PURE_PYTHON=1 to force the fallback (used by the
parity tests and the benchmark).  `backend_name()` reports the choice.
"""

import os

from . import pure

_FORCED_PURE = os.environ.get("MIPTLAB_PURE_PYTHON", "") not in ("", "0")

if not _FORCED_PURE:
    try:
        from . import _core as _impl
    except ImportError:  # extension not built
        _impl = pure
else:
    _impl = pure

apply_pauli_pair_rotations = _impl.apply_pauli_pair_rotations
apply_single_qubit_gates = _impl.apply_single_qubit_gates
apply_diagonal_measurement = _impl.apply_diagonal_measurement


def backend_name() -> str:
    return "compiled" if _impl is not pure else "pure-python"
