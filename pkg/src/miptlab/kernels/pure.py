"""Pure-numpy state-vector kernels (fallback implementation).

Little-endian convention: qubit q is bit q of the basis index.  All three
operations mutate the state in place and are semantically identical to
the compiled twins in _core.pyx; wherever both are importable they agree
to rounding (see tests/test_kernels.py and benchmarks/bench_kernels.py).
"""

import numpy as np

# Pauli codes
PAULI_X, PAULI_Y, PAULI_Z = 0, 1, 2

_SQRT1_2 = 1.0 / np.sqrt(2.0)


def _pauli_action(code: int, n_qubits: int, qubit: int):
    """(flips_bit, phase0, phase1): P|b> = phase[bit] |b ^ (flip << qubit)>."""
    if code == PAULI_X:
        return True, 1.0 + 0.0j, 1.0 + 0.0j
    if code == PAULI_Y:
        return True, 1.0j, -1.0j
    return False, 1.0 + 0.0j, -1.0 + 0.0j


def apply_pauli_pair_rotations(psi, qubits1, paulis1, qubits2, paulis2, angles):
    """Apply exp(-i theta_m P1_m P2_m) for each term m, in order.

    P1, P2 are single-qubit Paulis on distinct qubits.  Each rotation is
    exactly unitary: psi <- cos(t) psi - i sin(t) (P1 P2 psi).
    """
    n = int(np.log2(len(psi)))
    dim = len(psi)
    idx = np.arange(dim)
    for q1, p1, q2, p2, th in zip(qubits1, paulis1, qubits2, paulis2, angles):
        f1, a10, a11 = _pauli_action(p1, n, q1)
        f2, a20, a21 = _pauli_action(p2, n, q2)
        mask = (f1 << int(q1)) | (f2 << int(q2))
        bit1 = (idx >> int(q1)) & 1
        bit2 = (idx >> int(q2)) & 1
        phase = np.where(bit1 == 0, a10, a11) * np.where(bit2 == 0, a20, a21)
        c, s = np.cos(th), np.sin(th)
        if mask:
            src = idx ^ mask
            pauli_psi = phase[src] * psi[src]
        else:
            pauli_psi = phase * psi
        psi[:] = c * psi - 1j * s * pauli_psi
    return psi


def apply_single_qubit_gates(psi, qubits, mats):
    """Apply the 2x2 matrices mats[m] to qubits[m], in order."""
    n = int(np.log2(len(psi)))
    for q, u in zip(qubits, mats):
        q = int(q)
        t = psi.reshape(2 ** (n - 1 - q), 2, 2**q)
        lo = t[:, 0, :].copy()
        hi = t[:, 1, :]
        t[:, 0, :] = u[0, 0] * lo + u[0, 1] * hi
        t[:, 1, :] = u[1, 0] * lo + u[1, 1] * hi
    return psi


def apply_diagonal_measurement(psi, weights, theta):
    """Apply (cos(theta O) - sin(theta O))/sqrt(2) with O diagonal.

    O = sum_q weights[q] * sz_q / 2 in the measurement eigenbasis
    (sz eigenvalue +1 for bit 0).  Returns the norm of the result; the
    state is NOT renormalized here.
    """
    n = len(weights)
    lam = np.zeros(len(psi))
    idx = np.arange(len(psi))
    for q in range(n):
        w = weights[q]
        if w == 0.0:
            continue
        bit = (idx >> q) & 1
        lam += np.where(bit == 0, 0.5 * w, -0.5 * w)
    factor = (np.cos(theta * lam) - np.sin(theta * lam)) * _SQRT1_2
    psi *= factor
    return float(np.linalg.norm(psi))
