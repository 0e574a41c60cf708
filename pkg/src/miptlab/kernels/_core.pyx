# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled state-vector kernels (hot inner loops of the trajectory
simulator).  Semantics identical to kernels/pure.py; see that module for
the conventions."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt

ctypedef double complex cplx


def apply_pauli_pair_rotations(
    cplx[::1] psi,
    long[::1] qubits1,
    long[::1] paulis1,
    long[::1] qubits2,
    long[::1] paulis2,
    double[::1] angles,
):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t n_terms = angles.shape[0]
    cdef Py_ssize_t m, b, src, c_idx, half
    cdef long q1, q2, p1, p2
    cdef unsigned long mask, f1, f2, hb, low
    cdef double c, s, th
    cdef cplx a10, a11, a20, a21, ph_b, ph_src, amp_b, amp_src, minus_is
    cdef cplx tab[4]
    cdef int i1, i2
    for m in range(n_terms):
        q1 = qubits1[m]; p1 = paulis1[m]
        q2 = qubits2[m]; p2 = paulis2[m]
        th = angles[m]
        c = cos(th); s = sin(th)
        minus_is = -1j * s
        if p1 == 0:
            f1 = 1; a10 = 1; a11 = 1
        elif p1 == 1:
            f1 = 1; a10 = 1j; a11 = -1j
        else:
            f1 = 0; a10 = 1; a11 = -1
        if p2 == 0:
            f2 = 1; a20 = 1; a21 = 1
        elif p2 == 1:
            f2 = 1; a20 = 1j; a21 = -1j
        else:
            f2 = 0; a20 = 1; a21 = -1
        # phase table indexed by (bit(q1) << 1) | bit(q2), scaled by -i s
        tab[0] = minus_is * a10 * a20
        tab[1] = minus_is * a10 * a21
        tab[2] = minus_is * a11 * a20
        tab[3] = minus_is * a11 * a21
        mask = (f1 << q1) | (f2 << q2)
        if mask == 0:
            for b in range(dim):
                i1 = (((b >> q1) & 1) << 1) | ((b >> q2) & 1)
                psi[b] = psi[b] * (c + tab[i1])
        else:
            # iterate only over orbit representatives: insert a 0 bit at
            # the highest set bit of mask
            hb = mask
            hb |= hb >> 1; hb |= hb >> 2; hb |= hb >> 4
            hb |= hb >> 8; hb |= hb >> 16; hb |= hb >> 32
            hb = (hb >> 1) + 1
            low = hb - 1
            half = dim >> 1
            for c_idx in range(half):
                b = (c_idx & low) | ((c_idx & ~low) << 1)
                src = b ^ mask
                i1 = (((b >> q1) & 1) << 1) | ((b >> q2) & 1)
                i2 = (((src >> q1) & 1) << 1) | ((src >> q2) & 1)
                amp_b = psi[b]
                amp_src = psi[src]
                psi[b] = c * amp_b + tab[i2] * amp_src
                psi[src] = c * amp_src + tab[i1] * amp_b
    return np.asarray(psi.base if psi.base is not None else psi)


def apply_single_qubit_gates(cplx[::1] psi, long[::1] qubits, cplx[:, :, ::1] mats):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t n_gates = qubits.shape[0]
    cdef Py_ssize_t m, b, partner
    cdef long q
    cdef unsigned long bit
    cdef cplx u00, u01, u10, u11, lo, hi
    for m in range(n_gates):
        q = qubits[m]
        bit = 1u << q
        u00 = mats[m, 0, 0]; u01 = mats[m, 0, 1]
        u10 = mats[m, 1, 0]; u11 = mats[m, 1, 1]
        for b in range(dim):
            if (b & bit) == 0:
                partner = b | bit
                lo = psi[b]
                hi = psi[partner]
                psi[b] = u00 * lo + u01 * hi
                psi[partner] = u10 * lo + u11 * hi
    return np.asarray(psi.base if psi.base is not None else psi)


def apply_diagonal_measurement(cplx[::1] psi, double[::1] weights, double theta):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t n = weights.shape[0]
    cdef Py_ssize_t b, q
    cdef double lam, factor, norm_sq, inv_sqrt2
    cdef cplx amp
    inv_sqrt2 = 1.0 / sqrt(2.0)
    norm_sq = 0.0
    for b in range(dim):
        lam = 0.0
        for q in range(n):
            if weights[q] != 0.0:
                if ((b >> q) & 1) == 0:
                    lam += 0.5 * weights[q]
                else:
                    lam -= 0.5 * weights[q]
        factor = (cos(theta * lam) - sin(theta * lam)) * inv_sqrt2
        amp = psi[b] * factor
        psi[b] = amp
        norm_sq += amp.real * amp.real + amp.imag * amp.imag
    return sqrt(norm_sq)
