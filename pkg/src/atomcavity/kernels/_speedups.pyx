# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled reduced-density kernels (see package docstring for contracts)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def pure_reduced(const double complex[:, ::1] psi2):
    cdef Py_ssize_t dk = psi2.shape[0]
    cdef Py_ssize_t dr = psi2.shape[1]
    out_arr = np.empty((dk, dk), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, a
    cdef double complex acc
    for i in range(dk):
        for j in range(i + 1):
            acc = 0
            for a in range(dr):
                acc = acc + psi2[i, a] * psi2[j, a].conjugate()
            out[i, j] = acc
            if i != j:
                out[j, i] = acc.conjugate()
    return out_arr


def mixed_reduced(const double complex[:, ::1] rho, Py_ssize_t d_keep, Py_ssize_t d_rest):
    out_arr = np.empty((d_keep, d_keep), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, a
    cdef double complex acc
    for i in range(d_keep):
        for j in range(i + 1):
            acc = 0
            for a in range(d_rest):
                acc = acc + rho[i * d_rest + a, j * d_rest + a]
            out[i, j] = acc
            if i != j:
                out[j, i] = acc.conjugate()
    return out_arr
