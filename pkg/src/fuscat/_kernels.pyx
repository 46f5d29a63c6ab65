# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled pentagon sweep over dense multiplicity-free F arrays."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def pentagon(double complex[:, :, :, :, :, ::1] F, unsigned char[:, :, ::1] N):
    """Max pentagon residual; same contract as the pure-Python version."""
    cdef Py_ssize_t n = N.shape[0]
    cdef Py_ssize_t a, b, c, d, e, f, g, k, l, h
    cdef double complex lhs, rhs, diff
    cdef double r, worst = 0.0
    cdef Py_ssize_t wit[9]
    for a in range(9):
        wit[a] = 0
    with nogil:
        for a in range(n):
            for b in range(n):
                for f in range(n):
                    if not N[a, b, f]:
                        continue
                    for c in range(n):
                        for g in range(n):
                            if not N[f, c, g]:
                                continue
                            for d in range(n):
                                for l in range(n):
                                    if not N[c, d, l]:
                                        continue
                                    for k in range(n):
                                        if not N[b, l, k]:
                                            continue
                                        for e in range(n):
                                            if not (N[g, d, e] and N[a, k, e] and N[f, l, e]):
                                                continue
                                            lhs = F[f, c, d, e, g, l] * F[a, b, l, e, f, k]
                                            rhs = 0
                                            for h in range(n):
                                                if N[b, c, h] and N[a, h, g] and N[h, d, k]:
                                                    rhs = rhs + F[a, b, c, g, f, h] * F[a, h, d, e, g, k] * F[b, c, d, k, h, l]
                                            diff = lhs - rhs
                                            r = sqrt(diff.real * diff.real + diff.imag * diff.imag)
                                            if r > worst:
                                                worst = r
                                                wit[0] = a; wit[1] = b; wit[2] = c; wit[3] = d; wit[4] = e
                                                wit[5] = f; wit[6] = g; wit[7] = k; wit[8] = l
    return float(worst), tuple(int(wit[i]) for i in range(9))
