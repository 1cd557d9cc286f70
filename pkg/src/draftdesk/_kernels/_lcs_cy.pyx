# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled LCS kernel; semantics identical to _lcs_py.lcs_length_ids."""

from libc.stdlib cimport calloc, free


def lcs_length_ids(a, b):
    if len(b) > len(a):
        a, b = b, a
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(b)
    if m == 0 or n == 0:
        return 0

    cdef int *xa = <int *> calloc(m, sizeof(int))
    cdef int *xb = <int *> calloc(n, sizeof(int))
    cdef int *row = <int *> calloc(n + 1, sizeof(int))
    if xa == NULL or xb == NULL or row == NULL:
        free(xa); free(xb); free(row)
        raise MemoryError()

    cdef Py_ssize_t i, j
    cdef int prev_diag, tmp, xi, left
    try:
        for i in range(m):
            xa[i] = a[i]
        for j in range(n):
            xb[j] = b[j]
        for i in range(m):
            prev_diag = 0
            xi = xa[i]
            for j in range(1, n + 1):
                tmp = row[j]
                if xi == xb[j - 1]:
                    row[j] = prev_diag + 1
                else:
                    left = row[j - 1]
                    if left > row[j]:
                        row[j] = left
                prev_diag = tmp
        return row[n]
    finally:
        free(xa)
        free(xb)
        free(row)
