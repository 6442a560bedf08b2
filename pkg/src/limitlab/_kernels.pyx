"""Compiled hot kernels: free-group orbit enumeration and circle double sums.

Mirrors the API of ``limitlab._kernels_py``; the DFS here keeps O(L) live
matrices instead of a whole word level, which is what makes long critical-
exponent runs cheap in memory.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport acosh, sqrt, pow, fabs

cnp.import_array()

DEF MAXL = 64


def free_level_counts(int two_r, int max_len):
    counts = np.empty(max_len, dtype=np.int64)
    cdef cnp.int64_t[::1] c = counts
    cdef int lev
    if max_len >= 1:
        c[0] = two_r
    for lev in range(1, max_len):
        c[lev] = c[lev - 1] * (two_r - 1)
    return counts


def orbit_stats(gens, int max_len, bint want_points=False, bint want_codes=False):
    """See limitlab._kernels_py.orbit_stats; identical contract and layout."""
    cdef cnp.complex128_t[:, :, ::1] g = np.ascontiguousarray(gens, dtype=np.complex128)
    cdef int two_r = g.shape[0]
    counts = free_level_counts(two_r, max_len)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    cdef cnp.int64_t[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef cnp.npy_intp total = offsets[-1]

    disp_arr = np.empty(total)
    depth_arr = np.empty(total, dtype=np.int8)
    points_arr = np.empty((total, 4)) if want_points else None
    codes_arr = np.full((total, max_len), -1, dtype=np.int8) if want_codes else None

    cdef double[::1] disp = disp_arr
    cdef cnp.int8_t[::1] depth = depth_arr
    cdef double[:, ::1] points = points_arr if want_points else np.empty((1, 4))
    cdef cnp.int8_t[:, ::1] codes = codes_arr if want_codes else np.empty((1, 1), dtype=np.int8)

    # DFS stacks: matrices, letters, slot index within the level
    cdef double complex mat[MAXL][2][2]
    cdef long long slot[MAXL]
    cdef int letter[MAXL]
    cdef int nextrank[MAXL]

    cdef int d = 1, k, c, limit, forbidden, j
    cdef long long s, pos
    cdef double complex a00, a01, a10, a11, p00, p01, p10, p11, w
    cdef double nf, t, zc

    mat[0][0][0] = 1.0
    mat[0][0][1] = 0.0
    mat[0][1][0] = 0.0
    mat[0][1][1] = 1.0
    nextrank[1] = 0

    while d >= 1:
        limit = two_r if d == 1 else two_r - 1
        if nextrank[d] >= limit:
            d -= 1
            continue
        k = nextrank[d]
        nextrank[d] += 1
        if d == 1:
            c = k
            s = k
        else:
            forbidden = letter[d - 1] ^ 1
            c = k if k < forbidden else k + 1
            s = slot[d - 1] * (two_r - 1) + k
        letter[d] = c
        slot[d] = s

        p00 = mat[d - 1][0][0]
        p01 = mat[d - 1][0][1]
        p10 = mat[d - 1][1][0]
        p11 = mat[d - 1][1][1]
        a00 = g[c, 0, 0] * p00 + g[c, 0, 1] * p10
        a01 = g[c, 0, 0] * p01 + g[c, 0, 1] * p11
        a10 = g[c, 1, 0] * p00 + g[c, 1, 1] * p10
        a11 = g[c, 1, 0] * p01 + g[c, 1, 1] * p11
        mat[d][0][0] = a00
        mat[d][0][1] = a01
        mat[d][1][0] = a10
        mat[d][1][1] = a11

        pos = off[d - 1] + s
        nf = (a00.real * a00.real + a00.imag * a00.imag
              + a01.real * a01.real + a01.imag * a01.imag
              + a10.real * a10.real + a10.imag * a10.imag
              + a11.real * a11.real + a11.imag * a11.imag)
        t = 0.5 * nf
        disp[pos] = acosh(t if t > 1.0 else 1.0)
        depth[pos] = <cnp.int8_t> d
        if want_points:
            w = a10 * a00.conjugate() + a11 * a01.conjugate()
            zc = 0.5 * (a00.real * a00.real + a00.imag * a00.imag
                        + a01.real * a01.real + a01.imag * a01.imag
                        - a10.real * a10.real - a10.imag * a10.imag
                        - a11.real * a11.real - a11.imag * a11.imag)
            points[pos, 0] = t
            points[pos, 1] = w.real
            points[pos, 2] = -w.imag
            points[pos, 3] = zc
        if want_codes:
            for j in range(d):
                codes[pos, j] = <cnp.int8_t> letter[j + 1]

        if d < max_len:
            d += 1
            nextrank[d] = 0

    return disp_arr, depth_arr, points_arr, codes_arr


def offset_power_sums(values, double p):
    """T_k = sum_i |a_i - a_{i+k mod M}|^p for k = 1 .. M-1."""
    cdef cnp.complex128_t[::1] a = np.ascontiguousarray(values, dtype=np.complex128)
    cdef Py_ssize_t m = a.shape[0]
    out_arr = np.empty(m - 1)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, i, j
    cdef double acc, dr, di, half_p = 0.5 * p
    for k in range(1, m):
        acc = 0.0
        for i in range(m):
            j = i + k
            if j >= m:
                j -= m
            dr = a[i].real - a[j].real
            di = a[i].imag - a[j].imag
            acc += pow(dr * dr + di * di, half_p)
        out[k - 1] = acc
    return out_arr
