"""Pure-numpy fallback for the hot kernels.

Same API and same per-element arithmetic as the compiled extension
``limitlab._kernels``; selected automatically when the extension is missing.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 18


def free_level_counts(two_r: int, max_len: int) -> np.ndarray:
    """Number of reduced words of each exact length 1..max_len in F_r."""
    counts = np.empty(max_len, dtype=np.int64)
    if max_len >= 1:
        counts[0] = two_r
    for lev in range(1, max_len):
        counts[lev] = counts[lev - 1] * (two_r - 1)
    return counts


def _allowed_table(two_r: int) -> np.ndarray:
    """allowed_table[p] = letters != p^1 in increasing order."""
    table = np.empty((two_r, two_r - 1), dtype=np.int8)
    for p in range(two_r):
        table[p] = [c for c in range(two_r) if c != (p ^ 1)]
    return table


def _emit(mats, disp, points, pos):
    """Displacement (and orbit point of the basepoint) from word matrices."""
    nf = np.sum(np.abs(mats.reshape(len(mats), 4)) ** 2, axis=1)
    t = 0.5 * nf
    disp[pos] = np.arccosh(np.maximum(t, 1.0))
    if points is not None:
        m00, m01 = mats[:, 0, 0], mats[:, 0, 1]
        m10, m11 = mats[:, 1, 0], mats[:, 1, 1]
        w = m10 * np.conj(m00) + m11 * np.conj(m01)
        z = 0.5 * (np.abs(m00) ** 2 + np.abs(m01) ** 2 - np.abs(m10) ** 2 - np.abs(m11) ** 2)
        points[pos, 0] = t
        points[pos, 1] = w.real
        points[pos, 2] = -w.imag
        points[pos, 3] = z


def orbit_stats(gens: np.ndarray, max_len: int, want_points: bool = False, want_codes: bool = False):
    """Enumerate all reduced words of length 1..max_len over free generators.

    ``gens`` has shape (2r, 2, 2), ordered g_0, g_0^{-1}, g_1, g_1^{-1}, ...;
    the inverse of letter c is c ^ 1.  The word w = c_1 ... c_k carries the
    matrix gens[c_k] @ ... @ gens[c_1] (right-action composition), its
    displacement arccosh(|M|_F^2 / 2) from the basepoint, and optionally the
    orbit point (t, x, y, z) of the basepoint and the letter codes.

    Output is in level-major lexicographic order.  Returns (displacements,
    depths, points | None, codes | None).
    """
    gens = np.ascontiguousarray(gens, dtype=np.complex128)
    two_r = gens.shape[0]
    counts = free_level_counts(two_r, max_len)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    total = int(offsets[-1])

    disp = np.empty(total)
    depth = np.empty(total, dtype=np.int8)
    points = np.empty((total, 4)) if want_points else None
    codes = np.full((total, max_len), -1, dtype=np.int8) if want_codes else None

    table = _allowed_table(two_r)

    cur_mats = gens.copy()
    cur_last = np.arange(two_r, dtype=np.int8)
    cur_codes = cur_last[:, None] if want_codes else None

    for lev in range(1, max_len + 1):
        lo, hi = int(offsets[lev - 1]), int(offsets[lev])
        depth[lo:hi] = lev
        for i0 in range(0, len(cur_mats), _CHUNK):
            i1 = min(i0 + _CHUNK, len(cur_mats))
            _emit(cur_mats[i0:i1], disp, points, slice(lo + i0, lo + i1))
        if want_codes:
            codes[lo:hi, :lev] = cur_codes
        if lev == max_len:
            break

        n_child = len(cur_mats) * (two_r - 1)
        next_mats = np.empty((n_child, 2, 2), dtype=np.complex128)
        child_letters = table[cur_last].reshape(-1)
        for i0 in range(0, len(cur_mats), _CHUNK):
            i1 = min(i0 + _CHUNK, len(cur_mats))
            block = np.matmul(gens[table[cur_last[i0:i1]]], cur_mats[i0:i1, None])
            next_mats[i0 * (two_r - 1) : i1 * (two_r - 1)] = block.reshape(-1, 2, 2)
        if want_codes:
            next_codes = np.empty((n_child, lev + 1), dtype=np.int8)
            next_codes[:, :lev] = np.repeat(cur_codes, two_r - 1, axis=0)
            next_codes[:, lev] = child_letters
            cur_codes = next_codes
        cur_mats = next_mats
        cur_last = child_letters

    return disp, depth, points, codes


def offset_power_sums(values: np.ndarray, p: float) -> np.ndarray:
    """T_k = sum_i |a_i - a_{i+k mod M}|^p for k = 1 .. M-1."""
    a = np.asarray(values, dtype=np.complex128)
    m = a.shape[0]
    out = np.empty(m - 1)
    for k in range(1, m):
        out[k - 1] = np.sum(np.abs(a - np.roll(a, -k)) ** p)
    return out
