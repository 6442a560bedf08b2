r"""Schatten norms, the Janson-Wolff integral, and threshold estimation.

Two estimators localize the summability threshold p* = inf { p : [E+-, a] is
p-Schatten }:

* a truncation scan of |[E+-, a]|_p over Fourier cutoffs N, stabilized when
  the relative growth over the last step drops below 2 percent;
* the circle Janson-Wolff integral  int int |a(x) - a(y)|^p / |x - y|^2,
  with chordal distance, evaluated with a diagonal-band exclusion at scale h
  and a Richardson-style extrapolation of the h-scan; divergence is flagged
  when the band contributions do not decay.

For a symbol smoother than the Besov boundary the truncated Schatten sums
stabilize at every p (single smooth symbols have commutators in every
Schatten class), so the scan only lower-bounds the algebra-level threshold
and the integral boundary carries the quantitative estimate; the report
flags this saturation.  For boundary-regularity symbols (Hoelder, sampled
conjugacies) both estimators localize the same p*.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..crossed import TruncatedOperator
from ..kernels import offset_power_sums
from .base import KCycleError
from .circle import hardy_projections, multiplication_operator

TWO_PI = 2.0 * np.pi
STABLE_GROWTH = 0.02
ZERO_COMMUTATOR = 1e-13


def schatten_norm(op, p: float) -> float:
    """(sum_i s_i^p)^{1/p} over the singular values."""
    if p <= 0:
        raise KCycleError("Schatten exponent must be positive")
    mat = op.matrix if isinstance(op, TruncatedOperator) else np.asarray(op)
    s = np.linalg.svd(mat, compute_uv=False)
    s = s[s > 0]
    if s.size == 0:
        return 0.0
    return float(np.sum(s**p) ** (1.0 / p))


def commutator_singular_values(a, n_max: int, n_grid: int | None = None,
                               dense: bool = False) -> np.ndarray:
    """Singular values of [E+, M_a] and [E-, M_a] at cutoff N (their union).

    [E, M_a] vanishes outside the two off-corner blocks where the mode sign
    changes, so its singular values are the union of the corner-block values;
    the fast path decomposes the corners directly (the dense path is kept for
    cross-checking).
    """
    if dense:
        e_plus, e_minus = hardy_projections(n_max)
        mult = multiplication_operator(a, n_max, n_grid)
        out = []
        for e in (e_plus, e_minus):
            comm = e.matrix @ mult.matrix - mult.matrix @ e.matrix
            out.append(np.linalg.svd(comm, compute_uv=False))
        return np.sort(np.concatenate(out))[::-1]
    if n_grid is None:
        n_grid = 8 * n_max
    theta = np.linspace(0.0, TWO_PI, n_grid, endpoint=False)
    vals = np.asarray(a(theta), dtype=complex)
    coeffs = np.fft.fft(vals) / n_grid
    freqs = np.fft.fftfreq(n_grid, d=1.0 / n_grid).astype(int)
    table = dict(zip(freqs, coeffs))

    def coeff(m):
        return table.get(int(m), 0.0)

    ks = np.arange(-n_max, n_max + 1)
    pos = ks[ks > 0]
    nonpos = ks[ks <= 0]
    neg = ks[ks < 0]
    nonneg = ks[ks >= 0]
    out = []
    # [E+, a]: rows k > 0 against columns k <= 0 and the transpose corner
    for rows, cols in (((pos, nonpos)), ((nonpos, pos)),
                       ((neg, nonneg)), ((nonneg, neg))):
        block = np.array([[coeff(r - c) for c in cols] for r in rows])
        out.append(np.linalg.svd(block, compute_uv=False))
    return np.sort(np.concatenate(out))[::-1]


@dataclass(frozen=True)
class JansonWolffResult:
    value: float
    divergent: bool
    p: float
    h_values: np.ndarray
    partials: np.ndarray
    meta: dict = field(default_factory=dict)


def janson_wolff_integral(a, p: float, n_grid: int = 2048, n_h: int = 6) -> JansonWolffResult:
    """Double-sum estimate of int int |a(x) - a(y)|^p / |x - y|^2 dx dy on S^1.

    |x - y| is the chordal distance.  The diagonal band |theta_x - theta_y| <
    h is excluded and the h-scan is extrapolated; when the scan grows without
    bound (non-decaying increments) the integral is flagged divergent.
    """
    if n_grid < 256:
        raise KCycleError("need a grid of >= 256 points")
    theta = np.linspace(0.0, TWO_PI, n_grid, endpoint=False)
    vals = np.asarray(a(theta), dtype=complex)
    if np.max(np.abs(vals - vals[0])) < 1e-15:
        h = np.pi / 2 ** np.arange(1, n_h + 1)
        return JansonWolffResult(0.0, False, p, h, np.zeros(n_h), {"constant": True})
    t_k = offset_power_sums(vals, p)
    k = np.arange(1, n_grid)
    chord = 2.0 * np.abs(np.sin(np.pi * k / n_grid))
    ang = np.minimum(k, n_grid - k) * (TWO_PI / n_grid)
    weights = t_k / chord**2 * (TWO_PI / n_grid) ** 2

    h_values = np.pi / 2.0 ** np.arange(1, n_h + 1)
    h_floor = 4.0 * TWO_PI / n_grid
    h_values = h_values[h_values >= h_floor]
    if len(h_values) < 3:
        raise KCycleError("grid too coarse for the requested h-scan")
    partials = np.array([float(np.sum(weights[ang >= h])) for h in h_values])

    inc = np.diff(partials)
    divergent = False
    value = partials[-1]
    if np.all(inc <= 1e-300):
        pass
    else:
        ratios = inc[1:] / np.where(inc[:-1] > 0, inc[:-1], np.inf)
        tail_ratio = float(np.median(ratios[-2:])) if len(ratios) >= 2 else 1.0
        # increments of a convergent scan decay like h^q; the resolvable
        # exponent floor at a handful of dyadic levels is q ~ 0.05
        if tail_ratio >= 2.0 ** (-0.05):
            divergent = True
        elif 0 < tail_ratio < 1.0:
            value = float(partials[-1] + inc[-1] * tail_ratio / (1.0 - tail_ratio))
    return JansonWolffResult(float(value), divergent, p, h_values, partials,
                             {"n_grid": n_grid})


@dataclass(frozen=True)
class ThresholdReport:
    p_star: float
    p_schatten: float | None
    p_jw: float | None
    flags: tuple
    p_grid: np.ndarray
    schatten_norms: dict
    stable: dict
    jw_divergent: dict
    n_values: tuple

    def flagged(self, name: str) -> bool:
        return any(name in f for f in self.flags)


def summability_threshold(a, n_values, p_grid, n_grid_jw: int = 2048) -> ThresholdReport:
    """Dual-estimator threshold for the Schatten summability of [E+-, a].

    The scan estimate is the smallest grid p whose truncation sequence has
    stabilized (relative growth < 2 percent at the last step) with every
    larger p stable as well; it requires some smaller p to be unstable,
    otherwise the scan is saturated and only bounds p* from above by the
    whole grid.  The integral estimate is the smallest grid p with a
    convergent Janson-Wolff scan.  The combined p* takes the informative
    estimators' boundary (their maximum when both are informative);
    disagreement beyond 25 percent or saturation is flagged.
    """
    n_values = tuple(sorted(n_values))
    if len(n_values) < 3:
        raise KCycleError("need at least 3 cutoffs for trend detection")
    p_grid = np.asarray(sorted(p_grid), dtype=float)
    flags: list[str] = []

    sv = {n: commutator_singular_values(a, n) for n in n_values}
    if max(float(s[0]) if len(s) else 0.0 for s in sv.values()) < ZERO_COMMUTATOR:
        flags.append("commutator == 0")
        return ThresholdReport(0.0, None, None, tuple(flags), p_grid, {}, {}, {},
                               n_values)

    norms = {}
    stable = {}
    for p in p_grid:
        seq = [float(np.sum(sv[n][sv[n] > 0] ** p) ** (1.0 / p)) for n in n_values]
        norms[float(p)] = seq
        growth = (seq[-1] - seq[-2]) / max(seq[-2], 1e-300)
        stable[float(p)] = bool(growth < STABLE_GROWTH)

    p_schatten = None
    stats = [stable[float(p)] for p in p_grid]
    if all(stats):
        flags.append("schatten scan saturated: stable at every tested p; scan"
                     " bounds p* above by the grid minimum only")
    elif not any(stats):
        flags.append("schatten scan unstable at every tested p")
    else:
        # smallest p from which stability persists upward
        idx = len(stats)
        for i in range(len(stats) - 1, -1, -1):
            if stats[i]:
                idx = i
            else:
                break
        if idx < len(stats):
            p_schatten = float(p_grid[idx])
        if not all(stats[idx:]):
            flags.append("non-monotone stability diagnostics")

    jw = {float(p): janson_wolff_integral(a, float(p), n_grid_jw) for p in p_grid}
    jw_div = {p: r.divergent for p, r in jw.items()}
    p_jw = None
    divs = [jw_div[float(p)] for p in p_grid]
    if not all(divs):
        j = len(divs)
        for i in range(len(divs) - 1, -1, -1):
            if not divs[i]:
                j = i
            else:
                break
        if j < len(divs):
            if j > 0:
                p_jw = float(0.5 * (p_grid[j - 1] + p_grid[j]))
            else:
                p_jw = float(p_grid[0])
                flags.append("janson-wolff convergent at every tested p")

    # the integral oracle resolves the boundary at the p-grid scale; the scan
    # corroborates from below but its 2-percent stabilization overshoots
    # whenever the symbol's scales outrun the affordable cutoffs
    if p_jw is not None:
        p_star = p_jw
        if p_schatten is not None and abs(p_schatten - p_jw) > 0.25 * max(p_schatten, p_jw):
            flags.append("low-confidence: estimators disagree by more than 25 percent")
    elif p_schatten is not None:
        p_star = p_schatten
        flags.append("integral oracle did not localize a boundary; scan-only estimate")
    else:
        flags.append("low-confidence: no estimator localized a boundary")
        p_star = float(p_grid[0])
    return ThresholdReport(p_star, p_schatten, p_jw, tuple(flags), p_grid, norms,
                           stable, jw_div, n_values)
