r"""Example groups, word balls, limit-set samples and critical exponents.

Groups are generated by 2x2 complex Moebius matrices (the internal model for
n <= 2) and exposed as Lorentz isometries on demand.  Words are strings over
'a', 'A', 'b', 'B', ... with capital letters denoting inverses; the letter of
code c is LETTERS[c] and the inverse of code c is c ^ 1.

Because the group acts on the right, the matrix of a word w = c_1 ... c_k is
M(c_k) @ ... @ M(c_1), so that orbit points are x0 . w = M(w) x0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .geometry import InteriorPoint, Isometry
from .mobius import (
    Circle,
    commutator_trace,
    grandma_matrices,
    herm_from_vec,
    inversion_pair_matrix,
    lorentz_isometry,
    mobius_apply,
    mobius_fixed_points,
    preserves_unit_circle,
    trace_classify,
)

DEDUP_TOL = 1e-8
DEFAULT_MAX_ELEMENTS = 2_000_000

_ALPHA = "abcdefgh"
LETTERS = "".join(ch + ch.upper() for ch in _ALPHA)


class GroupError(ValueError):
    """Raised for invalid group constructions or enumeration requests."""


def letter_code(ch: str) -> int:
    c = LETTERS.find(ch)
    if c < 0:
        raise GroupError(f"unknown generator letter {ch!r}")
    return c


def reduce_word(word: str) -> str:
    out: list[str] = []
    for ch in word:
        if out and letter_code(out[-1]) ^ 1 == letter_code(ch):
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def invert_word(word: str) -> str:
    return "".join(LETTERS[letter_code(ch) ^ 1] for ch in reversed(word))


def multiply_words(w1: str, w2: str) -> str:
    """Group product w1 . w2 as a reduced word."""
    return reduce_word(w1 + w2)


def codes_to_word(codes) -> str:
    return "".join(LETTERS[c] for c in codes if c >= 0)


@dataclass(frozen=True)
class GroupPresentation:
    """A finitely generated group of Moebius transformations.

    ``sl2_generators`` holds the 2r matrices g_0, g_0^{-1}, g_1, g_1^{-1}, ...
    ``dimension`` is the boundary sphere dimension n (1 or 2).
    """

    sl2_generators: np.ndarray
    kind: str
    dimension: int
    pairings: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        g = np.ascontiguousarray(self.sl2_generators, dtype=complex)
        if g.ndim != 3 or g.shape[1:] != (2, 2) or g.shape[0] % 2 != 0:
            raise GroupError(f"generator array must have shape (2r, 2, 2), got {g.shape}")
        object.__setattr__(self, "sl2_generators", g)
        if self.dimension not in (1, 2):
            raise GroupError("supported boundary dimensions are n in {1, 2}")
        for i in range(0, g.shape[0], 2):
            if np.max(np.abs(g[i] @ g[i + 1] - np.eye(2))) > 1e-10:
                raise GroupError(f"slot {i + 1} is not the inverse of generator {i // 2}")

    @property
    def rank(self) -> int:
        return self.sl2_generators.shape[0] // 2

    @property
    def is_free(self) -> bool:
        """Reduced words are pairwise distinct group elements for these kinds."""
        return self.kind in ("free-schottky", "punctured-torus", "cyclic")

    def word_matrix(self, word: str) -> np.ndarray:
        m = np.eye(2, dtype=complex)
        for ch in reduce_word(word):
            m = self.sl2_generators[letter_code(ch)] @ m
        return m

    def isometry(self, word: str) -> Isometry:
        """The Lorentz-matrix contract surface for one group element."""
        return lorentz_isometry(self.word_matrix(word), self.dimension)

    def generators(self) -> list[Isometry]:
        return [self.isometry(LETTERS[2 * i]) for i in range(self.rank)]

    def boundary_map(self, word: str):
        """The action of a word on boundary directions (unit vectors)."""
        mat = self.isometry(word).matrix

        def act(directions: np.ndarray) -> np.ndarray:
            arr = np.atleast_2d(directions)
            null = np.concatenate([np.ones((len(arr), 1)), arr], axis=1)
            img = null @ mat.T
            out = img[:, 1:] / img[:, :1]
            return out / np.linalg.norm(out, axis=1, keepdims=True)

        return act


def _basepoint_conjugator(x0: InteriorPoint, n: int) -> np.ndarray:
    """SL(2,C) element h with h . origin = x0 (Hermitian square root)."""
    v = x0.coords
    if n == 1:
        v = np.array([v[0], v[1], v[2], 0.0])
    x = herm_from_vec(v)
    w, u = np.linalg.eigh(x)
    h = (u * np.sqrt(w)) @ u.conj().T
    return h


def _conjugated_generators(group: GroupPresentation, x0: InteriorPoint | None) -> np.ndarray:
    gens = group.sl2_generators
    if x0 is None:
        return gens
    if x0.n != group.dimension:
        raise GroupError(f"basepoint dimension {x0.n} does not match group dimension {group.dimension}")
    h = _basepoint_conjugator(x0, group.dimension)
    hinv = np.linalg.inv(h)
    return np.einsum("ij,njk,kl->nil", hinv, gens, h)


def orbit_arrays(group: GroupPresentation, max_len: int, x0: InteriorPoint | None = None,
                 want_points: bool = False, want_codes: bool = False,
                 max_elements: int | None = None):
    """Raw per-word arrays (displacements, depths, orbit points, codes).

    The identity word is *not* included.  Orbit points are Minkowski vectors
    of x0 . w; for n = 1 the z-coordinate vanishes and is dropped.
    """
    if not group.is_free:
        raise GroupError("orbit enumeration requires a free kind (schottky, punctured-torus, cyclic)")
    counts = kernels.free_level_counts(group.sl2_generators.shape[0], max_len)
    total = int(np.sum(counts))
    if max_elements is not None and total > max_elements:
        raise GroupError(
            f"word ball of size {total} exceeds the configured cap {max_elements}; "
            "lower L or raise max_elements"
        )
    gens = _conjugated_generators(group, x0)
    disp, depth, points, codes = kernels.orbit_stats(
        gens, max_len, want_points=want_points, want_codes=want_codes
    )
    if want_points and x0 is not None:
        # the kernel enumerates the conjugated group based at the origin;
        # map its orbit points back to the original frame, where they are
        # the Minkowski vectors of x0 . w
        from .mobius import sl2c_to_lorentz

        h = _basepoint_conjugator(x0, group.dimension)
        points = points @ sl2c_to_lorentz(h).T
    if want_points and group.dimension == 1:
        points = points[:, :3]
    return disp, depth, points, codes


def points_to_directions(points: np.ndarray) -> np.ndarray:
    """Radial boundary projection of Minkowski orbit points."""
    out = points[:, 1:] / points[:, :1]
    nrm = np.linalg.norm(out, axis=1, keepdims=True)
    nrm[nrm == 0.0] = 1.0
    return out / nrm


@dataclass(frozen=True)
class WordBall:
    """All reduced words up to a length, with matrices and displacements.

    Includes the identity (empty word) at index 0.  Free kinds are
    deduplicated by construction; ``custom`` groups are deduplicated by
    matrix distance at tolerance 1e-8 (projectively, i.e. up to sign).
    """

    group: GroupPresentation
    max_len: int
    words: tuple
    elements: np.ndarray
    displacements: np.ndarray
    basepoint: InteriorPoint

    _index: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.words)

    def index(self, word: str) -> int | None:
        if not self._index:
            self._index.update({w: i for i, w in enumerate(self.words)})
        return self._index.get(word)


def enumerate_ball(group: GroupPresentation, max_len: int, x0: InteriorPoint | None = None,
                   max_elements: int = DEFAULT_MAX_ELEMENTS) -> WordBall:
    if max_len < 1:
        raise GroupError("word-ball radius must be >= 1")
    disp, depth, _, codes = orbit_arrays(
        group, max_len, x0, want_points=False, want_codes=True, max_elements=max_elements
    )
    words = [""] + [codes_to_word(row) for row in codes]
    mats = np.empty((len(words), 2, 2), dtype=complex)
    mats[0] = np.eye(2)
    gens = _conjugated_generators(group, x0)
    # rebuild matrices level by level (parents precede children in layout)
    index = {"": 0}
    for i, w in enumerate(words[1:], start=1):
        parent = index[w[:-1]]
        mats[i] = gens[letter_code(w[-1])] @ mats[parent]
        index[w] = i
    displacements = np.concatenate([[0.0], disp])
    base = x0 if x0 is not None else InteriorPoint.origin(group.dimension)
    ball = WordBall(group, max_len, tuple(words), mats, displacements, base)
    ball._index.update(index)
    return ball


@dataclass(frozen=True)
class BoundaryCloud:
    """Sampled limit-set points with word provenance."""

    points: np.ndarray
    provenance: tuple
    dimension: int

    def __len__(self) -> int:
        return len(self.points)

    def angles(self) -> np.ndarray:
        if self.dimension != 1:
            raise GroupError("angles() requires an S^1 cloud")
        return np.arctan2(self.points[:, 1], self.points[:, 0])


def limit_set_sample(group: GroupPresentation, max_len: int, x0: InteriorPoint | None = None,
                     max_elements: int = 5_000_000, with_words: bool = True) -> BoundaryCloud:
    """Boundary projections of the orbit points of the length-L words."""
    if max_len < 2:
        raise GroupError("limit-set sampling needs L >= 2")
    disp, depth, points, codes = orbit_arrays(
        group, max_len, x0, want_points=True, want_codes=with_words, max_elements=max_elements
    )
    top = depth == max_len
    dirs = points_to_directions(points[top])
    words = tuple(codes_to_word(row) for row in codes[top]) if with_words else ()
    return BoundaryCloud(dirs, words, group.dimension)


def schottky_group(pairings, dimension: int = 2) -> GroupPresentation:
    """Free group from circle pairings: each generator is the composition of
    the inversions in its two circles, sending the exterior of the first into
    the interior of the second.

    For dimension 1 the circles must be orthogonal to the unit circle, so the
    group preserves the disk model of H^2 and the limit set sits on S^1.
    """
    pairs = [(Circle(*c1) if not isinstance(c1, Circle) else c1,
              Circle(*c2) if not isinstance(c2, Circle) else c2) for c1, c2 in pairings]
    circles = [c for pair in pairs for c in pair]
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            if not circles[i].disjoint_from(circles[j]):
                raise GroupError(f"circles {i} and {j} overlap: {circles[i]}, {circles[j]}")
    if dimension == 1:
        for i, c in enumerate(circles):
            if not c.orthogonal_to_unit_circle(tol=1e-7):
                raise GroupError(
                    f"circle {i} is not orthogonal to the unit circle; "
                    "required for a Fuchsian Schottky group (n = 1)"
                )
    gens = []
    for c1, c2 in pairs:
        m = inversion_pair_matrix(c1, c2)
        gens.extend([m, np.linalg.inv(m)])
    group = GroupPresentation(np.stack(gens), "free-schottky", dimension, pairings=tuple(pairs))
    if dimension == 1:
        for i, m in enumerate(group.sl2_generators):
            if not preserves_unit_circle(m):
                raise GroupError(f"generator {i} does not preserve the unit circle")
    return group


def punctured_torus_group(trace_a, trace_b=None) -> GroupPresentation:
    """Rank-2 group with parabolic commutator from generator traces.

    Real traces give a Fuchsian group whose limit set is the unit circle
    (the equator of S^2); complex perturbations give quasiFuchsian
    candidates.  Discreteness of perturbed groups is *not* certified; such
    groups carry meta['heuristic'] = True plus a runaway-orbit check.
    """
    if trace_b is None:
        trace_b = trace_a
    a, b = grandma_matrices(trace_a, trace_b)
    tr = commutator_trace(a, b)
    if abs(tr + 2.0) > 1e-8:
        raise GroupError(f"commutator trace {tr} is not -2; bad trace parameters")
    gens = np.stack([a, np.linalg.inv(a), b, np.linalg.inv(b)])
    fuchsian = abs(complex(trace_a).imag) < 1e-12 and abs(complex(trace_b).imag) < 1e-12
    group = GroupPresentation(
        gens,
        "punctured-torus",
        2,
        meta={"trace_a": complex(trace_a), "trace_b": complex(trace_b), "fuchsian": fuchsian,
              "heuristic": not fuchsian},
    )
    disp, _, _, _ = orbit_arrays(group, 5)
    shortest = float(disp.min())
    group.meta["shortest_displacement"] = shortest
    if shortest <= 1e-3:
        group.meta["heuristic"] = True
        group.meta["runaway"] = True
    return group


def cyclic_group(translation_length: float = 2.0, dimension: int = 1) -> GroupPresentation:
    """Infinite cyclic group generated by one hyperbolic element."""
    if translation_length <= 0:
        raise GroupError("translation length must be positive")
    half = translation_length / 2.0
    m = np.array([[np.cosh(half), np.sinh(half)], [np.sinh(half), np.cosh(half)]], dtype=complex)
    gens = np.stack([m, np.linalg.inv(m)])
    return GroupPresentation(gens, "cyclic", dimension,
                             meta={"translation_length": float(translation_length)})


def dedup_matrices(mats: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    """Indices of unique matrices up to overall sign, at the given tolerance."""
    flat = mats.reshape(len(mats), -1).copy()
    # canonical sign: make the largest-magnitude entry have positive real part
    # (positive imaginary part on ties)
    lead = flat[np.arange(len(flat)), np.argmax(np.abs(flat), axis=1)]
    sign = np.where(lead.real < 0, -1.0, 1.0)
    sign = np.where((np.abs(lead.real) < tol) & (lead.imag < 0), -sign, sign)
    flat *= sign[:, None]
    keys = np.round(flat / tol).astype(np.complex128)
    view = keys.view(np.float64).reshape(len(flat), -1)
    _, idx = np.unique(view, axis=0, return_index=True)
    return np.sort(idx)


@dataclass(frozen=True)
class CriticalExponentEstimate:
    """Counting-fit estimate of the critical exponent with diagnostics."""

    value: float
    residual: float
    max_len: int
    fit_window: tuple
    radii: np.ndarray
    counts: np.ndarray

    def __float__(self) -> float:
        return self.value


def estimate_delta(group: GroupPresentation, max_len: int, x0: InteriorPoint | None = None,
                   window: float = 4.0, min_elements: int = 1000,
                   max_elements: int = 50_000_000) -> CriticalExponentEstimate:
    """Least-squares slope of log N(R) against R, N(R) = #{w : d(x0, x0 w) <= R}.

    The fit window ends at the completeness radius (the smallest displacement
    in the outermost word layer: elements closer than that are guaranteed to
    have word length <= L) and extends ``window`` units inward.  The value is
    clamped to [0, n].
    """
    disp, depth, _, _ = orbit_arrays(group, max_len, x0, max_elements=max_elements)
    if group.kind != "cyclic" and len(disp) < min_elements:
        raise GroupError(
            f"only {len(disp)} elements at L = {max_len}; "
            f"need >= {min_elements}, increase L_max"
        )
    r_complete = float(disp[depth == max_len].min())
    # the window must span several word layers or the staircase of a strongly
    # contracting group defeats the fit
    spacing = (r_complete - float(np.min(disp))) / max(max_len - 1, 1)
    window = max(window, 3.5 * spacing)
    r_lo = max(float(np.min(disp)) + 0.25 * window, r_complete - window)
    ds = np.sort(disp)
    cum = np.arange(2, len(ds) + 2)  # identity included in the count
    mask = (ds >= r_lo) & (ds <= r_complete)
    if np.sum(mask) < 10:
        mask = ds <= r_complete
    x = ds[mask]
    y = np.log(cum[mask])
    design = np.vstack([x, np.ones_like(x)]).T
    coef, res, _, _ = np.linalg.lstsq(design, y, rcond=None)
    slope = float(coef[0])
    residual = float(np.sqrt(res[0] / len(x))) if len(res) else 0.0
    value = float(np.clip(slope, 0.0, group.dimension))
    radii = np.linspace(r_lo, r_complete, 24)
    counts = np.searchsorted(ds, radii, side="right") + 1
    return CriticalExponentEstimate(value, residual, max_len, (r_lo, r_complete), radii, counts)


def default_box_scales(points: np.ndarray, count: int = 12) -> np.ndarray:
    """Scales spanning the resolvable gap hierarchy of a point cloud."""
    points = np.asarray(points, dtype=float)
    diam = float(np.max(np.ptp(points, axis=0)))
    lo = max(1e-9, diam * 1e-7)
    hi = max(diam / 3.0, lo * 10 ** 1.6)
    return np.geomspace(lo, hi, count)


def box_dimension(points: np.ndarray, scales) -> float:
    """Box-counting slope of log(cover count) vs log(1/scale).

    ``points`` is an (m, d) array (boundary directions are fine); scales must
    span at least 1.5 decades.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or len(points) < 1000:
        raise GroupError("box_dimension needs >= 1000 points")
    scales = np.asarray(sorted(scales, reverse=True), dtype=float)
    if len(scales) < 2 or scales.min() <= 0:
        raise GroupError("degenerate scale list")
    if np.log10(scales.max() / scales.min()) < 1.5:
        raise GroupError("scales must span at least 1.5 decades")
    counts = []
    for s in scales:
        cells = np.unique(np.floor(points / s), axis=0)
        counts.append(len(cells))
    x = np.log(1.0 / scales)
    y = np.log(np.asarray(counts, dtype=float))
    design = np.vstack([x, np.ones_like(x)]).T
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    return float(coef[0])


@dataclass(frozen=True)
class BoundaryConjugacy:
    """Sampled boundary conjugacy phi between two groups, phi o g' = i(g') o phi.

    Samples pair attracting fixed points of hyperbolic words: the source
    points live on the unit circle (stored by angle, sorted), the targets on
    the deformed limit set (stored as complex numbers).  Between samples phi
    is evaluated by circular piecewise-linear interpolation in the source
    angle.
    """

    source_angles: np.ndarray
    target_points: np.ndarray
    words: tuple
    source: GroupPresentation
    target: GroupPresentation
    equivariance_tol: float
    interpolation: str = "circular-piecewise-linear"
    skipped_words: int = 0

    def __call__(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        base = self.source_angles
        ext_angles = np.concatenate([base, [base[0] + 2 * np.pi]])
        ext_targets = np.concatenate([self.target_points, [self.target_points[0]]])
        t = np.mod(theta - base[0], 2 * np.pi) + base[0]
        idx = np.clip(np.searchsorted(ext_angles, t, side="right") - 1, 0, len(base) - 1)
        t0 = ext_angles[idx]
        t1 = ext_angles[idx + 1]
        lam = np.where(t1 > t0, (t - t0) / np.where(t1 > t0, t1 - t0, 1.0), 0.0)
        return (1 - lam) * ext_targets[idx] + lam * ext_targets[idx + 1]


def _attracting_fixed_point(mat: np.ndarray) -> complex:
    return mobius_fixed_points(mat)[0]


def boundary_conjugacy(source: GroupPresentation, target: GroupPresentation,
                       max_len: int = 6, parabolic_tol: float = 1e-8,
                       equivariance_tol: float = 1e-6) -> BoundaryConjugacy:
    """Conjugacy by matching attracting fixed points of corresponding words.

    Requires the source group to be Fuchsian with limit set the unit circle;
    the generator correspondence is positional (same letters).  Words whose
    trace is within tolerance of parabolic or elliptic in either group are
    skipped.
    """
    if source.rank != target.rank:
        raise GroupError("source and target must share rank")
    ball = enumerate_ball(source, max_len)
    angles, targets, words = [], [], []
    skipped = 0
    for i, w in enumerate(ball.words):
        if not w:
            continue
        ms = ball.elements[i]
        mt = target.word_matrix(w)
        if trace_classify(ms, parabolic_tol) != "hyperbolic" or \
           trace_classify(mt, parabolic_tol) != "hyperbolic":
            skipped += 1
            continue
        zs = _attracting_fixed_point(ms)
        zt = _attracting_fixed_point(mt)
        if np.isinf(zs):
            skipped += 1
            continue
        if abs(abs(zs) - 1.0) > 1e-6:
            raise GroupError("source group limit set is not the unit circle")
        angles.append(float(np.angle(zs)))
        targets.append(complex(zt))
        words.append(w)
    if not angles:
        raise GroupError("no hyperbolic words found for the conjugacy")
    angles = np.asarray(angles)
    targets = np.asarray(targets)
    words = np.asarray(words, dtype=object)
    # deduplicate fixed points shared by powers/conjugates
    order = np.argsort(angles)
    angles, targets, words = angles[order], targets[order], words[order]
    keep = np.concatenate([[True], np.diff(angles) > 1e-9])
    angles, targets, words = angles[keep], targets[keep], words[keep]
    phi = BoundaryConjugacy(angles, targets, tuple(words), source, target,
                            equivariance_tol, skipped_words=skipped)
    defect = conjugacy_equivariance_defect(phi)
    return BoundaryConjugacy(angles, targets, tuple(words), source, target,
                             max(defect, equivariance_tol), skipped_words=skipped)


def conjugacy_equivariance_defect(phi: BoundaryConjugacy) -> float:
    """max over generators g', stored samples xi of
    |phi(g'(xi)) - i(g')(phi(xi))| with phi evaluated by interpolation.

    The defect combines fixed-point accuracy with the piecewise-linear
    interpolation error, so it shrinks as the sample set densifies.
    """
    worst = 0.0
    src, tgt = phi.source, phi.target
    zs = np.exp(1j * phi.source_angles)
    for k in range(2 * src.rank):
        g = LETTERS[k]
        ms_g = src.word_matrix(g)
        mt_g = tgt.word_matrix(g)
        moved = np.array([mobius_apply(ms_g, z) for z in zs])
        lhs = phi(np.angle(moved))
        rhs = np.array([mobius_apply(mt_g, t) for t in phi.target_points])
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def conjugacy_fixed_point_defect(phi: BoundaryConjugacy, n_words: int = 100) -> float:
    """Word-level form of the intertwining identity: the target fixed point of
    the conjugated word g' w g'^{-1} must be the image of w's target fixed
    point under i(g').  In word-string terms (right-action products) the map
    g' o w o g'^{-1} is the word g'^{-1} . w . g'."""
    worst = 0.0
    tgt = phi.target
    sample = phi.words[: min(len(phi.words), n_words)]
    for k in range(2 * phi.source.rank):
        g = LETTERS[k]
        mt_g = tgt.word_matrix(g)
        for i, w in enumerate(sample):
            conj = multiply_words(multiply_words(invert_word(g), str(w)), g)
            mt = tgt.word_matrix(conj)
            if trace_classify(mt) != "hyperbolic":
                continue
            lhs = _attracting_fixed_point(mt)
            rhs = mobius_apply(mt_g, phi.target_points[i])
            if np.isinf(lhs) or np.isinf(rhs):
                continue
            worst = max(worst, abs(lhs - rhs))
    return worst
