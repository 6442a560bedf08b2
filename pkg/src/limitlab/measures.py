r"""Truncated Patterson-Sullivan measures and their conformal-density laws.

The measure seen from x, truncated at word length L and exponent s, is the
atomic measure

    mu_x = sum_{|w| <= L} e^{-s d(x, x0 w)} delta_{proj(x0 w)} / N(s, L),
    N(s, L) = sum_{|w| <= L} e^{-s d(x0, x0 w)},

with atoms at the radial boundary projections of the orbit points.  The
weak limit s -> delta^+ of the full series is replaced by an epsilon-above-
critical truncation: callers choose s = delta_hat + eps and scan eps / L,
which is what the defect reports quantify.  Groups whose series converges at
the critical exponent would need a different construction; such measures are
only flagged here, not built.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import InteriorPoint, Isometry, busemann_many, minkowski_gram
from .groups import GroupPresentation, estimate_delta, orbit_arrays, points_to_directions


class MeasureError(ValueError):
    """Raised for invalid measure constructions."""


def group_delta(group: GroupPresentation, max_len: int = 10) -> float:
    """Cached critical-exponent estimate used for measure validation."""
    key = ("delta_hat", max_len)
    if key not in group.meta:
        group.meta[key] = estimate_delta(group, max_len).value
    return group.meta[key]


@dataclass(frozen=True)
class AtomicBoundaryMeasure:
    """Finite atomic approximation of the Patterson-Sullivan measure.

    ``directions`` are the atom positions on S^n, ``weights`` their masses.
    The eye point x and the orbit basepoint x0 are both kept: weights refer
    to x while the normalization is anchored at x0, so translates of the
    measure are generally not probability measures.
    """

    directions: np.ndarray
    weights: np.ndarray
    basepoint: InteriorPoint
    orbit_base: InteriorPoint
    s: float
    max_len: int
    delta_hat: float
    group: GroupPresentation
    orbit_points: np.ndarray = field(repr=False)

    def __post_init__(self):
        if np.any(self.weights < 0):
            raise MeasureError("negative atom weight")
        if not np.all(np.isfinite(self.weights)):
            raise MeasureError("non-finite atom weight")

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, f) -> complex:
        """Integrate a boundary function; f maps an (m, n+1) array to (m,)."""
        vals = np.asarray(f(self.directions))
        acc = np.sum(self.weights * vals)
        return complex(acc) if np.iscomplexobj(vals) else float(acc)


def _orbit_data(group: GroupPresentation, x0: InteriorPoint | None, max_len: int):
    if max_len == 0:
        base = x0 if x0 is not None else InteriorPoint.origin(group.dimension)
        pts = base.coords[None, :]
        if float(np.linalg.norm(pts[0, 1:])) < 1e-12:
            raise MeasureError(
                "the basepoint orbit point has no radial projection; "
                "use a basepoint off the origin for the degenerate L = 0 measure"
            )
        return pts
    _, _, points, _ = orbit_arrays(group, max_len, x0, want_points=True)
    base = x0 if x0 is not None else InteriorPoint.origin(group.dimension)
    pts = np.concatenate([base.coords[None, :], points], axis=0)
    if float(np.linalg.norm(pts[0, 1:])) < 1e-12:
        # identity atom sits at the origin: project it along the eye point
        # direction is undefined; demand an off-origin basepoint instead
        raise MeasureError(
            "orbit basepoint projects nowhere (it is the ball center); "
            "choose x0 off the origin"
        )
    return pts


def _distances_to(x: InteriorPoint, orbit_points: np.ndarray) -> np.ndarray:
    eta = minkowski_gram(orbit_points.shape[1] - 2)
    c = -(orbit_points @ (eta @ x.coords))
    return np.arccosh(np.maximum(c, 1.0))


def ps_measure(group: GroupPresentation, x: InteriorPoint, x0: InteriorPoint,
               s: float, max_len: int, delta_hat: float | None = None) -> AtomicBoundaryMeasure:
    """Truncated Patterson-Sullivan measure seen from x, normalized at x0.

    Requires s strictly above the critical-exponent estimate; the weak limit
    itself is not computable, so callers scan s = delta_hat + eps.
    """
    if delta_hat is None:
        delta_hat = group_delta(group)
    if not s > delta_hat:
        raise MeasureError(
            f"series near divergence at s = {s} <= delta_hat = {delta_hat:.4f}; "
            "choose s > delta_hat"
        )
    pts = _orbit_data(group, x0, max_len)
    dirs = points_to_directions(pts)
    num = np.exp(-s * _distances_to(x, pts))
    den = float(np.sum(np.exp(-s * _distances_to(x0, pts))))
    return AtomicBoundaryMeasure(dirs, num / den, x, x0, s, max_len, float(delta_hat),
                                 group, pts)


def translate_basepoint(mu: AtomicBoundaryMeasure, x_new: InteriorPoint) -> AtomicBoundaryMeasure:
    """Move the eye point by the conformal-density law: each atom is
    reweighted by e^{-delta_hat D(x_new, x, xi)} and the measure is retagged."""
    d = busemann_many(x_new.coords, mu.basepoint.coords, mu.directions)
    weights = mu.weights * np.exp(-mu.delta_hat * d)
    return AtomicBoundaryMeasure(mu.directions, weights, x_new, mu.orbit_base,
                                 mu.s, mu.max_len, mu.delta_hat, mu.group, mu.orbit_points)


def _resolve_word_matrix(group: GroupPresentation, g) -> np.ndarray:
    """Lorentz matrix for g given as a word string or an Isometry."""
    if isinstance(g, str):
        return group.isometry(g).matrix
    if isinstance(g, Isometry):
        return g.matrix
    raise MeasureError(f"cannot interpret group element {g!r}")


def transport_defect(mu: AtomicBoundaryMeasure, g, test_functions) -> float:
    """Violation of the transport law (R_g)_* mu_x = e^{delta D(x, xg, .)} mu_x.

    Returns max over test functions of
    |int f d((R_g)_* mu) - int f e^{delta_hat D(x, xg, .)} dmu| / (1 + |int f dmu|).
    """
    mat = _resolve_word_matrix(mu.group, g)
    m = len(mu.directions)
    null = np.concatenate([np.ones((m, 1)), mu.directions], axis=1)
    img = null @ mat.T
    pushed = img[:, 1:] / img[:, :1]
    pushed /= np.linalg.norm(pushed, axis=1, keepdims=True)

    xg = InteriorPoint(mat @ mu.basepoint.coords)
    d = busemann_many(mu.basepoint.coords, xg.coords, mu.directions)
    factor = np.exp(mu.delta_hat * d)

    worst = 0.0
    for f in test_functions:
        lhs = np.sum(mu.weights * np.asarray(f(pushed)))
        rhs = np.sum(mu.weights * factor * np.asarray(f(mu.directions)))
        ref = np.sum(mu.weights * np.asarray(f(mu.directions)))
        worst = max(worst, float(abs(lhs - rhs) / (1.0 + abs(ref))))
    return worst


def lipschitz_bump(center: np.ndarray, width: float):
    """Chordal tent function centered at a boundary direction; Lip = 1/width."""
    center = np.asarray(center, dtype=float)
    center = center / np.linalg.norm(center)

    def f(dirs: np.ndarray) -> np.ndarray:
        dist = np.linalg.norm(np.atleast_2d(dirs) - center, axis=1)
        return np.maximum(0.0, 1.0 - dist / width)

    f.lipschitz = 1.0 / width
    return f


def default_test_functions(n: int, count: int = 6, width: float = 0.8, seed: int = 7):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        v = rng.normal(size=n + 1)
        out.append(lipschitz_bump(v, width))
    return out


def mass_profile(group: GroupPresentation, sites, x0: InteriorPoint, s: float, max_len: int,
                 delta_hat: float | None = None, stencil: float = 0.01,
                 laplacian_check: bool = True):
    """Total mass Phi at each site, with an optional finite-difference check
    that Phi is an eigenfunction of the hyperbolic Laplacian with eigenvalue
    delta_hat (n - delta_hat).

    Returns a list of dicts: {site, mass, laplacian_defect | None, flags}.
    """
    if laplacian_check and not (1e-3 <= stencil <= 1e-1):
        raise MeasureError("stencil spacing must lie in [1e-3, 1e-1]")
    if delta_hat is None:
        delta_hat = group_delta(group)
    pts = _orbit_data(group, x0, max_len)
    den = float(np.sum(np.exp(-s * _distances_to(x0, pts))))
    n = group.dimension
    m_dim = n + 1

    def phi_ball(u: np.ndarray) -> float:
        x = InteriorPoint.from_ball(u)
        return float(np.sum(np.exp(-s * _distances_to(x, pts)))) / den

    results = []
    for site in sites:
        site = np.asarray(site, dtype=float)
        if site.shape == (n + 2,):
            u0 = InteriorPoint(site).ball()
        else:
            u0 = site
        mass = phi_ball(u0)
        entry = {"site": u0, "mass": mass, "laplacian_defect": None, "flags": []}
        if len(pts) == 1:
            entry["flags"].append("degenerate-one-atom: laplacian check skipped")
        elif laplacian_check:
            h = stencil
            lap_e = 0.0
            grad = np.zeros(m_dim)
            for k in range(m_dim):
                e = np.zeros(m_dim)
                e[k] = h
                fp, fm = phi_ball(u0 + e), phi_ball(u0 - e)
                lap_e += (fp - 2.0 * mass + fm) / h**2
                grad[k] = (fp - fm) / (2.0 * h)
            r2 = float(np.dot(u0, u0))
            conf = (1.0 - r2) / 2.0
            lap_hyp = conf**2 * lap_e + (m_dim - 2) * conf * float(np.dot(u0, grad))
            # geometer's sign: the positive Laplacian is -div grad
            eigen = delta_hat * (n - delta_hat)
            entry["laplacian_defect"] = abs(-lap_hyp - eigen * mass) / max(mass, 1e-300)
        results.append(entry)
    return results
