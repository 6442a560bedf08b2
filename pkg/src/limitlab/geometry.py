r"""Hyperbolic space in the Lorentz (hyperboloid) model.

Points of H^{n+1} are unit future-timelike vectors in Minkowski space
R^{n+1,1} with the form <x, y> = -x_0 y_0 + x_1 y_1 + ... + x_{n+1} y_{n+1};
the sphere-at-infinity S^n is the set of unit vectors in R^{n+1} labelling
future null rays (1, xi).  Orientation-preserving isometries are Lorentz
matrices applied on the left.

The hyperboloid model is canonical here because one matrix action covers
interior points and boundary points uniformly in the dimension n; ball-model
coordinates are provided for I/O and for the Poisson kernel.

Group elements act on the *right* (orbits are written x . g), so composition
of isometries is reversed relative to matrix products: the element "first g,
then h" carries the matrix  h.matrix @ g.matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HYPERBOLOID_TOL = 1e-12
FORM_TOL = 1e-10
SINGULAR_KERNEL_TOL = 1e-14


class GeometryError(ValueError):
    """Raised for invalid points, matrices or incompatible dimensions."""


def minkowski_gram(n: int) -> np.ndarray:
    """Gram matrix diag(-1, 1, ..., 1) of R^{n+1,1}."""
    eta = np.eye(n + 2)
    eta[0, 0] = -1.0
    return eta


def mdot(x, y):
    """Minkowski pairing, broadcast over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return -x[..., 0] * y[..., 0] + np.sum(x[..., 1:] * y[..., 1:], axis=-1)


def _renormalize_timelike(v: np.ndarray) -> np.ndarray:
    q = -mdot(v, v)
    scale = max(1.0, float(v[0]) ** 2)
    if v[0] > 0 and abs(q - 1.0) <= HYPERBOLOID_TOL * scale:
        # already on the hyperboloid to representable precision; for far
        # points the pairing cancels catastrophically and dividing by
        # sqrt(q) would inject that noise
        return v
    if q <= 0 or v[0] <= 0:
        raise GeometryError("vector is not future-timelike")
    return v / np.sqrt(q)


@dataclass(frozen=True)
class InteriorPoint:
    """A point of H^{n+1}: unit future-timelike vector, renormalized on entry."""

    coords: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.coords, dtype=float)
        if v.ndim != 1 or v.shape[0] < 3:
            raise GeometryError(f"interior point needs >= 3 coordinates, got shape {v.shape}")
        v = _renormalize_timelike(v)
        object.__setattr__(self, "coords", v)
        # the attainable residual scales with x_0^2 through cancellation
        if abs(mdot(v, v) + 1.0) > HYPERBOLOID_TOL * max(1.0, v[0] ** 2):
            raise GeometryError("failed to renormalize onto the hyperboloid")

    @property
    def n(self) -> int:
        """Dimension of the boundary sphere S^n."""
        return self.coords.shape[0] - 2

    @classmethod
    def origin(cls, n: int) -> "InteriorPoint":
        v = np.zeros(n + 2)
        v[0] = 1.0
        return cls(v)

    @classmethod
    def from_ball(cls, u) -> "InteriorPoint":
        """Lift a point of the open unit ball B^{n+1} to the hyperboloid."""
        u = np.asarray(u, dtype=float)
        r2 = float(np.dot(u, u))
        if r2 >= 1.0:
            raise GeometryError(f"ball point must have |u| < 1, got |u|^2 = {r2}")
        v = np.empty(u.shape[0] + 1)
        v[0] = (1.0 + r2) / (1.0 - r2)
        v[1:] = 2.0 * u / (1.0 - r2)
        return cls(v)

    def ball(self) -> np.ndarray:
        """Poincare ball coordinates u = x_spatial / (1 + x_0)."""
        return self.coords[1:] / (1.0 + self.coords[0])


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the sphere-at-infinity S^n: unit direction in R^{n+1}."""

    direction: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        if d.ndim != 1 or d.shape[0] < 2:
            raise GeometryError(f"boundary point needs >= 2 coordinates, got shape {d.shape}")
        nrm = float(np.linalg.norm(d))
        if nrm == 0.0:
            raise GeometryError("boundary direction must be nonzero")
        object.__setattr__(self, "direction", d / nrm)

    @property
    def n(self) -> int:
        return self.direction.shape[0] - 1

    def null_vector(self) -> np.ndarray:
        """The future null representative (1, xi)."""
        return np.concatenate(([1.0], self.direction))

    @classmethod
    def from_angle(cls, theta: float) -> "BoundaryPoint":
        """Point of S^1 at the given angle (n = 1 convenience)."""
        return cls(np.array([np.cos(theta), np.sin(theta)]))

    def angle(self) -> float:
        if self.n != 1:
            raise GeometryError("angle() is defined for S^1 only")
        return float(np.arctan2(self.direction[1], self.direction[0]))


@dataclass(frozen=True)
class Isometry:
    """An orientation- and time-orientation-preserving Lorentz matrix.

    Matrices apply on the left to coordinate vectors.  Right-action
    composition is reversed: see :meth:`then`.
    """

    matrix: np.ndarray
    side: str = field(default="left-apply")

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 3:
            raise GeometryError(f"isometry matrix must be square of size >= 3, got {m.shape}")
        object.__setattr__(self, "matrix", m)
        eta = minkowski_gram(self.n)
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        defect = np.max(np.abs(m.T @ eta @ m - eta))
        if defect > FORM_TOL * scale:
            raise GeometryError(f"matrix does not preserve the Minkowski form (defect {defect:.3e})")
        if abs(np.linalg.det(m) - 1.0) > FORM_TOL * scale**2:
            raise GeometryError("isometry must have determinant +1")
        if m[0, 0] <= 0:
            raise GeometryError("isometry must preserve time orientation")

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 2

    @classmethod
    def identity(cls, n: int) -> "Isometry":
        return cls(np.eye(n + 2))

    def then(self, other: "Isometry") -> "Isometry":
        """Group product 'self then other' for the right action x.(gh) = (x.g).h."""
        return Isometry(other.matrix @ self.matrix)

    def inverse(self) -> "Isometry":
        eta = minkowski_gram(self.n)
        return Isometry(eta @ self.matrix.T @ eta)


def _check_same_dim(*dims):
    if len(set(dims)) != 1:
        raise GeometryError(f"dimension mismatch: {dims}")


def hyp_distance(x: InteriorPoint, y: InteriorPoint) -> float:
    """Hyperbolic distance d(x, y) = arccosh(-<x, y>).

    Evaluated as 2 arcsinh(|x - y|_M / 2), which is the same function but
    avoids the arccosh cancellation near coincident points (exact zero at
    x = y).
    """
    _check_same_dim(x.n, y.n)
    diff = x.coords - y.coords
    q = max(float(mdot(diff, diff)), 0.0)
    return float(2.0 * np.arcsinh(0.5 * np.sqrt(q)))


def apply(g: Isometry, p):
    """Apply an isometry to an interior or boundary point.

    Interior points stay on the hyperboloid (renormalized); boundary points
    transform through the projective action on null rays and stay unit-norm.
    """
    if isinstance(p, InteriorPoint):
        _check_same_dim(g.n, p.n)
        return InteriorPoint(g.matrix @ p.coords)
    if isinstance(p, BoundaryPoint):
        _check_same_dim(g.n, p.n)
        v = g.matrix @ p.null_vector()
        return BoundaryPoint(v[1:] / v[0])
    raise GeometryError(f"cannot apply isometry to {type(p).__name__}")


def apply_boundary_many(matrix: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Projective boundary action on an (m, n+1) array of unit directions."""
    m = directions.shape[0]
    null = np.concatenate([np.ones((m, 1)), directions], axis=1)
    img = null @ matrix.T
    out = img[:, 1:] / img[:, :1]
    out /= np.linalg.norm(out, axis=1, keepdims=True)
    return out


def poisson_kernel(x: InteriorPoint, xi: BoundaryPoint) -> float:
    """Ball-model Poisson kernel P(x, xi) = (1 - |u|^2) / |u - xi|^2.

    Evaluated intrinsically as -1/<x, (1, xi)>, which agrees with the ball
    formula and is exact in any dimension.
    """
    _check_same_dim(x.n, xi.n)
    a = -mdot(x.coords, xi.null_vector())
    if a < SINGULAR_KERNEL_TOL:
        raise GeometryError("singular kernel: point too close to the boundary argument")
    return 1.0 / float(a)


def busemann_cocycle(x: InteriorPoint, xp: InteriorPoint, xi: BoundaryPoint) -> float:
    """Busemann cocycle D(x, x', xi) = lim_{x'' -> xi} (d(x, x'') - d(x', x'')).

    Computed by the closed form D = log(P(x', xi) / P(x, xi)); the defining
    limit is exercised in tests through :func:`geodesic_toward`.
    """
    _check_same_dim(x.n, xp.n, xi.n)
    nv = xi.null_vector()
    a = -mdot(x.coords, nv)
    b = -mdot(xp.coords, nv)
    if min(a, b) < SINGULAR_KERNEL_TOL:
        raise GeometryError("singular kernel: basepoint coincides with the boundary argument")
    return float(np.log(a) - np.log(b))


def busemann_many(x_coords: np.ndarray, xp_coords: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Vectorized D(x, x', xi_i) over an (m, n+1) array of unit directions."""
    m = directions.shape[0]
    null = np.concatenate([np.ones((m, 1)), directions], axis=1)
    a = -(null @ (minkowski_gram(directions.shape[1] - 1) @ x_coords))
    b = -(null @ (minkowski_gram(directions.shape[1] - 1) @ xp_coords))
    return np.log(a) - np.log(b)


def geodesic_toward(x: InteriorPoint, xi: BoundaryPoint, t: float) -> InteriorPoint:
    """Point at distance t >= 0 from x along the geodesic ray toward xi."""
    if t < 0:
        raise GeometryError("geodesic parameter must be nonnegative")
    _check_same_dim(x.n, xi.n)
    nv = xi.null_vector()
    a = -mdot(x.coords, nv)
    v = nv / a - x.coords
    return InteriorPoint(np.cosh(t) * x.coords + np.sinh(t) * v)


def random_isometry(n: int, rng: np.random.Generator, max_rapidity: float = 1.5) -> Isometry:
    """Random element of Isom+(H^{n+1}): rotation . boost . rotation."""
    boost = np.eye(n + 2)
    s = rng.uniform(0.0, max_rapidity)
    boost[0, 0] = boost[1, 1] = np.cosh(s)
    boost[0, 1] = boost[1, 0] = np.sinh(s)

    def random_rotation() -> np.ndarray:
        q, r = np.linalg.qr(rng.normal(size=(n + 1, n + 1)))
        q = q @ np.diag(np.sign(np.diag(r)))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        out = np.eye(n + 2)
        out[1:, 1:] = q
        return out

    m = random_rotation() @ boost @ random_rotation()
    return Isometry(m)
