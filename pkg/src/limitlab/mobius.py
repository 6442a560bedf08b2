r"""Moebius transformations and their Lorentz realizations.

Group constructions for n <= 2 go through 2x2 complex matrices acting on the
Riemann sphere C u {oo}.  The bridge to the hyperboloid model identifies a
Minkowski vector (t, x, y, z) with the Hermitian matrix

    X = [[t + z, x + i y], [x - i y, t - z]],

on which A in SL(2, C) acts by X -> A X A^dag.  Null rays correspond to
points of S^2 via stereographic projection zeta = (x + i y)/(1 - z), and the
unit circle |zeta| = 1 is the equator z = 0; matrices preserving the unit
disk therefore fix the equator plane and restrict to Isom+(H^2) acting on the
(t, x, y) block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError, Isometry

FIXED_POINT_TOL = 1e-8


def herm_from_vec(v: np.ndarray) -> np.ndarray:
    t, x, y, z = v
    return np.array([[t + z, x + 1j * y], [x - 1j * y, t - z]])


def vec_from_herm(m: np.ndarray) -> np.ndarray:
    return np.array(
        [
            0.5 * (m[0, 0].real + m[1, 1].real),
            m[1, 0].real,
            -m[1, 0].imag,
            0.5 * (m[0, 0].real - m[1, 1].real),
        ]
    )


def normalize_sl2(a: np.ndarray) -> np.ndarray:
    """Scale a 2x2 complex matrix to determinant one."""
    a = np.asarray(a, dtype=complex)
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if not np.isfinite(det) or det == 0:
        raise GeometryError("matrix is singular or non-finite")
    return a / np.sqrt(det)


def sl2c_to_lorentz(a: np.ndarray) -> np.ndarray:
    """The 4x4 Lorentz matrix (coordinates t, x, y, z) induced by A in SL(2,C)."""
    a = normalize_sl2(a)
    cols = []
    for j in range(4):
        e = np.zeros(4)
        e[j] = 1.0
        cols.append(vec_from_herm(a @ herm_from_vec(e) @ a.conj().T))
    return np.stack(cols, axis=1)


def mobius_apply(a: np.ndarray, z: complex) -> complex:
    """Evaluate (a z + b)/(c z + d), with the usual conventions at infinity."""
    if np.isinf(z):
        return np.inf if a[1, 0] == 0 else a[0, 0] / a[1, 0]
    den = a[1, 0] * z + a[1, 1]
    if den == 0:
        return np.inf
    return (a[0, 0] * z + a[0, 1]) / den


def stereo_to_sphere(z) -> np.ndarray:
    """Map C u {oo} to S^2 c R^3 via zeta = (x + i y)/(1 - z_coord)."""
    z = complex(z)
    if np.isinf(z):
        return np.array([0.0, 0.0, 1.0])
    r2 = abs(z) ** 2
    return np.array([2 * z.real, 2 * z.imag, r2 - 1.0]) / (r2 + 1.0)


def sphere_to_stereo(p: np.ndarray) -> complex:
    if abs(1.0 - p[2]) < 1e-15:
        return np.inf
    return complex(p[0], p[1]) / (1.0 - p[2])


def mobius_fixed_points(a: np.ndarray) -> tuple[complex, complex]:
    """(attracting, repelling) fixed points of a loxodromic/hyperbolic map.

    Roots of c z^2 + (d - a) z - b = 0; the attracting one has multiplier
    |a - c z|^{-2} > 1, equivalently |c z + d| > 1 for det 1.
    """
    a = normalize_sl2(a)
    c = a[1, 0]
    if abs(c) < 1e-15:
        # fixed points: oo and b/(d - a)
        if abs(a[1, 1] - a[0, 0]) < 1e-15:
            raise GeometryError("parabolic or identity element has no axis")
        zf = a[0, 1] / (a[1, 1] - a[0, 0])
        if abs(a[0, 0]) > abs(a[1, 1]):
            return np.inf, zf
        return zf, np.inf
    disc = np.sqrt((a[0, 0] + a[1, 1]) ** 2 - 4.0 + 0j)
    z1 = (a[0, 0] - a[1, 1] + disc) / (2 * c)
    z2 = (a[0, 0] - a[1, 1] - disc) / (2 * c)
    # attracting fixed point maximizes |c z + d|
    if abs(c * z1 + a[1, 1]) >= abs(c * z2 + a[1, 1]):
        return z1, z2
    return z2, z1


def trace_classify(a: np.ndarray, tol: float = FIXED_POINT_TOL) -> str:
    """'hyperbolic' (includes loxodromic), 'parabolic', 'elliptic' or 'identity'."""
    a = normalize_sl2(a)
    tr = a[0, 0] + a[1, 1]
    if abs(a[0, 1]) < tol and abs(a[1, 0]) < tol and abs(a[0, 0] - a[1, 1]) < tol:
        return "identity"
    if abs(tr.imag) > tol:
        return "hyperbolic"
    t = abs(tr.real)
    if abs(t - 2.0) < tol:
        return "parabolic"
    return "hyperbolic" if t > 2.0 else "elliptic"


@dataclass(frozen=True)
class Circle:
    """A circle in the complex plane."""

    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0):
            raise GeometryError("circle radius must be positive")

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) <= self.radius

    def disjoint_from(self, other: "Circle") -> bool:
        return abs(self.center - other.center) > self.radius + other.radius

    def orthogonal_to_unit_circle(self, tol: float = 1e-9) -> bool:
        return abs(abs(self.center) ** 2 - (1.0 + self.radius**2)) < tol


def inversion_pair_matrix(c1: Circle, c2: Circle) -> np.ndarray:
    """SL(2,C) matrix of (inversion in c2) o (inversion in c1).

    This holomorphic map sends the exterior of c1 into the interior of c2,
    the classical Schottky pairing of the two circles.
    """
    p, r = complex(c1.center), c1.radius
    q, s = complex(c2.center), c2.radius
    # z -> w = conj(iota_1(z)) - conj(q) = ((pbar - qbar)(z - p) + r^2)/(z - p)
    m1 = np.array([[np.conj(p) - np.conj(q), -p * (np.conj(p) - np.conj(q)) + r**2], [1.0, -p]])
    m2 = np.array([[q, s**2], [1.0, 0.0]])
    return normalize_sl2(m2 @ m1)


def grandma_matrices(trace_a: complex, trace_b: complex) -> tuple[np.ndarray, np.ndarray]:
    """Two-generator group with parabolic commutator from its generator traces.

    The classical trace-parameter recipe: solve the Markov identity
    t_a^2 + t_b^2 + t_ab^2 = t_a t_b t_ab (equivalent to tr[a,b] = -2) for
    t_ab and place the generators so that real traces give a group preserving
    the unit circle.
    """
    ta = complex(trace_a)
    tb = complex(trace_b)
    disc = np.sqrt((ta * tb) ** 2 - 4.0 * (ta**2 + tb**2) + 0j)
    tab = 0.5 * (ta * tb + disc)
    with np.errstate(invalid="ignore", divide="ignore"):
        z0 = (tab - 2.0) * tb / (tb * tab - 2.0 * ta + 2.0j * tab)
    if not np.isfinite(z0) or z0 == 0:
        raise GeometryError("trace parameters give non-finite matrix entries")
    a = np.array(
        [
            [0.5 * ta, (ta * tab - 2.0 * tb + 4.0j) / ((2.0 * tab + 4.0) * z0)],
            [(ta * tab - 2.0 * tb - 4.0j) * z0 / (2.0 * tab - 4.0), 0.5 * ta],
        ]
    )
    b = np.array([[0.5 * (tb - 2.0j), 0.5 * tb], [0.5 * tb, 0.5 * (tb + 2.0j)]])
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise GeometryError("trace parameters give non-finite matrix entries")
    return normalize_sl2(a), normalize_sl2(b)


def commutator_trace(a: np.ndarray, b: np.ndarray) -> complex:
    m = a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)
    return complex(m[0, 0] + m[1, 1])


def preserves_unit_circle(a: np.ndarray, tol: float = 1e-9) -> bool:
    """True when the induced Lorentz matrix fixes the equator plane z = 0."""
    lam = sl2c_to_lorentz(a)
    scale = max(1.0, float(np.max(np.abs(lam))))
    return (
        np.max(np.abs(lam[3, :3])) < tol * scale
        and np.max(np.abs(lam[:3, 3])) < tol * scale
        and abs(lam[3, 3] - 1.0) < tol * scale
    )


def lorentz_isometry(a: np.ndarray, n: int = 2) -> Isometry:
    """Wrap an SL(2,C) element as a Lorentz Isometry of H^{n+1} (n in {1, 2}).

    For n = 1 the matrix must preserve the unit disk; the equator-fixing
    Lorentz matrix then restricts to the (t, x, y) block.
    """
    lam = sl2c_to_lorentz(a)
    if n == 2:
        return Isometry(lam)
    if n == 1:
        if not preserves_unit_circle(a):
            raise GeometryError("element does not preserve the unit circle; cannot restrict to H^2")
        return Isometry(lam[:3, :3])
    raise GeometryError(f"lorentz_isometry supports n in {{1, 2}}, got {n}")
