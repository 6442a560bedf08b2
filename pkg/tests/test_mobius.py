import numpy as np
import pytest
from numpy.testing import assert_allclose

from limitlab.geometry import GeometryError
from limitlab.mobius import (
    Circle,
    commutator_trace,
    grandma_matrices,
    inversion_pair_matrix,
    lorentz_isometry,
    mobius_apply,
    mobius_fixed_points,
    normalize_sl2,
    preserves_unit_circle,
    sl2c_to_lorentz,
    sphere_to_stereo,
    stereo_to_sphere,
    trace_classify,
)

RNG = np.random.default_rng(5)


def random_sl2(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return normalize_sl2(m)


def test_stereo_round_trip():
    for _ in range(20):
        z = complex(RNG.normal(), RNG.normal())
        assert abs(sphere_to_stereo(stereo_to_sphere(z)) - z) < 1e-12
    assert_allclose(stereo_to_sphere(np.inf), [0, 0, 1])
    # unit circle lands on the equator
    p = stereo_to_sphere(np.exp(0.7j))
    assert abs(p[2]) < 1e-15


def test_lorentz_boundary_equivariance():
    for _ in range(20):
        a = random_sl2(RNG)
        lam = sl2c_to_lorentz(a)
        z = complex(RNG.normal(), RNG.normal())
        v = np.concatenate([[1.0], stereo_to_sphere(z)])
        w = lam @ v
        assert_allclose(w[1:] / w[0], stereo_to_sphere(mobius_apply(a, z)), atol=1e-10)


def test_lorentz_homomorphism():
    a, b = random_sl2(RNG), random_sl2(RNG)
    assert_allclose(sl2c_to_lorentz(a @ b), sl2c_to_lorentz(a) @ sl2c_to_lorentz(b), atol=1e-10)
    assert_allclose(sl2c_to_lorentz(-a), sl2c_to_lorentz(a), atol=1e-12)


def test_fixed_points_attracting():
    a = np.diag([2.0, 0.5]).astype(complex)
    attr, rep = mobius_fixed_points(a)
    assert attr == np.inf and rep == 0
    for _ in range(10):
        m = random_sl2(RNG)
        if trace_classify(m) != "hyperbolic" or abs(m[0, 0] + m[1, 1]) < 2.2:
            continue
        attr, rep = mobius_fixed_points(m)
        if np.isinf(attr) or np.isinf(rep):
            continue
        # iterating the map contracts toward the attracting point
        z = attr + 0.1
        for _ in range(100):
            z = mobius_apply(m, z)
        assert abs(z - attr) < 1e-5


def test_trace_classification():
    assert trace_classify(np.array([[1.0, 1.0], [0.0, 1.0]])) == "parabolic"
    assert trace_classify(np.diag([2.0, 0.5])) == "hyperbolic"
    c, s = np.cos(0.5), np.sin(0.5)
    assert trace_classify(np.array([[c, -s], [s, c]])) == "elliptic"
    assert trace_classify(np.eye(2)) == "identity"


def test_circle_pairing_ping_pong():
    c1, c2 = Circle(0.6, 0.25), Circle(-0.6, 0.25)
    g = inversion_pair_matrix(c1, c2)
    rng = np.random.default_rng(0)
    for _ in range(50):
        z = complex(rng.normal(scale=2), rng.normal(scale=2))
        if abs(z - c1.center) <= c1.radius:
            continue
        assert abs(mobius_apply(g, z) - c2.center) < c2.radius
    gi = np.linalg.inv(g)
    for _ in range(50):
        z = complex(rng.normal(scale=2), rng.normal(scale=2))
        if abs(z - c2.center) <= c2.radius:
            continue
        assert abs(mobius_apply(gi, z) - c1.center) < c1.radius


def test_circle_validation():
    with pytest.raises(GeometryError):
        Circle(0.0, -1.0)
    assert Circle(0.6, 0.25).disjoint_from(Circle(-0.6, 0.25))
    assert not Circle(0.0, 1.0).disjoint_from(Circle(0.5, 1.0))
    ortho = Circle(1.0 / np.cos(0.5), np.tan(0.5))
    assert ortho.orthogonal_to_unit_circle()


def test_grandma_commutator_relation():
    for ta, tb in [(3.0, 3.0), (2.4, 3.7), (3.0 + 0.1j, 3.0)]:
        a, b = grandma_matrices(ta, tb)
        assert abs(commutator_trace(a, b) + 2.0) < 1e-10
        assert abs(np.linalg.det(a) - 1) < 1e-12
        assert abs(np.linalg.det(b) - 1) < 1e-12
    a, b = grandma_matrices(3.0, 3.0)
    assert preserves_unit_circle(a) and preserves_unit_circle(b)
    a, b = grandma_matrices(3.0 + 0.1j, 3.0)
    assert not preserves_unit_circle(a)


def test_lorentz_isometry_restriction():
    su11 = np.array([[np.cosh(0.5), np.sinh(0.5)], [np.sinh(0.5), np.cosh(0.5)]], dtype=complex)
    iso = lorentz_isometry(su11, n=1)
    assert iso.matrix.shape == (3, 3)
    with pytest.raises(GeometryError):
        lorentz_isometry(np.diag([2.0, 0.5]).astype(complex), n=1)
