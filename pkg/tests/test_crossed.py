import numpy as np
import pytest

from limitlab import crossed as cp
from limitlab.geometry import BoundaryPoint, InteriorPoint
from limitlab.groups import enumerate_ball
from limitlab.measures import group_delta, ps_measure, transport_defect, lipschitz_bump

RNG = np.random.default_rng(12)


def trig_fn(rng):
    c = rng.normal(size=3) + 1j * rng.normal(size=3)

    def f(dirs):
        d = np.atleast_2d(dirs)
        z = d[:, 0] + 1j * d[:, 1]
        return c[0] + c[1] * z + c[2] * np.conj(z) ** 2

    return f


@pytest.fixture(scope="module")
def elements(torus_fuchsian):
    g = torus_fuchsian
    f1 = cp.CrossedProductElement(g, {"": trig_fn(RNG), "a": trig_fn(RNG), "B": trig_fn(RNG)})
    f2 = cp.CrossedProductElement(g, {"b": trig_fn(RNG), "A": trig_fn(RNG), "": trig_fn(RNG)})
    f3 = cp.CrossedProductElement(g, {"ab": trig_fn(RNG), "": trig_fn(RNG)})
    return g, f1, f2, f3


@pytest.fixture(scope="module")
def sample_dirs():
    t = RNG.uniform(0, 2 * np.pi, 50)
    u = RNG.uniform(-0.99, 0.99, 50)
    r = np.sqrt(1 - u**2)
    return np.column_stack([r * np.cos(t), r * np.sin(t), u])


@pytest.fixture(scope="module")
def ball3(torus_fuchsian):
    return enumerate_ball(torus_fuchsian, 3)


def closeness(e1, e2, dirs, tol):
    words = set(e1.support) | set(e2.support)
    return max(float(np.max(np.abs(e1.evaluate(w, dirs) - e2.evaluate(w, dirs)))) for w in words) <= tol


def test_unit_laws(elements, sample_dirs):
    g, f, _, _ = elements
    u = cp.unit(g)
    assert closeness(cp.cp_mul(u, f), f, sample_dirs, 1e-14)
    assert closeness(cp.cp_mul(f, u), f, sample_dirs, 1e-14)


def test_singleton_products(elements, sample_dirs):
    g = elements[0]
    prod = cp.cp_mul(cp.single(g, "a"), cp.single(g, "b"))
    assert prod.support == ("ab",)
    assert np.max(np.abs(prod.evaluate("ab", sample_dirs) - 1.0)) < 1e-14
    cancel = cp.cp_mul(cp.single(g, "a"), cp.single(g, "A"))
    assert cancel.support == ("",)


def test_associativity(elements, sample_dirs):
    g, f1, f2, f3 = elements
    lhs = cp.cp_mul(f1, cp.cp_mul(f2, f3))
    rhs = cp.cp_mul(cp.cp_mul(f1, f2), f3)
    assert closeness(lhs, rhs, sample_dirs, 1e-10)


def test_star_involution(elements, sample_dirs):
    _, f, _, _ = elements
    assert closeness(cp.cp_star(cp.cp_star(f)), f, sample_dirs, 1e-12)


def test_star_of_singleton(elements):
    g = elements[0]
    assert cp.cp_star(cp.single(g, "a")).support == ("A",)


def test_star_antimultiplicative(elements, sample_dirs):
    _, f1, f2, _ = elements
    lhs = cp.cp_star(cp.cp_mul(f1, f2))
    rhs = cp.cp_mul(cp.cp_star(f2), cp.cp_star(f1))
    assert closeness(lhs, rhs, sample_dirs, 1e-10)


def test_represent_unit_identity(elements, ball3):
    g = elements[0]
    xi = BoundaryPoint(np.array([0.3, 0.8, 0.52]))
    op = cp.represent(cp.unit(g), xi, ball3)
    assert np.max(np.abs(op.matrix - np.eye(len(ball3)))) == 0.0


def test_represent_adjoint(elements, ball3):
    _, f, _, _ = elements
    xi = BoundaryPoint(np.array([-0.2, 0.6, 0.77]))
    a = cp.represent(f, xi, ball3).matrix
    b = cp.represent(cp.cp_star(f), xi, ball3).matrix
    assert np.max(np.abs(b - np.conj(a.T))) < 1e-12


def test_represent_homomorphism_interior(elements, ball3):
    _, f1, f2, _ = elements
    xi = BoundaryPoint(np.array([0.1, -0.7, 0.71]))
    a = cp.represent(f1, xi, ball3).matrix
    b = cp.represent(f2, xi, ball3).matrix
    ab = cp.represent(cp.cp_mul(f1, f2), xi, ball3).matrix
    idx = [i for i, w in enumerate(ball3.words) if len(w) <= 1]
    defect = np.max(np.abs((ab - a @ b)[np.ix_(idx, idx)]))
    assert defect < 1e-10


def test_norm_lower_bounds(elements, ball3, torus_fuchsian):
    g = elements[0]
    xi = BoundaryPoint(np.array([0.3, 0.8, 0.52]))
    assert cp.norm_lower_bound(cp.unit(g), [xi], ball3) == 1.0
    assert abs(cp.norm_lower_bound(cp.single(g, "a"), [xi], ball3) - 1.0) < 1e-12
    f = elements[1]
    ball2 = enumerate_ball(torus_fuchsian, 2)
    xis = [BoundaryPoint(RNG.normal(size=3)) for _ in range(3)]
    small = cp.norm_lower_bound(f, xis[:1], ball2)
    bigger_ball = cp.norm_lower_bound(f, xis[:1], ball3)
    more_samples = cp.norm_lower_bound(f, xis, ball2)
    assert bigger_ball >= small - 1e-12
    assert more_samples >= small - 1e-12
    with pytest.raises(cp.CrossedProductError):
        cp.norm_lower_bound(f, [], ball2)


def test_automorphism_identity_and_group_law(elements, sample_dirs):
    _, f, _, _ = elements
    x = InteriorPoint.from_ball([0.05, 0.02, 0.01])
    assert closeness(cp.automorphism(f, 0.0, x), f, sample_dirs, 1e-14)
    once = cp.automorphism(f, 1.0, x)
    twice = cp.automorphism(cp.automorphism(f, 0.7, x), 0.3, x)
    assert closeness(once, twice, sample_dirs, 1e-12)


def test_automorphism_star_equivariance(elements, sample_dirs):
    _, f, _, _ = elements
    x = InteriorPoint.from_ball([0.05, 0.02, 0.01])
    lhs = cp.cp_star(cp.automorphism(f, 0.7, x))
    rhs = cp.automorphism(cp.cp_star(f), 0.7, x)
    assert closeness(lhs, rhs, sample_dirs, 1e-12)


def test_covariance(elements, ball3):
    _, f, _, _ = elements
    xi = BoundaryPoint(np.array([0.3, 0.8, 0.52]))
    x = InteriorPoint.from_ball([0.05, 0.02, 0.01])
    u = cp.covariance_unitary(ball3, 0.8, xi, x)
    assert np.max(np.abs(u.matrix @ np.conj(u.matrix.T) - np.eye(len(ball3)))) < 1e-12
    assert cp.covariance_defect(f, 0.0, xi, ball3, x) == 0.0
    assert cp.covariance_defect(f, 0.8, xi, ball3, x) <= 1e-10


@pytest.fixture(scope="module")
def measure_setup(schottky_n1, measure_basepoints):
    x, x0 = measure_basepoints
    dh = group_delta(schottky_n1, 10)
    s = dh + 0.05
    mus = {L: ps_measure(schottky_n1, x, x0, s, L, delta_hat=dh) for L in (8, 12)}
    return schottky_n1, dh, mus


def test_tau_unit_is_mass(measure_setup):
    group, _, mus = measure_setup
    mu = mus[12]
    assert abs(cp.tau(cp.unit(group), mu) - mu.total_mass) < 1e-12


def test_tau_linearity_and_positivity(measure_setup):
    group, _, mus = measure_setup
    mu = mus[8]
    f = cp.CrossedProductElement(group, {"": lambda d: np.atleast_2d(d)[:, 0] + 0.5j,
                                         "a": lambda d: np.atleast_2d(d)[:, 1]})
    lam = 2.3 - 0.7j
    assert abs(cp.tau(cp.cp_scale(f, lam), mu) - lam * cp.tau(f, mu)) < 1e-12
    val = cp.tau(cp.cp_mul(cp.cp_star(f), f), mu)
    assert val.real >= -1e-10
    assert abs(val.imag) < 1e-10


def test_kms_unit_pair_exact(measure_setup):
    group, dh, mus = measure_setup
    u = cp.unit(group)
    for t in (0.0, 0.7):
        assert cp.kms_defect(u, u, t, dh, mus[12]) < 1e-12


def test_kms_singleton_suite(measure_setup):
    group, dh, mus = measure_setup
    f, fp = cp.single(group, "a"), cp.single(group, "A")
    rel = {}
    for L, mu in mus.items():
        mass = abs(cp.tau(cp.unit(group), mu))
        rel[L] = cp.kms_defect(f, fp, 0.05, dh, mu) / mass
    assert rel[12] <= 0.05
    assert rel[12] < rel[8]


def test_kms_wrong_exponent_worse(measure_setup):
    group, dh, mus = measure_setup
    f, fp = cp.single(group, "a"), cp.single(group, "A")
    mu = mus[12]
    right = cp.kms_defect(f, fp, 0.05, dh, mu)
    wrong = cp.kms_defect(f, fp, 0.05, dh + 0.5, mu)
    assert wrong > right


def test_equivariance_defect_suite(measure_setup):
    group, dh, mus = measure_setup
    f = cp.CrossedProductElement(group, {"": lambda d: np.full(len(np.atleast_2d(d)), 1.7 + 0.0j)})
    assert cp.equivariance_defect(f, "", mus[12]) == 0.0
    rel = {}
    for L, mu in mus.items():
        rel[L] = cp.equivariance_defect(f, "a", mu) / abs(cp.tau(f, mu))
    assert rel[12] <= 0.05
    assert rel[12] < rel[8]


def test_kms_bounded_by_transport(measure_setup):
    # measure-dependent identities track the transport defect of the same (L, s)
    group, dh, mus = measure_setup
    mu = mus[12]
    fs = [lambda d: np.ones(len(np.atleast_2d(d)))]
    for t in np.pi / 4 + np.arange(4) * np.pi / 2:
        fs.append(lipschitz_bump(np.array([np.cos(t), np.sin(t)]), 0.6))
    transport = max(transport_defect(mu, g, fs) for g in "aA")
    f, fp = cp.single(group, "a"), cp.single(group, "A")
    kms = cp.kms_defect(f, fp, 0.05, dh, mu) / mu.total_mass
    assert kms <= 5 * transport


def test_mixed_groups_rejected(torus_fuchsian, schottky_n1):
    f = cp.single(torus_fuchsian, "a")
    g = cp.single(schottky_n1, "a")
    with pytest.raises(cp.CrossedProductError):
        cp.cp_mul(f, g)
