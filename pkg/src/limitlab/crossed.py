r"""The boundary crossed product at finite truncation.

Elements are finite formal sums f = sum_g f_g g with boundary-function
coefficients, multiplied by the twisted convolution

    (f f')_gamma(xi) = sum_{g g' = gamma} f_g(xi) f'_{g'}(xi g),

starred by (f*)_g(xi) = conj(f_{g^{-1}})(xi g), and represented on the word
ball through the kernels k_{gamma,gamma'}(xi) = f_{gamma gamma'^{-1}}(xi gamma^{-1}).
The one-parameter flow attached to an interior point x multiplies the g-th
coefficient by e^{i t D(x, x g^{-1}, xi)}; its KMS behavior at the critical
exponent is probed against truncated Patterson-Sullivan measures.

Coefficients are black-box evaluables on (m, n+1) arrays of boundary
directions (composed arguments like xi g make grid storage awkward);
optional Lipschitz constants ride along in element metadata for reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import BoundaryPoint, InteriorPoint, busemann_many
from .groups import GroupPresentation, WordBall, invert_word, multiply_words
from .measures import AtomicBoundaryMeasure, ps_measure


class CrossedProductError(ValueError):
    """Raised for invalid crossed-product operations."""


def _as_array_fn(value):
    if callable(value):
        return value
    const = complex(value)

    def f(dirs):
        return np.full(len(np.atleast_2d(dirs)), const)

    return f


def _letter_matrix_cached(group: GroupPresentation, letter: str) -> np.ndarray:
    cache = group.meta.setdefault("_lorentz_cache", {})
    if letter not in cache:
        cache[letter] = group.isometry(letter).matrix
    return cache[letter]


def boundary_action(group: GroupPresentation, word: str, dirs: np.ndarray) -> np.ndarray:
    """xi . word for an (m, n+1) array of unit directions.

    Applied letter by letter: the one-shot word matrix has entries ~ e^{2d}
    and squares the roundoff, while successive short maps stay conditioned
    (contraction damps the accumulated error).
    """
    out = np.atleast_2d(dirs)
    for ch in multiply_words(word, ""):
        mat = _letter_matrix_cached(group, ch)
        null = np.concatenate([np.ones((len(out), 1)), out], axis=1)
        img = null @ mat.T
        out = img[:, 1:] / img[:, :1]
        out = out / np.linalg.norm(out, axis=1, keepdims=True)
    return out


def interior_action(group: GroupPresentation, word: str, x: InteriorPoint) -> InteriorPoint:
    v = x.coords
    for ch in multiply_words(word, ""):
        v = _letter_matrix_cached(group, ch) @ v
    return InteriorPoint(v)


@dataclass(frozen=True)
class CrossedProductElement:
    """Finitely supported map word -> boundary coefficient function."""

    group: GroupPresentation
    coeffs: dict
    lipschitz: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for word, fn in self.coeffs.items():
            w = multiply_words(word, "")
            if w in clean:
                raise CrossedProductError(f"duplicate support word {w!r}")
            clean[w] = _as_array_fn(fn)
        object.__setattr__(self, "coeffs", clean)

    @property
    def support(self):
        return tuple(sorted(self.coeffs))

    def coeff(self, word: str):
        return self.coeffs.get(word)

    def evaluate(self, word: str, dirs: np.ndarray) -> np.ndarray:
        fn = self.coeffs.get(word)
        if fn is None:
            return np.zeros(len(np.atleast_2d(dirs)), dtype=complex)
        return np.asarray(fn(np.atleast_2d(dirs)), dtype=complex)


def unit(group: GroupPresentation) -> CrossedProductElement:
    return CrossedProductElement(group, {"": 1.0})


def single(group: GroupPresentation, word: str, coefficient=1.0) -> CrossedProductElement:
    """The element f = coefficient . word with a constant or callable coefficient."""
    return CrossedProductElement(group, {word: coefficient})


def _check_same_group(f: CrossedProductElement, g: CrossedProductElement):
    if f.group is not g.group:
        raise CrossedProductError("elements live over different groups")


def cp_add(f: CrossedProductElement, g: CrossedProductElement) -> CrossedProductElement:
    _check_same_group(f, g)
    coeffs = {}
    for w in set(f.coeffs) | set(g.coeffs):
        ff, gg = f.coeffs.get(w), g.coeffs.get(w)
        if ff is None:
            coeffs[w] = gg
        elif gg is None:
            coeffs[w] = ff
        else:
            coeffs[w] = (lambda a, b: lambda d: np.asarray(a(d)) + np.asarray(b(d)))(ff, gg)
    return CrossedProductElement(f.group, coeffs)


def cp_scale(f: CrossedProductElement, scalar: complex) -> CrossedProductElement:
    lam = complex(scalar)
    return CrossedProductElement(
        f.group, {w: (lambda fn: lambda d: lam * np.asarray(fn(d)))(fn) for w, fn in f.coeffs.items()}
    )


def cp_mul(f: CrossedProductElement, fp: CrossedProductElement) -> CrossedProductElement:
    """Twisted convolution (f f')_gamma(xi) = sum_{g g' = gamma} f_g(xi) f'_{g'}(xi g)."""
    _check_same_group(f, fp)
    group = f.group
    terms: dict[str, list] = {}
    for g, fg in f.coeffs.items():
        for gp, fgp in fp.coeffs.items():
            gamma = multiply_words(g, gp)
            terms.setdefault(gamma, []).append((fg, fgp, g))
    coeffs = {}
    for gamma, parts in terms.items():

        def make(parts):
            def fn(dirs):
                dirs = np.atleast_2d(dirs)
                acc = np.zeros(len(dirs), dtype=complex)
                for fg, fgp, g in parts:
                    acc += np.asarray(fg(dirs), dtype=complex) * np.asarray(
                        fgp(boundary_action(group, g, dirs)), dtype=complex
                    )
                return acc

            return fn

        coeffs[gamma] = make(parts)
    return CrossedProductElement(group, coeffs)


def cp_star(f: CrossedProductElement) -> CrossedProductElement:
    """(f*)_g(xi) = conj(f_{g^{-1}}(xi g))."""
    group = f.group
    coeffs = {}
    for h, fh in f.coeffs.items():
        # support word h contributes the coefficient at g = h^{-1}, evaluated
        # at xi g = xi h^{-1}
        g = invert_word(h)

        def make(fh, g_act):
            def fn(dirs):
                return np.conj(np.asarray(fh(boundary_action(group, g_act, dirs)), dtype=complex))

            return fn

        coeffs[g] = make(fh, g)
    return CrossedProductElement(group, coeffs)


@dataclass(frozen=True)
class TruncatedOperator:
    """Dense matrix over labeled basis vectors (words or modes)."""

    matrix: np.ndarray
    labels: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise CrossedProductError(f"operator matrix must be square, got {m.shape}")
        if m.shape[0] != len(self.labels):
            raise CrossedProductError("label count does not match matrix dimension")
        if len(set(self.labels)) != len(self.labels):
            raise CrossedProductError("labels must be unique")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", tuple(self.labels))


def represent(f: CrossedProductElement, xi: BoundaryPoint, ball: WordBall) -> TruncatedOperator:
    """pi^xi(f) on the word ball: entries f_{gamma gamma'^{-1}}(xi gamma^{-1}).

    Exact on the interior block when support length + word length <= ball
    radius; otherwise a truncation-bias flag is set in the metadata.
    """
    group = f.group
    words = ball.words
    n = len(words)
    support_len = max((len(w) for w in f.coeffs), default=0)
    meta = {"xi": xi.direction.copy(), "max_len": ball.max_len,
            "exact_interior_radius": ball.max_len - support_len}
    if support_len > ball.max_len:
        meta["truncation_bias"] = True
    xi_dir = xi.direction[None, :]
    xi_g = {w: boundary_action(group, invert_word(w), xi_dir) for w in words}
    mat = np.zeros((n, n), dtype=complex)
    for i, wi in enumerate(words):
        wi_inv_dir = xi_g[wi]
        for j, wj in enumerate(words):
            g = multiply_words(wi, invert_word(wj))
            fn = f.coeffs.get(g)
            if fn is not None:
                mat[i, j] = complex(np.asarray(fn(wi_inv_dir), dtype=complex)[0])
    return TruncatedOperator(mat, words, meta)


def norm_lower_bound(f: CrossedProductElement, xi_samples, ball: WordBall) -> float:
    """max over boundary samples of the truncated operator 2-norm.

    A lower bound for the reduced norm sup_xi |pi^xi(f)|, nondecreasing in
    both the ball radius and the sample count.
    """
    if not xi_samples:
        raise CrossedProductError("need at least one boundary sample")
    best = 0.0
    for xi in xi_samples:
        op = represent(f, xi, ball)
        best = max(best, float(np.linalg.norm(op.matrix, 2)))
    return best


def automorphism(f: CrossedProductElement, t: float, x: InteriorPoint) -> CrossedProductElement:
    """alpha_t f: multiply the g-th coefficient by e^{i t D(x, x g^{-1}, xi)}."""
    group = f.group
    coeffs = {}
    for g, fg in f.coeffs.items():
        xginv = interior_action(group, invert_word(g), x)

        def make(fg, xginv):
            def fn(dirs):
                dirs = np.atleast_2d(dirs)
                phase = np.exp(1j * t * busemann_many(x.coords, xginv.coords, dirs))
                return phase * np.asarray(fg(dirs), dtype=complex)

            return fn

        coeffs[g] = make(fg, xginv)
    return CrossedProductElement(group, coeffs)


def covariance_unitary(ball: WordBall, t: float, xi: BoundaryPoint, x: InteriorPoint) -> TruncatedOperator:
    """U(t, xi): diagonal phases e^{i t D(x g, x, xi)} over the ball labels."""
    group = ball.group
    phases = []
    for w in ball.words:
        xg = interior_action(group, w, x)
        phases.append(np.exp(1j * t * float(busemann_many(xg.coords, x.coords, xi.direction[None, :])[0])))
    return TruncatedOperator(np.diag(phases), ball.words, {"t": t})


def covariance_defect(f: CrossedProductElement, t: float, xi: BoundaryPoint,
                      ball: WordBall, x: InteriorPoint) -> float:
    """Frobenius norm of pi^xi(alpha_t f) - U(t,xi) pi^xi(f) U(t,xi)^{-1}."""
    lhs = represent(automorphism(f, t, x), xi, ball).matrix
    mid = represent(f, xi, ball).matrix
    u = covariance_unitary(ball, t, xi, x).matrix
    rhs = u @ mid @ np.conj(u.T)
    return float(np.linalg.norm(lhs - rhs))


def tau(f: CrossedProductElement, mu: AtomicBoundaryMeasure) -> complex:
    """The positive functional tau(f) = int f_e dmu, as an atomic sum."""
    fn = f.coeffs.get("")
    if fn is None:
        return 0.0 + 0.0j
    vals = np.asarray(fn(mu.directions), dtype=complex)
    return complex(np.sum(mu.weights * vals))


def kms_defect(f: CrossedProductElement, fp: CrossedProductElement, t: float,
               delta_hat: float, mu: AtomicBoundaryMeasure) -> float:
    """|F(t + i delta_hat) - tau(alpha_t(f') f)| for F(t) = tau(f alpha_t(f')).

    The analytic continuation is evaluated by the explicit weight insertion:
    F(t + i delta) = sum_g int f_g(xi) e^{i t D(x g^{-1}, x, xi)}
    f'_{g^{-1}}(xi g) e^{-delta D(x g^{-1}, x, xi)} dmu_x(xi).
    """
    group = f.group
    x = mu.basepoint
    dirs = mu.directions
    lhs = 0.0 + 0.0j
    for g, fg in f.coeffs.items():
        ginv = invert_word(g)
        fpg = fp.coeffs.get(ginv)
        if fpg is None:
            continue
        xginv = interior_action(group, ginv, x)
        d = busemann_many(xginv.coords, x.coords, dirs)
        vals = (
            np.asarray(fg(dirs), dtype=complex)
            * np.exp((1j * t - delta_hat) * d)
            * np.asarray(fpg(boundary_action(group, g, dirs)), dtype=complex)
        )
        lhs += complex(np.sum(mu.weights * vals))
    rhs = tau(cp_mul(automorphism(fp, t, x), f), mu)
    return float(abs(lhs - rhs))


def group_translate(f: CrossedProductElement, gamma: str) -> CrossedProductElement:
    """gamma . f for the fiberwise action: (gamma . f)_g(xi) = f_{gamma^{-1} g gamma}(xi gamma).

    Only the identity coefficient matters for tau, but the full twist is
    implemented for use on any element.
    """
    group = f.group
    coeffs = {}
    for g, fg in f.coeffs.items():
        new_word = multiply_words(multiply_words(gamma, g), invert_word(gamma))

        def make(fg):
            def fn(dirs):
                return np.asarray(fg(boundary_action(group, gamma, np.atleast_2d(dirs))), dtype=complex)

            return fn

        coeffs[new_word] = make(fg)
    return CrossedProductElement(group, coeffs)


def equivariance_defect(f: CrossedProductElement, gamma: str, mu: AtomicBoundaryMeasure) -> float:
    """|tau_{x gamma}(f) - tau_x(gamma . f)|, with both measures built from
    the parameters carried by mu (same orbit basepoint and normalization)."""
    group = f.group
    x_gamma = interior_action(group, gamma, mu.basepoint)
    mu_xg = ps_measure(group, x_gamma, mu.orbit_base, mu.s, mu.max_len, delta_hat=mu.delta_hat)
    lhs = tau(f, mu_xg)
    rhs = tau(group_translate(f, gamma), mu)
    return float(abs(lhs - rhs))
