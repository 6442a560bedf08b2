r"""The mid-degree signature operator on S^2 and Moebius pullbacks.

Square-integrable 1-forms on S^2 split into exact and co-exact parts (there
is no harmonic piece), spanned by d Y_lm and *d Y_lm over real spherical
harmonics.  The operator F is +1 on the exact span and -1 on the co-exact
span; the conformally-invariant grading is i times the Hodge star, whose
+-1 eigenvectors are the self-dual combinations (d Y -+ i *d Y)/sqrt(2).
In that eigenbasis the cycle is a label-pair swap against a diagonal
grading, exactly as for the Cantor cycle.

Moebius transformations act conformally, so the induced pullback on 1-forms
is unitary on the full space and commutes with F exactly; truncation shows
up only through quadrature error and l-block leakage, which the commutator
and round-trip diagnostics quantify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.special
from numpy.polynomial.legendre import leggauss

from ..crossed import TruncatedOperator
from ..geometry import Isometry
from .base import FiniteKCycle, KCycleError


def scalar_labels(l_max: int) -> list:
    """Real spherical harmonics (l, m, 'c'|'s'), m = 0 has only the 'c' kind."""
    labels = []
    for l in range(1, l_max + 1):
        labels.append((l, 0, "c"))
        for m in range(1, l + 1):
            labels.append((l, m, "c"))
            labels.append((l, m, "s"))
    return labels


def _legendre_block(l_max: int, x: float):
    """(P, dP/dx) tables indexed [m, l], lpmn convention."""
    if hasattr(scipy.special, "assoc_legendre_p_all"):
        out = np.asarray(scipy.special.assoc_legendre_p_all(l_max, l_max, x, diff_n=1))
        return out[0, :, : l_max + 1].T, out[1, :, : l_max + 1].T
    return scipy.special.lpmn(l_max, l_max, x)


def _norm_lm(l: int, m: int) -> float:
    from math import lgamma

    log = np.log((2 * l + 1) / (4.0 * np.pi)) + lgamma(l - m + 1) - lgamma(l + m + 1)
    return float(np.exp(0.5 * log))


@dataclass(frozen=True)
class SphereGrid:
    """Product Gauss-Legendre x uniform quadrature grid."""

    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray  # per (theta, phi) pair, flattened theta-major

    @classmethod
    def build(cls, l_max: int, margin: int = 0) -> "SphereGrid":
        n_theta = l_max + 2 + margin
        x, wx = leggauss(n_theta)
        theta = np.arccos(x)
        n_phi = 2 * l_max + 2 + 2 * margin
        phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
        w = np.outer(wx, np.full(n_phi, 2.0 * np.pi / n_phi)).reshape(-1)
        return cls(theta, phi, w)

    @property
    def points(self) -> np.ndarray:
        t = np.repeat(self.theta, len(self.phi))
        p = np.tile(self.phi, len(self.theta))
        return np.column_stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])

    def angles(self) -> tuple[np.ndarray, np.ndarray]:
        return np.repeat(self.theta, len(self.phi)), np.tile(self.phi, len(self.theta))


def form_components(l_max: int, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Orthonormal-frame components of the normalized exact forms dY/sqrt(l(l+1)).

    Returns an array of shape (npts, 2, n_scalar): component 0 along e_theta,
    component 1 along e_phi.  The co-exact partners are the 90-degree
    rotations (-w_phi, w_theta) of these columns.
    """
    labels = scalar_labels(l_max)
    npts = len(theta)
    out = np.zeros((npts, 2, len(labels)))
    x = np.cos(theta)
    sin_t = np.sin(theta)
    # legendre tables per unique theta value
    uniq, inv = np.unique(x, return_inverse=True)
    tables = [_legendre_block(l_max, xi) for xi in uniq]
    p_tab = np.stack([t[0] for t in tables])   # (nuniq, m, l)
    dp_tab = np.stack([t[1] for t in tables])
    cos_m = {m: np.cos(m * phi) for m in range(l_max + 1)}
    sin_m = {m: np.sin(m * phi) for m in range(l_max + 1)}
    for j, (l, m, kind) in enumerate(labels):
        nlm = _norm_lm(l, m) * (np.sqrt(2.0) if m > 0 else 1.0)
        scale = 1.0 / np.sqrt(l * (l + 1))
        p_vals = p_tab[inv, m, l]
        dp_vals = dp_tab[inv, m, l]
        dtheta = -sin_t * dp_vals  # d/dtheta of P(cos theta)
        if kind == "c":
            ang, dang = cos_m[m], -m * sin_m[m]
        else:
            ang, dang = sin_m[m], m * cos_m[m]
        out[:, 0, j] = nlm * scale * dtheta * ang
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(sin_t > 1e-14, p_vals / sin_t, 0.0)
        out[:, 1, j] = nlm * scale * ratio * dang
    return out


def sphere_signature_operator(l_max: int, margin: int = 0) -> FiniteKCycle:
    """The truncated boundary signature cycle in the self-dual eigenbasis.

    Labels are ('+'|'-', l, m, kind): the grading is +1 on '+' labels and -1
    on '-' labels, and F swaps the two members of each pair (the exact and
    co-exact spans are interchanged by the grading).  H^1(S^2) = 0, so there
    is no harmonic summand and F^2 = I on the truncation.
    """
    if l_max < 2:
        raise KCycleError("need l_max >= 2")
    scalars = scalar_labels(l_max)
    labels = []
    for lab in scalars:
        labels.append(("+",) + lab)
        labels.append(("-",) + lab)
    n = len(labels)
    f = np.zeros((n, n))
    for i in range(0, n, 2):
        f[i, i + 1] = 1.0
        f[i + 1, i] = 1.0
    grading = np.tile([1.0, -1.0], n // 2)
    return FiniteKCycle(tuple(labels), f, grading, None,
                        meta={"l_max": l_max, "margin": margin, "basis": "self-dual pairs"})


def _sphere_map_and_jacobian(matrix: np.ndarray, pts: np.ndarray):
    """Projective boundary action y(x) and its tangent map for a Lorentz matrix."""
    npts = len(pts)
    v = np.concatenate([np.ones((npts, 1)), pts], axis=1)
    w = v @ matrix.T
    y = w[:, 1:] / w[:, :1]
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    a = matrix[1:, 1:]  # spatial block
    b = matrix[1:, 0]
    c = matrix[0, 1:]
    d = matrix[0, 0]
    jac = np.empty((npts, 3, 3))
    w0 = w[:, 0]
    wsp = w[:, 1:]
    for i in range(npts):
        jac[i] = (a * w0[i] - np.outer(wsp[i], c)) / w0[i] ** 2
    return y, jac


def _frames(theta: np.ndarray, phi: np.ndarray):
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    e_theta = np.column_stack([ct * cp, ct * sp, -st])
    e_phi = np.column_stack([-sp, cp, np.zeros_like(sp)])
    return e_theta, e_phi


def _to_angles(pts: np.ndarray):
    theta = np.arccos(np.clip(pts[:, 2], -1.0, 1.0))
    phi = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2.0 * np.pi)
    return theta, phi


def moebius_pullback(l_max: int, g, margin: int = 0, basis: str = "self-dual") -> TruncatedOperator:
    """Quadrature matrix of the pullback by g on the truncated 1-form basis.

    ``g`` is an Isometry of H^3 (or its 4x4 Lorentz matrix) acting on S^2.
    With basis='form' the matrix is over (exact, co-exact) blocks; the
    default converts to the self-dual pair basis matching
    :func:`sphere_signature_operator`.
    """
    matrix = g.matrix if isinstance(g, Isometry) else np.asarray(g, dtype=float)
    if matrix.shape != (4, 4):
        raise KCycleError("need a 4x4 Lorentz matrix acting on S^2")
    grid = SphereGrid.build(l_max, margin)
    theta_x, phi_x = grid.angles()
    pts = grid.points
    y, jac = _sphere_map_and_jacobian(matrix, pts)
    theta_y, phi_y = _to_angles(y)

    ex = form_components(l_max, theta_x, phi_x)          # (npts, 2, ns)
    ey = form_components(l_max, theta_y, phi_y)

    et_x, ep_x = _frames(theta_x, phi_x)
    et_y, ep_y = _frames(theta_y, phi_y)
    # m[i, beta, alpha] = <f_beta(y_i), J_i f_alpha(x_i)>
    jt = np.einsum("nij,nj->ni", jac, et_x)
    jp = np.einsum("nij,nj->ni", jac, ep_x)
    m = np.empty((len(pts), 2, 2))
    m[:, 0, 0] = np.sum(et_y * jt, axis=1)
    m[:, 0, 1] = np.sum(et_y * jp, axis=1)
    m[:, 1, 0] = np.sum(ep_y * jt, axis=1)
    m[:, 1, 1] = np.sum(ep_y * jp, axis=1)

    # pullback components of the exact basis: w_alpha(x) = sum_beta ey_beta(y) m[beta, alpha]
    gd = np.einsum("nbs,nba->nas", ey, m)
    # co-exact partners: rotate components by 90 degrees in the frame
    def rot(comp):
        out = np.empty_like(comp)
        out[:, 0, :] = -comp[:, 1, :]
        out[:, 1, :] = comp[:, 0, :]
        return out

    w = grid.weights[:, None]
    ex_flat = (ex * w[:, :, None]).reshape(-1, ex.shape[2])
    ex_star_flat = rot(ex * w[:, :, None]).reshape(-1, ex.shape[2])
    gd_flat = gd.reshape(-1, gd.shape[2])
    gd_star_flat = rot(gd).reshape(-1, gd.shape[2])

    p_dd = ex_flat.T @ gd_flat
    p_sd = ex_star_flat.T @ gd_flat
    p_ds = ex_flat.T @ gd_star_flat
    p_ss = ex_star_flat.T @ gd_star_flat
    ns = ex.shape[2]
    p_form = np.block([[p_dd, p_ds], [p_sd, p_ss]])

    scalars = scalar_labels(l_max)
    if basis == "form":
        labels = [("d",) + lab for lab in scalars] + [("*d",) + lab for lab in scalars]
        return TruncatedOperator(p_form, tuple(labels), {"l_max": l_max, "margin": margin})
    # interleaved self-dual pairs: u maps pair coordinates (+,-) to (d, *d)
    n = 2 * ns
    perm = np.zeros((n, n))
    for j in range(ns):
        perm[j, 2 * j] = 1.0
        perm[ns + j, 2 * j + 1] = 1.0
    u_pair = np.array([[1.0, 1.0], [1j, -1j]]) / np.sqrt(2.0)
    big_u = np.zeros((n, n), dtype=complex)
    for j in range(ns):
        big_u[2 * j, 2 * j] = u_pair[0, 0]
        big_u[2 * j, 2 * j + 1] = u_pair[0, 1]
        big_u[2 * j + 1, 2 * j] = u_pair[1, 0]
        big_u[2 * j + 1, 2 * j + 1] = u_pair[1, 1]
    p_interleaved = perm.T @ p_form @ perm
    p_sd_basis = np.conj(big_u.T) @ p_interleaved.astype(complex) @ big_u
    labels = []
    for lab in scalars:
        labels.append(("+",) + lab)
        labels.append(("-",) + lab)
    return TruncatedOperator(p_sd_basis, tuple(labels), {"l_max": l_max, "margin": margin})


def interior_commutator_defect(cycle: FiniteKCycle, pullback: TruncatedOperator,
                               l_cut: int | None = None) -> float:
    """|[F, P]|_F restricted to labels with l <= l_cut (default l_max / 2)."""
    if l_cut is None:
        l_cut = cycle.meta["l_max"] // 2
    comm = cycle.operator @ pullback.matrix - pullback.matrix @ cycle.operator
    idx = [i for i, lab in enumerate(pullback.labels) if lab[1] <= l_cut]
    block = comm[np.ix_(idx, idx)]
    return float(np.linalg.norm(block))


def rotation_isometry(axis: int, angle: float) -> Isometry:
    rot = np.eye(4)
    i, j = [(2, 3), (1, 3), (1, 2)][axis]
    rot[i, i] = rot[j, j] = np.cos(angle)
    rot[i, j] = -np.sin(angle)
    rot[j, i] = np.sin(angle)
    return Isometry(rot)


def boost_isometry(rapidity: float, axis: int = 2) -> Isometry:
    m = np.eye(4)
    k = axis + 1
    m[0, 0] = m[k, k] = np.cosh(rapidity)
    m[0, k] = m[k, 0] = np.sinh(rapidity)
    return Isometry(m)
