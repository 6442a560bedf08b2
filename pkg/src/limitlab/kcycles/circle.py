r"""The circle boundary module: H^{-1/2} exact 1-forms and Hardy projections.

On S^1 the exact 1-forms e^{ik theta} d theta (k != 0) diagonalize the
boundary signature operator: T = +1 for k > 0 and -1 for k < 0, and the
Moebius-invariant inner product weights mode k by |e^{ik theta} d theta|^2 =
2 pi / |k| (the 1/|lambda| normalization at eigenvalue lambda = k of the
first-order boundary operator).

The Hardy projections E+- act on the full mode range including the harmonic
mode k = 0, which they annihilate; Schatten experiments run in the flat l^2
model, where multiplication operators are Fourier convolution matrices.
"""

from __future__ import annotations

import numpy as np

from ..crossed import TruncatedOperator
from .base import FiniteKCycle, KCycleError

TWO_PI = 2.0 * np.pi


def circle_modes(n_max: int, include_zero: bool = False) -> np.ndarray:
    ks = np.arange(-n_max, n_max + 1)
    if not include_zero:
        ks = ks[ks != 0]
    return ks


def circle_module(n_max: int) -> FiniteKCycle:
    """The truncated H^{-1/2} module on modes 1 <= |k| <= n_max."""
    if n_max < 4:
        raise KCycleError("need a Fourier cutoff >= 4")
    ks = circle_modes(n_max)
    t = np.diag(np.sign(ks).astype(float))
    weights = TWO_PI / np.abs(ks)
    return FiniteKCycle(tuple(int(k) for k in ks), t, None, weights,
                        meta={"model": "H^{-1/2} exact 1-forms", "n_max": n_max})


def mode_norm_quadrature(k: int, n_grid: int = 512) -> float:
    """Quadrature oracle for the squared mode norm: (1/|lambda|) int omega wedge conj(*omega).

    For omega = e^{ik theta} d theta the Hodge dual is the function
    e^{ik theta}, the integrand is identically 1 d theta, and lambda = k is
    read off from the first-order eigenvalue relation, evaluated spectrally.
    """
    if k == 0:
        raise KCycleError("harmonic mode has no H^{-1/2} norm")
    theta = np.linspace(0.0, TWO_PI, n_grid, endpoint=False)
    omega = np.exp(1j * k * theta)
    integrand = omega * np.conj(omega)
    integral = float(np.real(np.sum(integrand))) * (TWO_PI / n_grid)
    # (-i) d(*omega) = lambda omega: apply the operator by spectral differentiation
    star_omega = omega  # *(f d theta) = f
    d_star = np.fft.ifft(1j * np.fft.fftfreq(n_grid, d=1.0 / n_grid) * np.fft.fft(star_omega))
    lam = np.real(np.mean((-1j) * d_star / omega))
    return integral / abs(lam)


def hilbert_pairing(coeffs1: dict, coeffs2: dict, primitive_constant: complex = 0.0,
                    n_grid: int = 4096) -> complex:
    """<T omega_1, omega_2> evaluated as i int eta_1 wedge conj(omega_2).

    ``coeffs`` map mode k != 0 to the coefficient of e^{ik theta} d theta.
    eta_1 is the primitive with the given free constant; the pairing is
    independent of it because omega_2 integrates to zero.
    """
    theta = np.linspace(0.0, TWO_PI, n_grid, endpoint=False)
    eta1 = np.full(n_grid, complex(primitive_constant))
    for k, c in coeffs1.items():
        if k == 0:
            raise KCycleError("omega_1 must be exact (no k = 0 mode)")
        eta1 += c * np.exp(1j * k * theta) / (1j * k)
    omega2 = np.zeros(n_grid, dtype=complex)
    for k, c in coeffs2.items():
        omega2 += c * np.exp(1j * k * theta)
    return 1j * complex(np.sum(eta1 * np.conj(omega2))) * (TWO_PI / n_grid)


def weighted_t_pairing(coeffs1: dict, coeffs2: dict) -> complex:
    """<T omega_1, omega_2> in the weighted model: sum sign(k) c_k conj(d_k) 2 pi / |k|."""
    acc = 0.0 + 0.0j
    for k, c in coeffs1.items():
        d = coeffs2.get(k)
        if d is not None:
            acc += np.sign(k) * c * np.conj(d) * TWO_PI / abs(k)
    return complex(acc)


def hardy_projections(n_max: int) -> tuple[TruncatedOperator, TruncatedOperator]:
    """E+- on modes |k| <= n_max: diagonal projections onto the positive and
    negative Fourier modes of exact 1-forms (the harmonic k = 0 mode is
    annihilated by both)."""
    if n_max < 4:
        raise KCycleError("need a Fourier cutoff >= 4")
    ks = circle_modes(n_max, include_zero=True)
    e_plus = np.diag((ks > 0).astype(float))
    e_minus = np.diag((ks < 0).astype(float))
    labels = tuple(int(k) for k in ks)
    return (
        TruncatedOperator(e_plus, labels, {"side": "+", "n_max": n_max}),
        TruncatedOperator(e_minus, labels, {"side": "-", "n_max": n_max}),
    )


def multiplication_operator(a, n_max: int, n_grid: int | None = None) -> TruncatedOperator:
    """Fourier-side convolution matrix of a symbol on modes |k| <= n_max.

    ``a`` is evaluated on a uniform grid of size >= 8 n_max (anti-aliasing);
    the declared aliasing bound is the largest Fourier coefficient beyond the
    band needed by the matrix.
    """
    if n_grid is None:
        n_grid = 8 * n_max
    if n_grid < 8 * n_max:
        raise KCycleError(f"grid size {n_grid} too small; need >= {8 * n_max}")
    theta = np.linspace(0.0, TWO_PI, n_grid, endpoint=False)
    vals = np.asarray(a(theta), dtype=complex)
    coeffs = np.fft.fft(vals) / n_grid
    freqs = np.fft.fftfreq(n_grid, d=1.0 / n_grid).astype(int)
    table = dict(zip(freqs, coeffs))
    ks = circle_modes(n_max, include_zero=True)
    mat = np.zeros((len(ks), len(ks)), dtype=complex)
    for i, ki in enumerate(ks):
        for j, kj in enumerate(ks):
            mat[i, j] = table.get(int(ki - kj), 0.0)
    band = np.abs(coeffs[(np.abs(freqs) > 2 * n_max) & (np.abs(freqs) <= 4 * n_max)])
    aliasing = float(np.max(band)) if band.size else 0.0
    return TruncatedOperator(mat, tuple(int(k) for k in ks),
                             {"n_max": n_max, "n_grid": n_grid, "aliasing_bound": aliasing})
