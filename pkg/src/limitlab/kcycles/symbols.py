"""Boundary symbols: direct functions, Hoelder models, and conjugacy pullbacks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..groups import BoundaryConjugacy
from .base import KCycleError


@dataclass(frozen=True)
class SymbolFunction:
    """A complex-valued function on S^1 (by angle) or S^2 with a smoothness tag."""

    fn: object
    smoothness: str = "smooth"
    provenance: dict = field(default_factory=dict)

    def __call__(self, theta):
        return np.asarray(self.fn(np.atleast_1d(np.asarray(theta, dtype=float))), dtype=complex)

    @property
    def hoelder_exponent(self) -> float | None:
        if self.smoothness.startswith("hoelder("):
            return float(self.smoothness[8:-1])
        return None


def smooth_symbol(coeffs: dict) -> SymbolFunction:
    """Trigonometric symbol sum_k c_k e^{i k theta}."""

    def fn(theta):
        acc = np.zeros(len(theta), dtype=complex)
        for k, c in coeffs.items():
            acc += c * np.exp(1j * k * theta)
        return acc

    return SymbolFunction(fn, "smooth", {"kind": "trig", "coeffs": dict(coeffs)})


def weierstrass_symbol(alpha: float = 0.5, scales: int = 8, base: float = 2.0) -> SymbolFunction:
    """Lacunary Hoelder-alpha model symbol sum_{j<=scales} base^{-j alpha} cos(base^j theta)."""

    def fn(theta):
        acc = np.zeros(len(theta), dtype=float)
        for j in range(scales + 1):
            acc += base ** (-j * alpha) * np.cos(base**j * theta)
        return acc.astype(complex)

    return SymbolFunction(fn, f"hoelder({alpha})",
                          {"kind": "weierstrass", "alpha": alpha, "scales": scales})


def estimate_hoelder(phi: BoundaryConjugacy, max_scale_halvings: int = 6) -> float:
    """Hoelder exponent of the sampled conjugacy from dyadic increment decay.

    Fits log of the median target increment against log of the source gap
    over dyadically thinned subsamples.
    """
    angles = phi.source_angles
    targets = phi.target_points
    xs, ys = [], []
    for j in range(max_scale_halvings):
        step = 2**j
        if step >= len(angles) // 4:
            break
        gaps = np.diff(angles[::step])
        incs = np.abs(np.diff(targets[::step]))
        ok = gaps > 1e-12
        if np.sum(ok) < 8:
            break
        xs.append(np.log(np.median(gaps[ok])))
        ys.append(np.log(np.median(incs[ok])))
    if len(xs) < 3:
        return 1.0
    slope = np.polyfit(xs, ys, 1)[0]
    return float(np.clip(slope, 0.05, 1.0))


def pushforward_symbols(phi: BoundaryConjugacy, f) -> SymbolFunction:
    """The symbol a(theta) = f(phi(theta)) on the source circle.

    ``f`` is a smooth function of the target boundary point (given as a
    complex number).  The smoothness tag records the estimated Hoelder
    exponent of the sampled conjugacy.
    """
    if len(phi.source_angles) < 200:
        raise KCycleError(
            f"conjugacy carries {len(phi.source_angles)} samples; need >= 200"
        )
    alpha = estimate_hoelder(phi)

    def fn(theta):
        return np.asarray(f(phi(theta)), dtype=complex)

    tag = "smooth" if alpha > 0.999 else f"hoelder({alpha:.3f})"
    return SymbolFunction(fn, tag, {"kind": "pushforward", "samples": len(phi.source_angles),
                                    "alpha_hat": alpha})
