"""Shared container for finite-dimensional K-cycle data."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class KCycleError(ValueError):
    """Raised for invalid K-cycle constructions."""


@dataclass(frozen=True)
class FiniteKCycle:
    """A truncated K-cycle (H, gamma, F) with labeled basis.

    ``grading`` is the diagonal of the Z_2-grading (entries +-1), or None for
    an odd cycle.  ``weights`` are the squared Hilbert norms of the basis
    vectors (all ones for a flat l^2 model, 2 pi / |k| for the circle
    H^{-1/2} model).
    """

    labels: tuple
    operator: np.ndarray
    grading: np.ndarray | None = None
    weights: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        f = np.asarray(self.operator, dtype=complex)
        n = len(self.labels)
        if f.shape != (n, n):
            raise KCycleError(f"operator shape {f.shape} does not match {n} labels")
        object.__setattr__(self, "operator", f)
        if self.grading is not None:
            g = np.asarray(self.grading, dtype=float)
            if g.shape != (n,) or not np.all(np.abs(np.abs(g) - 1.0) < 1e-14):
                raise KCycleError("grading must be a vector of +-1 entries")
            object.__setattr__(self, "grading", g)
        w = np.ones(n) if self.weights is None else np.asarray(self.weights, dtype=float)
        if w.shape != (n,) or np.any(w <= 0):
            raise KCycleError("weights must be positive")
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def invariant_defects(self) -> dict:
        """Numerical defects of the K-cycle identities.

        kernel_projection defaults to I - F^2 rounded to the explicit
        eigenprojection; for the cycles built here F^2 = I and the kernel is
        empty.
        """
        f = self.operator
        n = self.dim
        out = {"self_adjoint": float(np.max(np.abs(f - np.conj(f.T))))}
        p_ker = np.eye(n) - f @ f
        out["f_squared"] = float(np.max(np.abs(f @ f - (np.eye(n) - np.round(p_ker.real)))))
        if self.grading is not None:
            g = np.diag(self.grading)
            out["grading_squared"] = float(np.max(np.abs(g @ g - np.eye(n))))
            out["anticommutator"] = float(np.max(np.abs(f @ g + g @ f)))
        return out

    def multiplication(self, values: np.ndarray) -> np.ndarray:
        """Diagonal action of a function through its per-label values."""
        values = np.asarray(values, dtype=complex)
        if values.shape != (self.dim,):
            raise KCycleError("need one value per basis label")
        return np.diag(values)
