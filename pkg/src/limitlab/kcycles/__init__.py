"""Concrete K-cycles and summability experiments.

Cantor-set cycles from Fuchsian Schottky groups, the H^{-1/2} circle module
with Hardy projections, the mid-degree signature operator on S^2, Schatten
norms, the Janson-Wolff integral criterion, and threshold estimation.
"""

from .base import FiniteKCycle
from .cantor import cantor_cycle, gap_power_sums
from .circle import circle_module, hardy_projections, multiplication_operator, hilbert_pairing
from .schatten import (
    JansonWolffResult,
    ThresholdReport,
    commutator_singular_values,
    janson_wolff_integral,
    schatten_norm,
    summability_threshold,
)
from .sphere import moebius_pullback, sphere_signature_operator
from .symbols import SymbolFunction, pushforward_symbols, weierstrass_symbol

__all__ = [
    "FiniteKCycle",
    "cantor_cycle",
    "gap_power_sums",
    "circle_module",
    "hardy_projections",
    "multiplication_operator",
    "hilbert_pairing",
    "schatten_norm",
    "janson_wolff_integral",
    "commutator_singular_values",
    "summability_threshold",
    "JansonWolffResult",
    "ThresholdReport",
    "SymbolFunction",
    "pushforward_symbols",
    "weierstrass_symbol",
    "sphere_signature_operator",
    "moebius_pullback",
]
