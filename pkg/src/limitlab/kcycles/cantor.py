r"""The Cantor-set K-cycle of a Fuchsian Schottky group.

The domain of discontinuity of a rank-r Schottky group in Isom+(H^2) is a
countable union of boundary intervals (b_i, c_i) whose endpoints accumulate
on the Cantor limit set.  On l^2 of the endpoint set the grading is -1 on
each b_i and +1 on each c_i, and F swaps the two endpoints of each interval
(locally constant functions have locally constant primitives).  Commutators
with a multiplication operator are 2x2 blocks, so the singular values of
[F, a] are the endpoint differences |a(b_i) - a(c_i)|, twice each.

At generation L the intervals are the connected components of the complement
of the level-L ping-pong arcs; their endpoints converge to the true gap
endpoints in the limit set as L grows.
"""

from __future__ import annotations

import numpy as np

from ..groups import GroupError, GroupPresentation
from ..mobius import mobius_apply
from .base import FiniteKCycle, KCycleError

TWO_PI = 2.0 * np.pi


def _base_arcs(group: GroupPresentation) -> list[tuple[float, float, int]]:
    """(start, end, circle index) of each pairing circle's boundary arc."""
    arcs = []
    for idx, pair in enumerate(group.pairings):
        for side, circ in enumerate(pair):
            c, rho = complex(circ.center), circ.radius
            mu = np.angle(c)
            halfwidth = np.arccos(min(1.0, 1.0 / abs(c)))
            arcs.append((mu - halfwidth, mu + halfwidth, 2 * idx + side))
    return arcs


def _letter_for_circle(circle_index: int) -> int:
    """The letter whose action maps into the given circle.

    Pairing k stores (domain, range): the generator 2k maps the exterior of
    the domain circle into the range circle 2k+1, and its inverse maps into
    the domain circle 2k.
    """
    pair, side = divmod(circle_index, 2)
    return 2 * pair if side == 1 else 2 * pair + 1


def level_arcs(group: GroupPresentation, level: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints (start, end angles) of the generation-``level`` arcs.

    Level 1 holds the 2r base arcs; each deeper level replaces an arc by the
    images of the other 2r - 1 base arcs under the arc's defining prefix map.
    Returns (starts, ends) sorted by start angle.
    """
    if group.kind != "free-schottky" or group.dimension != 1:
        raise GroupError("Cantor arcs require a Fuchsian (n = 1) Schottky group")
    base = _base_arcs(group)
    two_r = 2 * group.rank
    # nodes: (prefix matrix, incoming letter, start, end)
    nodes = [(np.eye(2, dtype=complex), _letter_for_circle(i), s, e) for (s, e, i) in base]
    for _ in range(level - 1):
        nxt = []
        for mat, letter, _, _ in nodes:
            prefix = mat @ group.sl2_generators[letter]
            for s, e, i in base:
                child_letter = _letter_for_circle(i)
                if child_letter == (letter ^ 1):
                    continue
                zs = mobius_apply(prefix, np.exp(1j * s))
                ze = mobius_apply(prefix, np.exp(1j * e))
                nxt.append((prefix, child_letter, float(np.angle(zs)), float(np.angle(ze))))
        nodes = nxt
    starts = np.array([n[2] for n in nodes])
    ends = np.array([n[3] for n in nodes])
    order = np.argsort(np.mod(starts, TWO_PI))
    return np.mod(starts[order], TWO_PI), np.mod(ends[order], TWO_PI)


def complementary_intervals(group: GroupPresentation, level: int) -> tuple[np.ndarray, np.ndarray]:
    """Gap endpoints (b_i, c_i) at the given generation, as angles.

    b_i is the counterclockwise end of an arc, c_i the start of the next.
    """
    starts, ends = level_arcs(group, level)
    b = ends
    c = np.roll(starts, -1)
    c[-1] = starts[0] + TWO_PI
    return b, np.mod(c, TWO_PI)


def cantor_cycle(group: GroupPresentation, level: int, component: str | int = "all") -> FiniteKCycle:
    """The endpoint K-cycle at the given generation.

    ``component`` selects complementary intervals by the base gap they refine
    ('all' takes the direct sum over every component, which is the usual
    full cycle).
    """
    if level < 3:
        raise KCycleError("need generation level >= 3")
    b, c = complementary_intervals(group, level)
    if component != "all":
        base_tags = _gap_provenance(group, level)
        keep = base_tags == int(component)
        if not np.any(keep):
            raise KCycleError(f"no intervals with provenance {component}")
        b, c = b[keep], c[keep]
    m = len(b)
    labels = []
    for i in range(m):
        labels.append(("b", i))
        labels.append(("c", i))
    f = np.zeros((2 * m, 2 * m))
    for i in range(m):
        f[2 * i, 2 * i + 1] = 1.0
        f[2 * i + 1, 2 * i] = 1.0
    grading = np.tile([-1.0, 1.0], m)
    angles = np.empty(2 * m)
    angles[0::2] = b
    angles[1::2] = c
    return FiniteKCycle(tuple(labels), f, grading, None,
                        meta={"angles": angles, "level": level, "component": component})


def _gap_provenance(group: GroupPresentation, level: int) -> np.ndarray:
    """Base-gap index refined by each generation-``level`` gap.

    The gap after (counterclockwise) an arc keeps the tag of the base gap
    after the corresponding base arc under the same prefix map.
    """
    base = _base_arcs(group)
    two_r = 2 * group.rank
    nodes = [(np.eye(2, dtype=complex), _letter_for_circle(i), s, e, k)
             for k, (s, e, i) in enumerate(base)]
    for _ in range(level - 1):
        nxt = []
        for mat, letter, _, _, tag in nodes:
            prefix = mat @ group.sl2_generators[letter]
            kept = [(s, e, i, k) for k, (s, e, i) in enumerate(base)
                    if _letter_for_circle(i) != (letter ^ 1)]
            for j, (s, e, i, k) in enumerate(kept):
                zs = mobius_apply(prefix, np.exp(1j * s))
                ze = mobius_apply(prefix, np.exp(1j * e))
                # the outermost child inherits the parent's trailing gap tag
                child_tag = tag if j == len(kept) - 1 else k
                nxt.append((prefix, _letter_for_circle(i), float(np.angle(zs)),
                            float(np.angle(ze)), child_tag))
        nodes = nxt
    starts = np.mod(np.array([n[2] for n in nodes]), TWO_PI)
    tags = np.array([n[4] for n in nodes])
    order = np.argsort(starts)
    return tags[order]


def symbol_values(cycle: FiniteKCycle, a) -> np.ndarray:
    """Evaluate a symbol (function of the boundary angle) on the endpoint basis."""
    return np.asarray(a(cycle.meta["angles"]), dtype=complex)


def commutator_with_symbol(cycle: FiniteKCycle, a) -> np.ndarray:
    vals = symbol_values(cycle, a)
    mult = cycle.multiplication(vals)
    return cycle.operator @ mult - mult @ cycle.operator


def endpoint_differences(cycle: FiniteKCycle, a) -> np.ndarray:
    """|a(b_i) - a(c_i)|: the singular values of [F, a], each occurring twice."""
    vals = symbol_values(cycle, a)
    return np.abs(vals[0::2] - vals[1::2])


def gap_power_sums(group: GroupPresentation, a, p_values, levels) -> dict:
    """Generation scan of sum_i |a(b_i) - a(c_i)|^p.

    For p above the limit-set dimension the sums stabilize; below they grow
    through the generations.
    """
    out = {p: [] for p in p_values}
    for level in levels:
        b, c = complementary_intervals(group, level)
        diffs = np.abs(np.asarray(a(b)) - np.asarray(a(c)))
        for p in p_values:
            out[p].append(float(np.sum(diffs**p)))
    return out
