"""This module implements edge-gadgets, delegation weights of ordered
cliques and the literal (brute-force) triangle weight."""

from fractions import Fraction
from itertools import combinations, permutations
import logging
from typing import Sequence

from tridecomp.cliques import OrderedTriangle, Triangle, is_clique
from tridecomp.exceptions import DelegationUndefined, NotACliqueError
from tridecomp.graph import Graph, iter_bits
from tridecomp.scalar import NumericMode, ratio

logger = logging.getLogger(__name__)

GADGET_SAME = Fraction(1, 3)
GADGET_SPLIT = Fraction(-1, 6)


def psi(k5: Sequence[int], t: Sequence[int], graph: Graph | None = None) -> Fraction:
    """Edge-gadget value of triangle ``t`` in the ordered 5-clique ``k5``.

    The gadget edge is ``{k5[0], k5[1]}``. Triangles outside ``k5`` get 0,
    triangles meeting the gadget edge in one vertex get -1/6 and all other
    triangles of ``k5`` get +1/3.
    """
    k5 = tuple(k5)
    if len(k5) != 5 or len(set(k5)) != 5:
        raise NotACliqueError(k5)
    if graph is not None and not is_clique(graph, k5):
        raise NotACliqueError(k5)
    members = set(t)
    if not members <= set(k5):
        return Fraction(0)
    shared = len(members & {k5[0], k5[1]})
    return GADGET_SPLIT if shared == 1 else GADGET_SAME


def gadget_edge_sum(g: Graph, k5: Sequence[int], f: tuple[int, int]) -> Fraction:
    """Sum of ``psi`` over the triangles of ``g`` containing edge ``f``."""
    if not is_clique(g, k5):
        raise NotACliqueError(k5)
    u, v = f
    total = Fraction(0)
    for w in iter_bits(g.rows[u] & g.rows[v]):
        total += psi(k5, (u, v, w))
    return total


def _prefix_count(g: Graph, prefix: Sequence[int]) -> int:
    bits = (1 << g.n) - 1
    for v in prefix:
        bits &= g.rows[v]
    return bits.bit_count()


def weight_W(g: Graph, clique: Sequence[int], mode: NumericMode = NumericMode.FLOAT):
    """Delegation weight ``W(v1, ..., vr)`` of an ordered clique, ``2 <= r <= 4``.

    It is the product over ``i = 2..r`` of ``1 / |K_{i+1}(G, {v1..vi})|``.
    """
    clique = tuple(clique)
    if not 2 <= len(clique) <= 4:
        msg = f"ordered clique {clique} must have 2 to 4 vertices"
        raise ValueError(msg)
    if not is_clique(g, clique):
        raise NotACliqueError(clique)
    denominator = 1
    for i in range(2, len(clique) + 1):
        count = _prefix_count(g, clique[:i])
        if count == 0:
            raise DelegationUndefined(clique[:i])
        denominator *= count
    return ratio(1, denominator, mode)


def _five_cliques_through(g: Graph, t: Sequence[int]) -> list[tuple[int, ...]]:
    rows = g.rows
    common = rows[t[0]] & rows[t[1]] & rows[t[2]]
    sets = []
    for y in iter_bits(common):
        for z in iter_bits(common & rows[y] >> (y + 1) << (y + 1)):
            sets.append(tuple(sorted((*t, y, z))))
    return sets


def w_oracle(g: Graph, t: Triangle, mode: NumericMode = NumericMode.FLOAT):
    """Literal triangle weight: half the sum of ``W(v1..v4) * psi_K(T)`` over
    every ordered 5-clique ``K`` of ``g``.

    Ordered 5-cliques not containing ``t`` contribute zero, so only the
    5-cliques through ``t`` are visited.
    """
    if not is_clique(g, t):
        raise NotACliqueError(t)
    total = ratio(0, 1, mode)
    for vertices in _five_cliques_through(g, t):
        for k in permutations(vertices):
            total += weight_W(g, k[:4], mode) * psi(k, t)
    return total / 2


def w_oracle_ordered(g: Graph, o: OrderedTriangle, mode: NumericMode = NumericMode.FLOAT):
    """Literal weight of an ordered triangle: half the sum over ordered
    5-cliques containing ``o`` as an ordered subsequence."""
    if not is_clique(g, o):
        raise NotACliqueError(o)
    total = ratio(0, 1, mode)
    for vertices in _five_cliques_through(g, o):
        for k in permutations(vertices):
            positions = [k.index(x) for x in o]
            if positions == sorted(positions):
                total += weight_W(g, k[:4], mode) * psi(k, o)
    return total / 2


def five_clique_edge_sums(g: Graph, k5: Sequence[int]) -> dict[tuple[int, int], Fraction]:
    """Gadget edge sums for every edge of ``k5``; used to inspect a gadget."""
    return {
        (min(u, v), max(u, v)): gadget_edge_sum(g, k5, (u, v))
        for u, v in combinations(k5, 2)
    }
