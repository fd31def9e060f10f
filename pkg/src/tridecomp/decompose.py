"""This module computes the triangle weighting of a graph through the
cancellation form of the gadget sum, checks its edge sums and maps graph
densities to points of the program chain.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
import logging
import math
from typing import Iterator, NamedTuple, Optional

import numpy as np

from tridecomp.cliques import OrderedTriangle, is_clique
from tridecomp.constants import DEFAULT_TOLERANCE, EXACT_MODE_MAX_N, VECTOR_MAX_LEVEL_SIZE
from tridecomp.exceptions import (
    DelegationUndefined,
    DomainError,
    ExactModeTooLarge,
    NotACliqueError,
    UncoverableEdge,
)
from tridecomp.gadgets import weight_W
from tridecomp.graph import Graph, iter_bits
from tridecomp.interfaces import (
    BStatistics,
    EdgeSum,
    EdgeSumVerdict,
    ReportSummary,
    TriangleWeight,
    TriangleWeightReport,
)
from tridecomp.program_search import threshold_exact
from tridecomp.programs import ProgramPoint
from tridecomp.scalar import NumericMode, ratio
from tridecomp.util import timeit

logger = logging.getLogger(__name__)


class BlockResult(NamedTuple):
    """Weights of every ordered triangle starting with ``(x1, x2)``."""

    x1: int
    x2: int
    third: tuple[int, ...]
    weights: tuple
    b_count: int = 0
    b_sum: float = 0.0
    b_min: float = math.inf
    b_max: float = -math.inf


class TriangleWeigher:
    """Evaluates ordered triangle weights one ordered edge at a time.

    For an ordered edge ``(x1, x2)`` with common neighbourhood ``U``, every
    count in the cancellation formula depends on ``x1``, ``x2`` and the
    pair ``y, z`` only, so the weights of all ordered triangles
    ``(x1, x2, x3)``, ``x3`` in ``U``, come out of one block computation:
    with ``M`` the adjacency inside ``U``, ``R(x3)`` is row ``x3`` of ``M``.
    Float mode does this with numpy matrix products, exact mode with bitset
    popcounts and ``Fraction`` sums.
    """

    def __init__(self, graph: Graph, mode: NumericMode = NumericMode.FLOAT):
        self.graph = graph
        self.mode = NumericMode(mode)
        if self.mode == NumericMode.FLOAT:
            self._adjacency = graph.matrix
            self._common = self._adjacency @ self._adjacency
            self._degrees = self._adjacency.sum(axis=1)

    def weigh_vertices(self, vertices: range) -> list[BlockResult]:
        """Blocks of all ordered edges whose first vertex is in ``vertices``.

        Triangles ``a < b < c`` are checked for delegation while handling the
        block ``(a, b)``, so the first failure found is the lexicographically
        first one.
        """
        rows = self.graph.rows
        blocks = []
        for x1 in vertices:
            triple = None
            if self.mode == NumericMode.FLOAT:
                adjacency = self._adjacency
                triple = (adjacency * adjacency[x1]) @ adjacency.T
            for x2 in iter_bits(rows[x1]):
                if self.mode == NumericMode.FLOAT:
                    blocks.append(self._float_block(x1, x2, triple))
                else:
                    blocks.append(self._exact_block(x1, x2))
        return blocks

    def ordered_weight(self, o: OrderedTriangle):
        """Weight of one ordered triangle, taken from its block."""
        x1, x2, x3 = o
        if not is_clique(self.graph, o):
            raise NotACliqueError(o)
        if self.mode == NumericMode.FLOAT:
            adjacency = self._adjacency
            block = self._float_block(x1, x2, (adjacency * adjacency[x1]) @ adjacency.T)
        else:
            block = self._exact_block(x1, x2)
        return block.weights[block.third.index(x3)]

    def _float_block(self, x1: int, x2: int, triple: np.ndarray) -> BlockResult:
        adjacency, common = self._adjacency, self._common
        members = np.flatnonzero(adjacency[x1] * adjacency[x2])
        if members.size == 0:
            return BlockResult(x1, x2, (), ())
        inside = adjacency[np.ix_(members, members)]
        paths = inside @ inside
        c2 = float(members.size)
        with_x1 = common[x1, members]
        with_edge = inside.sum(axis=1)

        stats = {}
        if x1 < x2:
            upper = members > x2
            _check_delegation(x1, x2, members, inside, paths, upper)
            stats = self._float_b_statistics(members, inside, upper)

        valid = (inside > 0) & (paths > 0)
        b_safe = np.where(with_edge > 0, with_edge, 1.0)
        outer = np.where(with_edge > 0, 1.0 / (with_x1 * b_safe) - 1.0 / (c2 * b_safe), 0.0)
        t = np.where(valid, paths, 1.0)
        s = np.where(valid, triple[np.ix_(members, members)], 1.0)
        g = np.where(valid, common[np.ix_(members, members)], 1.0)
        a_col = with_x1[:, None]
        b_col = b_safe[:, None]
        pair = (
            1.0 / (a_col * b_col * t)
            - 1.0 / (c2 * b_col * t)
            + 1.0 / (a_col * s * t)
            - 1.0 / (g * s * t)
        )
        pair = np.where(valid, pair, 0.0)
        nested = ((inside @ pair) * inside).sum(axis=1)
        weights = (1.0 / c2 - inside @ outer - nested) / 6.0
        return BlockResult(
            x1, x2, tuple(int(v) for v in members), tuple(float(w) for w in weights), **stats
        )

    def _float_b_statistics(self, members, inside, upper) -> dict:
        selected = inside[upper]
        if selected.size == 0:
            return {}
        n = self.graph.n
        spread = (self._degrees[members][:, None] - self._common[np.ix_(members, members)]) / n
        count = int(round(((selected @ inside) * selected).sum()))
        if count == 0:
            return {}
        total = float(((selected @ (inside * spread)) * selected).sum())
        reached = ((selected.T @ selected) > 0) & (inside > 0)
        return {
            "b_count": count,
            "b_sum": total,
            "b_min": float(spread[reached].min()),
            "b_max": float(spread[reached].max()),
        }

    def _exact_block(self, x1: int, x2: int) -> BlockResult:
        rows = self.graph.rows
        n = self.graph.n
        members_bits = rows[x1] & rows[x2]
        members = list(iter_bits(members_bits))
        if not members:
            return BlockResult(x1, x2, (), ())
        c2 = len(members)

        stats = {}
        if x1 < x2:
            count, total, low, high = 0, 0.0, math.inf, -math.inf
            for x3 in members:
                if x3 <= x2:
                    continue
                shared = members_bits & rows[x3]
                if not shared:
                    raise DelegationUndefined((x1, x2, x3))
                for y in iter_bits(shared):
                    if not rows[y] & shared:
                        raise DelegationUndefined((x1, x2, x3, y))
                    for z in iter_bits(rows[y] & shared):
                        value = (rows[y].bit_count() - (rows[y] & rows[z]).bit_count()) / n
                        count += 1
                        total += value
                        low, high = min(low, value), max(high, value)
            if count:
                stats = {"b_count": count, "b_sum": total, "b_min": low, "b_max": high}

        outer = {}
        pair = {}
        for y in members:
            around = members_bits & rows[y]
            b = around.bit_count()
            if b == 0:
                continue
            a = (rows[x1] & rows[y]).bit_count()
            outer[y] = Fraction(1, a * b) - Fraction(1, c2 * b)
            for z in iter_bits(around):
                t = (around & rows[z]).bit_count()
                if t == 0:
                    continue
                s = (rows[x1] & rows[y] & rows[z]).bit_count()
                g = (rows[y] & rows[z]).bit_count()
                pair[y, z] = (
                    Fraction(1, a * b * t)
                    - Fraction(1, c2 * b * t)
                    + Fraction(1, a * s * t)
                    - Fraction(1, g * s * t)
                )

        weights = []
        for x3 in members:
            shared = members_bits & rows[x3]
            total = Fraction(0)
            for y in iter_bits(shared):
                total += outer[y]
                for z in iter_bits(rows[y] & shared):
                    total += pair[y, z]
            weights.append((Fraction(1, c2) - total) / 6)
        return BlockResult(x1, x2, tuple(members), tuple(weights), **stats)


def _check_delegation(x1, x2, members, inside, paths, upper) -> None:
    for index in np.flatnonzero(upper):
        x3 = int(members[index])
        row = inside[index] > 0
        if not row.any():
            raise DelegationUndefined((x1, x2, x3))
        isolated = np.flatnonzero(row & (paths[index] == 0))
        if isolated.size:
            raise DelegationUndefined((x1, x2, x3, int(members[isolated[0]])))


def _vertex_chunks(n: int, threads: int) -> list[range]:
    size = max(1, math.ceil(n / (threads * 4)))
    return [range(start, min(start + size, n)) for start in range(0, n, size)]


def above_threshold(g: Graph) -> bool:
    """Whether ``delta(G) >= (1 - d*) n`` holds, decided exactly."""
    return Fraction(g.min_degree(), g.n) >= 1 - threshold_exact()


def _b_statistics(blocks: list[BlockResult], g: Graph) -> BStatistics:
    count = sum(block.b_count for block in blocks)
    d = 1 - g.min_degree() / g.n
    reference = d * (1 - 3 * d) / (1 - 2 * d) if d < 0.5 else None
    if count == 0:
        return BStatistics(reference=reference)
    return BStatistics(
        count=count,
        mean=sum(block.b_sum for block in blocks) / count,
        minimum=min(block.b_min for block in blocks),
        maximum=max(block.b_max for block in blocks),
        reference=reference,
    )


@timeit
def decompose(
    g: Graph, mode: NumericMode = NumericMode.FLOAT, threads: int = 1
) -> TriangleWeightReport:
    """Compute the weight of every triangle of ``g``.

    Each triangle weight is the sum of its six ordered weights, added in
    block order, so the report does not depend on ``threads``. Graphs below
    the degree threshold are not rejected; negative weights are reported.
    """
    mode = NumericMode(mode)
    if mode == NumericMode.EXACT and g.n > EXACT_MODE_MAX_N:
        msg = f"exact mode supports n <= {EXACT_MODE_MAX_N}, got n={g.n}"
        raise ExactModeTooLarge(msg)

    weigher = TriangleWeigher(g, mode)
    chunks = _vertex_chunks(g.n, threads)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(weigher.weigh_vertices, chunks))
    else:
        results = [weigher.weigh_vertices(chunk) for chunk in chunks]
    blocks = [block for chunk in results for block in chunk]

    zero = ratio(0, 1, mode)
    weights: dict[tuple[int, int, int], object] = {}
    for block in blocks:
        for x3, weight in zip(block.third, block.weights):
            key = tuple(sorted((block.x1, block.x2, x3)))
            weights[key] = weights.get(key, zero) + weight

    totals: dict[tuple[int, int], object] = {}
    records = []
    min_weight, min_witness = None, None
    for key in sorted(weights):
        weight = weights[key]
        records.append(TriangleWeight(a=key[0], b=key[1], c=key[2], weight=weight))
        if min_weight is None or weight < min_weight:
            min_weight, min_witness = weight, key
        a, b, c = key
        for edge in ((a, b), (a, c), (b, c)):
            totals[edge] = totals.get(edge, zero) + weight

    uncovered = [edge for edge in g.edges() if edge not in totals]
    if uncovered:
        logger.warning("%d edge(s) lie in no triangle, first %s", len(uncovered), uncovered[0])
    summary = ReportSummary(
        n=g.n,
        min_degree=g.min_degree(),
        edge_count=g.edge_count(),
        triangle_count=len(records),
        mode=mode,
        min_weight=min_weight,
        min_witness=min_witness,
        above_threshold=above_threshold(g),
        b_statistics=_b_statistics(blocks, g),
    )
    logger.info(
        "Weighted %d triangles, min weight %s at %s", len(records), min_weight, min_witness
    )
    return TriangleWeightReport(
        summary=summary,
        triangles=records,
        edge_sums=[EdgeSum(u=u, v=v, total=totals[u, v]) for u, v in sorted(totals)],
        uncovered_edges=uncovered,
    )


def verify_edge_sums(
    report: TriangleWeightReport, tolerance: Optional[float] = None
) -> EdgeSumVerdict:
    """Check that every edge lying in a triangle has total weight one.

    Exact reports are checked with zero tolerance.
    """
    if report.uncovered_edges:
        raise UncoverableEdge(report.uncovered_edges[0])
    if report.mode == NumericMode.EXACT:
        tolerance = 0.0
    elif tolerance is None:
        tolerance = DEFAULT_TOLERANCE
    worst_edge, worst_error = None, None
    for record in report.edge_sums:
        error = abs(record.total - 1)
        if worst_error is None or error > worst_error:
            worst_edge, worst_error = (record.u, record.v), error
    if worst_error is None:
        return EdgeSumVerdict(passed=True, tolerance=tolerance)
    return EdgeSumVerdict(
        passed=worst_error <= tolerance,
        tolerance=tolerance,
        worst_edge=worst_edge,
        worst_error=float(worst_error),
    )


def w_fast_ordered(g: Graph, o: OrderedTriangle, mode: NumericMode = NumericMode.FLOAT):
    """Weight of one ordered triangle in cancellation form.

    ``(1/6) (W(x1,x2) - sum_y [W(x1,y,x2) - W(x1,x2,y) + sum_z (W(x1,y,x2,z)
    - W(x1,x2,y,z) + W(x1,y,z,x2) - W(z,y,x1,x2))])`` with ``y`` over the
    common neighbours ``R`` of ``o`` and ``z`` over ``N(y)`` within ``R``.
    """
    if not is_clique(g, o):
        raise NotACliqueError(o)
    x1, x2, x3 = o
    rows = g.rows
    shared = rows[x1] & rows[x2] & rows[x3]

    def weight(*clique):
        return weight_W(g, clique, mode)

    total = weight(x1, x2)
    for y in iter_bits(shared):
        total -= weight(x1, y, x2) - weight(x1, x2, y)
        for z in iter_bits(rows[y] & shared):
            total -= (
                weight(x1, y, x2, z)
                - weight(x1, x2, y, z)
                + weight(x1, y, z, x2)
                - weight(z, y, x1, x2)
            )
    return total / 6


def w1_hat(g: Graph, o: OrderedTriangle, mode: NumericMode = NumericMode.FLOAT):
    """``1 - 6 |K3(G, {x1, x2})| w(o)``, the normalized ordered weight."""
    x1, x2, _ = o
    c2 = (g.rows[x1] & g.rows[x2]).bit_count()
    return 1 - 6 * c2 * w_fast_ordered(g, o, mode)


def _density(g: Graph, vertices, mode: NumericMode):
    bits = (1 << g.n) - 1
    for v in vertices:
        bits &= g.rows[v]
    return ratio(bits.bit_count(), g.n, mode)


def _scaled_weight(g: Graph, clique, mode: NumericMode):
    value = ratio(1, 1, mode)
    for i in range(2, len(clique) + 1):
        value = value / _density(g, clique[:i], mode)
    return value


class PairDensities(NamedTuple):
    """Densities around an ordered triangle, one entry per common neighbour
    ``y`` (``*_y``) or per adjacent pair ``(y, z)`` of them (the rest)."""

    e0: float
    r0: float
    y: np.ndarray
    e_y: np.ndarray
    q0_y: np.ndarray
    r_y: np.ndarray
    pair_index: np.ndarray
    f: np.ndarray
    q: np.ndarray
    p: np.ndarray


def pair_densities(g: Graph, o: OrderedTriangle) -> PairDensities:
    """Float densities of every ``(o, y, z)`` at once, pairs in lexicographic order."""
    if not is_clique(g, o):
        raise NotACliqueError(o)
    x1, x2, x3 = o
    adjacency = g.matrix
    n = g.n
    edge = adjacency[x1] * adjacency[x2]
    shared = np.flatnonzero(edge * adjacency[x3])
    rows = adjacency[shared]
    y_index, z_index = np.nonzero(adjacency[np.ix_(shared, shared)])
    first, second = rows[y_index], rows[z_index]
    return PairDensities(
        e0=float(edge.sum()) / n,
        r0=shared.size / n,
        y=rows.sum(axis=1) / n,
        e_y=rows @ adjacency[x1] / n,
        q0_y=rows @ edge / n,
        r_y=rows @ (edge * adjacency[x3]) / n,
        pair_index=y_index,
        f=(first * second).sum(axis=1) / n,
        q=(first * second) @ adjacency[x1] / n,
        p=(first * second) @ edge / n,
    )


def stack_program_points(g: Graph, o: OrderedTriangle) -> Optional[ProgramPoint]:
    """All level 3 points of ``o`` as one array-valued float point."""
    densities = pair_densities(g, o)
    index = densities.pair_index
    if index.size == 0:
        return None
    return ProgramPoint(
        level=3,
        d=float(degree_gap(g)),
        x=g.degree(o[0]) / g.n,
        y=densities.y[index],
        e0=densities.e0,
        e=densities.e_y[index],
        f=densities.f,
        q0=densities.q0_y[index],
        q=densities.q,
        p=densities.p,
        r0=densities.r0,
        r=densities.r_y[index],
    )


def w1_hat_density(g: Graph, o: OrderedTriangle, mode: NumericMode = NumericMode.FLOAT):
    """Density form of :func:`w1_hat` built from scaled weights
    ``W^(K) = prod 1 / N^(prefix)``."""
    if NumericMode(mode) == NumericMode.FLOAT:
        n = g.n
        dens = pair_densities(g, o)
        e0, e_y, q0_y = dens.e0, dens.e_y, dens.q0_y
        first = (1.0 / (e_y * q0_y) - 1.0 / (e0 * q0_y)).sum()
        e, q0 = e_y[dens.pair_index], q0_y[dens.pair_index]
        second = (
            1.0 / (e * q0 * dens.p)
            - 1.0 / (e0 * q0 * dens.p)
            + 1.0 / (e * dens.q * dens.p)
            - 1.0 / (dens.f * dens.q * dens.p)
        ).sum()
        return float(e0 * (first / n + second / (n * n)))
    if not is_clique(g, o):
        raise NotACliqueError(o)
    x1, x2, x3 = o
    rows = g.rows
    n = g.n
    shared = rows[x1] & rows[x2] & rows[x3]

    def scaled(*clique):
        return _scaled_weight(g, clique, mode)

    first = ratio(0, 1, mode)
    second = ratio(0, 1, mode)
    for y in iter_bits(shared):
        first += scaled(x1, y, x2) - scaled(x1, x2, y)
        for z in iter_bits(rows[y] & shared):
            second += (
                scaled(x1, y, x2, z)
                - scaled(x1, x2, y, z)
                + scaled(x1, y, z, x2)
                - scaled(z, y, x1, x2)
            )
    return _density(g, (x1, x2), mode) * (first / n + second / (n * n))


def degree_gap(g: Graph, mode: NumericMode = NumericMode.FLOAT):
    """``d = 1 - delta(G) / n``."""
    return 1 - ratio(g.min_degree(), g.n, mode)


def extract_program_point(
    g: Graph, o: OrderedTriangle, y: int, z: int, mode: NumericMode = NumericMode.FLOAT
) -> ProgramPoint:
    """Level 3 point of the densities around ``(o, y, z)``.

    ``y`` must be a common neighbour of ``o`` and ``z`` a neighbour of
    ``y`` among the common neighbours.
    """
    x1, x2, x3 = o
    if not is_clique(g, (x1, x2, x3, y, z)):
        raise NotACliqueError((x1, x2, x3, y, z))

    def density(*vertices):
        return _density(g, vertices, mode)

    return ProgramPoint(
        level=3,
        d=degree_gap(g, mode),
        x=density(x1),
        y=density(y),
        e0=density(x1, x2),
        e=density(x1, y),
        f=density(y, z),
        q0=density(x1, x2, y),
        q=density(x1, y, z),
        p=density(x1, x2, y, z),
        r0=density(x1, x2, x3),
        r=density(x1, x2, x3, y),
    )


def iter_program_points(
    g: Graph, o: OrderedTriangle, mode: NumericMode = NumericMode.FLOAT
) -> Iterator[ProgramPoint]:
    """Every level 3 point ``(o, y, z)`` of ``o`` in lexicographic order."""
    rows = g.rows
    x1, x2, x3 = o
    shared = rows[x1] & rows[x2] & rows[x3]
    for y in iter_bits(shared):
        for z in iter_bits(rows[y] & shared):
            yield extract_program_point(g, o, y, z, mode)


def extract_vector_point(
    g: Graph, o: OrderedTriangle, mode: NumericMode = NumericMode.FLOAT
) -> ProgramPoint:
    """Level 1 point of ``o``: one index per common neighbour ``y`` and one
    sub-index per neighbour ``z`` of ``y`` among them."""
    if not is_clique(g, o):
        raise NotACliqueError(o)
    rows = g.rows
    x1, x2, x3 = o
    shared = rows[x1] & rows[x2] & rows[x3]
    if shared.bit_count() > VECTOR_MAX_LEVEL_SIZE:
        raise DomainError(f"r0_count <= {VECTOR_MAX_LEVEL_SIZE}")

    def density(*vertices):
        return _density(g, vertices, mode)

    y_vec, e_vec, q0_vec, f_vec, q_vec, p_vec, r_counts = [], [], [], [], [], [], []
    for y in iter_bits(shared):
        others = list(iter_bits(rows[y] & shared))
        if len(others) > VECTOR_MAX_LEVEL_SIZE:
            raise DomainError(f"r_counts[{len(y_vec)}] <= {VECTOR_MAX_LEVEL_SIZE}")
        y_vec.append(density(y))
        e_vec.append(density(x1, y))
        q0_vec.append(density(x1, x2, y))
        f_vec.append(tuple(density(y, z) for z in others))
        q_vec.append(tuple(density(x1, y, z) for z in others))
        p_vec.append(tuple(density(x1, x2, y, z) for z in others))
        r_counts.append(len(others))
    return ProgramPoint(
        level=1,
        d=degree_gap(g, mode),
        x=density(x1),
        e0=density(x1, x2),
        v_count=g.n,
        r0_count=len(y_vec),
        r_counts=tuple(r_counts),
        y_vec=tuple(y_vec),
        e_vec=tuple(e_vec),
        q0_vec=tuple(q0_vec),
        f_vec=tuple(f_vec),
        q_vec=tuple(q_vec),
        p_vec=tuple(p_vec),
    )
