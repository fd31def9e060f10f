"""This module contains the bitset graph representation, edge-list
ingestion and common-neighbour density primitives."""

from dataclasses import dataclass
from fractions import Fraction
import logging
from pathlib import Path
from typing import IO, Iterable, Iterator, NamedTuple

import networkx as nx
import numpy as np

from tridecomp.exceptions import EmptyGraphError, LoopEdgeError, ParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class VertexSet:
    """Fixed-width bit vector over the vertices of a graph.

    Bit ``i`` of ``bits`` is set iff vertex ``i`` belongs to the set.
    """

    bits: int
    width: int

    @classmethod
    def from_vertices(cls, vertices: Iterable[int], width: int) -> "VertexSet":
        bits = 0
        for v in vertices:
            if not 0 <= v < width:
                msg = f"vertex {v} out of range for width {width}"
                raise ValueError(msg)
            bits |= 1 << v
        return cls(bits, width)

    @classmethod
    def full(cls, width: int) -> "VertexSet":
        return cls((1 << width) - 1, width)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __contains__(self, v: int) -> bool:
        return bool(self.bits >> v & 1)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & other.bits, self.width)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits | other.bits, self.width)

    def to_list(self) -> list[int]:
        return list(iter_bits(self.bits))


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


class Graph:
    """Immutable simple graph with one adjacency bitset per vertex.

    Rows are Python integers, so intersections of neighbourhoods are a
    single ``&`` and their sizes a ``bit_count``.
    """

    __slots__ = ("_n", "_rows", "_matrix")

    def __init__(self, n: int, rows: Iterable[int]):
        rows = tuple(rows)
        if n < 1:
            raise EmptyGraphError("a graph needs at least one vertex")
        if len(rows) != n:
            msg = f"expected {n} adjacency rows, got {len(rows)}"
            raise ValueError(msg)
        limit = 1 << n
        for v, row in enumerate(rows):
            if row < 0 or row >= limit:
                msg = f"row {v} has bits outside the vertex range"
                raise ValueError(msg)
            if row >> v & 1:
                msg = f"vertex {v} has a loop"
                raise ValueError(msg)
        for v, row in enumerate(rows):
            for u in iter_bits(row):
                if not rows[u] >> v & 1:
                    msg = f"adjacency is not symmetric on edge ({v}, {u})"
                    raise ValueError(msg)
        self._n = n
        self._rows = rows
        self._matrix = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """Build a graph from networkx, numbering nodes in sorted order."""
        nodes = sorted(graph.nodes)
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in graph.edges))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self._n))
        graph.add_edges_from(self.edges())
        return graph

    @property
    def n(self) -> int:
        return self._n

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def adj(self) -> tuple[VertexSet, ...]:
        return tuple(VertexSet(row, self._n) for row in self._rows)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self._rows[v], self._n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self._rows[v].bit_count()

    def min_degree(self) -> int:
        return min(row.bit_count() for row in self._rows)

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self._rows) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, row in enumerate(self._rows):
            yield from ((u, v) for v in iter_bits(row >> (u + 1) << (u + 1)))

    def vertex_set(self, vertices: Iterable[int]) -> VertexSet:
        return VertexSet.from_vertices(vertices, self._n)

    @property
    def matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix as float64, built on first use."""
        if self._matrix is None:
            matrix = np.zeros((self._n, self._n), dtype=np.float64)
            for u, v in self.edges():
                matrix[u, v] = matrix[v, u] = 1.0
            matrix.setflags(write=False)
            self._matrix = matrix
        return self._matrix

    def __getstate__(self):
        return (self._n, self._rows)

    def __setstate__(self, state):
        self._n, self._rows = state
        self._matrix = None

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._rows == other._rows

    def __hash__(self):
        return hash((self._n, self._rows))

    def __repr__(self):
        return f"Graph(n={self._n}, edges={self.edge_count()})"


class Density(NamedTuple):
    """Common neighbour density ``count / total`` of a vertex set."""

    count: int
    total: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.count, self.total)

    def __float__(self) -> float:
        return self.count / self.total


def _parse_int(token: str, line_number: int, line: str) -> int:
    try:
        value = int(token)
    except ValueError as exc:
        raise ParseError(line_number, line) from exc
    if value < 0:
        raise ParseError(line_number, line, "negative vertex index")
    return value


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line_number = data.count(b"\n", 0, exc.start) + 1
        line = data.split(b"\n")[line_number - 1].decode("utf-8", errors="replace")
        raise ParseError(line_number, line, "invalid utf-8") from exc


def load_edge_list(stream: IO[bytes] | bytes | str) -> Graph:
    """Parse an edge list into a graph.

    Lines starting with ``#`` and blank lines are skipped, an optional
    ``n <count>`` header fixes the vertex count (otherwise the largest index
    plus one), and duplicate edges collapse.
    """
    if isinstance(stream, bytes):
        text = _decode(stream)
    elif isinstance(stream, str):
        text = stream
    else:
        text = _decode(stream.read())

    declared_n = None
    edges: list[tuple[int, int]] = []
    edge_lines: list[int] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(line_number, raw)
        if tokens[0] == "n":
            if declared_n is not None:
                raise ParseError(line_number, raw, "duplicate header")
            declared_n = _parse_int(tokens[1], line_number, raw)
            continue
        u = _parse_int(tokens[0], line_number, raw)
        v = _parse_int(tokens[1], line_number, raw)
        if u == v:
            raise LoopEdgeError(line_number, u)
        edges.append((u, v))
        edge_lines.append(line_number)

    inferred_n = max((max(edge) for edge in edges), default=-1) + 1
    n = declared_n if declared_n is not None else inferred_n
    if n < 1:
        raise EmptyGraphError("edge list describes no vertices")
    for (u, v), line_number in zip(edges, edge_lines):
        if max(u, v) >= n:
            raise ParseError(line_number, f"{u} {v}", f"vertex index not below n={n}")
    graph = Graph.from_edges(n, edges)
    logger.debug("Loaded %s from %d edge lines", graph, len(edges))
    return graph


def read_edge_list(path: Path) -> Graph:
    """Read an edge-list file from disk."""
    with open(path, "rb") as stream:
        return load_edge_list(stream)


def dump_edge_list(graph: Graph) -> str:
    """Serialize a graph as ``n <count>`` followed by sorted ``u v`` lines."""
    lines = [f"n {graph.n}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def common_neighbors(g: Graph, s: VertexSet) -> VertexSet:
    """Return the vertices adjacent to every vertex of ``s``.

    The empty set has every vertex as a common neighbour.
    """
    bits = (1 << g.n) - 1
    rows = g.rows
    for v in iter_bits(s.bits):
        bits &= rows[v]
    return VertexSet(bits, g.n)


def nhat(g: Graph, s: VertexSet) -> Density:
    """Common neighbour density of ``s`` as a fraction of ``v(G)``."""
    return Density(len(common_neighbors(g, s)), g.n)
