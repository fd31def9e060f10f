"""This module enumerates triangles and counts clique extensions."""

from itertools import combinations, permutations
from typing import Iterable, Iterator, NamedTuple

from tridecomp.exceptions import NotACliqueError
from tridecomp.graph import Graph, VertexSet, common_neighbors, iter_bits


class Triangle(NamedTuple):
    """Unordered triangle stored with ``a < b < c``."""

    a: int
    b: int
    c: int

    def edges(self) -> tuple[tuple[int, int], ...]:
        return ((self.a, self.b), (self.a, self.c), (self.b, self.c))


class OrderedTriangle(NamedTuple):
    """Triangle with significant vertex order."""

    x1: int
    x2: int
    x3: int

    def triangle(self) -> Triangle:
        return Triangle(*sorted(self))


def orderings(t: Triangle) -> tuple[OrderedTriangle, ...]:
    """All six orderings of ``t`` in lexicographic permutation order."""
    return tuple(OrderedTriangle(*o) for o in permutations(t))


def is_clique(g: Graph, vertices: Iterable[int]) -> bool:
    vertices = tuple(vertices)
    if len(set(vertices)) != len(vertices):
        return False
    return all(g.has_edge(u, v) for u, v in combinations(vertices, 2))


def enumerate_triangles(g: Graph) -> Iterator[Triangle]:
    """Yield every triangle once, in lexicographic order."""
    rows = g.rows
    for a in range(g.n):
        higher_a = rows[a] >> (a + 1) << (a + 1)
        for b in iter_bits(higher_a):
            for c in iter_bits(higher_a & rows[b] >> (b + 1) << (b + 1)):
                yield Triangle(a, b, c)


def triangle_count(g: Graph) -> int:
    return sum(1 for _ in enumerate_triangles(g))


def extension_count(g: Graph, s: VertexSet) -> int:
    """Number of cliques on ``|s| + 1`` vertices containing the clique ``s``."""
    vertices = s.to_list()
    if not is_clique(g, vertices):
        raise NotACliqueError(vertices)
    return len(common_neighbors(g, s))


def ordered_five_cliques_containing(
    g: Graph, o: OrderedTriangle
) -> Iterator[tuple[int, int, int, int, int]]:
    """Yield ordered 5-cliques having ``o`` as a (not necessarily
    consecutive) subsequence, each once, in lexicographic order."""
    if not is_clique(g, o):
        raise NotACliqueError(o)
    rows = g.rows
    common = rows[o.x1] & rows[o.x2] & rows[o.x3]
    found = []
    for y in iter_bits(common):
        for z in iter_bits(common & rows[y] >> (y + 1) << (y + 1)):
            for extras in ((y, z), (z, y)):
                for slots in combinations(range(5), 2):
                    tuple_ = [0] * 5
                    fixed = iter(o)
                    spare = iter(extras)
                    for position in range(5):
                        tuple_[position] = next(spare) if position in slots else next(fixed)
                    found.append(tuple(tuple_))
    found.sort()
    yield from found
