"""This module contains generators for complete graphs, the tightness
construction, blow-ups of small graphs and seeded random graphs."""

from enum import Enum
import logging

import networkx as nx
import numpy as np

from tridecomp.constants import MAX_GNP_ATTEMPTS, MAX_JOIN_K
from tridecomp.exceptions import (
    EmptyGraphError,
    GenerationTimeout,
    GeneratorParameterError,
)
from tridecomp.graph import Graph
from tridecomp.util import timeit

logger = logging.getLogger(__name__)


class BlowupMode(str, Enum):
    """Interface for blow-up mode enumerator."""

    CLIQUE = "clique"
    INDEPENDENT = "independent"


def gen_complete(n: int) -> Graph:
    """Complete graph ``K_n``."""
    if n < 1:
        raise EmptyGraphError(f"complete graph needs n >= 1, got {n=}")
    return Graph.from_networkx(nx.complete_graph(n))


def gen_cycle(n: int) -> Graph:
    """Cycle ``C_n`` on vertices ``0, 1, ..., n-1`` in cyclic order."""
    if n < 3:
        msg = f"cycle needs n >= 3, got {n=}"
        raise GeneratorParameterError(msg)
    return Graph.from_networkx(nx.cycle_graph(n))


def gen_join_regular(k: int, seed: int = 0) -> Graph:
    """Complete join of two ``(6k+2)``-regular circulants on ``12k+6`` vertices.

    The result has ``n = 24k + 12`` vertices and minimum degree
    ``18k + 8 = 3n/4 - 1``. Vertices ``0..12k+5`` form the first side.
    The construction is deterministic and ignores ``seed``.
    """
    if k < 1:
        msg = f"join construction needs k >= 1, got {k=}"
        raise GeneratorParameterError(msg)
    if k > MAX_JOIN_K:
        msg = f"{k=} exceeds the supported maximum {MAX_JOIN_K}"
        raise GeneratorParameterError(msg)
    side = 12 * k + 6
    offsets = range(1, 3 * k + 2)
    first = nx.circulant_graph(side, offsets)
    second = nx.circulant_graph(side, offsets)
    joined = nx.full_join(first, second, rename=("a", "b"))
    # "a<i>" sorts before "b<i>" but "a10" sorts before "a2"; number explicitly.
    mapping = {f"a{i}": i for i in range(side)}
    mapping.update({f"b{i}": side + i for i in range(side)})
    joined = nx.relabel_nodes(joined, mapping)
    logger.debug("Join construction k=%d has %d vertices", k, 2 * side)
    return Graph.from_networkx(joined)


def gen_blowup(base: Graph, part_size: int, mode: BlowupMode = BlowupMode.CLIQUE) -> Graph:
    """Replace each base vertex by ``part_size`` vertices.

    Parts of adjacent base vertices are completely joined; inside a part
    there are edges iff ``mode`` is ``clique``. Vertex ``i * part_size + j``
    is the ``j``-th copy of base vertex ``i``.
    """
    if part_size < 1:
        msg = f"blow-up needs part_size >= 1, got {part_size=}"
        raise GeneratorParameterError(msg)
    mode = BlowupMode(mode)
    if mode == BlowupMode.CLIQUE:
        inner = nx.complete_graph(part_size)
    else:
        inner = nx.empty_graph(part_size)
    product = nx.lexicographic_product(base.to_networkx(), inner)
    return Graph.from_networkx(product)


@timeit
def gen_gnp_min_degree(n: int, p: float, delta_min: int, seed: int) -> Graph:
    """Sample ``G(n, p)`` conditioned on ``delta(G) >= delta_min`` by rejection.

    All draws come from one numpy generator seeded with ``seed``, so the
    result is a deterministic function of the arguments.
    """
    if n < 1:
        raise EmptyGraphError(f"random graph needs n >= 1, got {n=}")
    if not 0.0 <= p <= 1.0:
        msg = f"edge probability {p=} outside [0, 1]"
        raise GeneratorParameterError(msg)
    if delta_min > n - 1:
        msg = f"{delta_min=} exceeds n - 1 = {n - 1}"
        raise GeneratorParameterError(msg)

    rng = np.random.default_rng(seed)
    for attempt in range(1, MAX_GNP_ATTEMPTS + 1):
        sample = nx.gnp_random_graph(n, p, seed=rng)
        degrees = [deg for _, deg in sample.degree]
        if min(degrees) >= delta_min:
            logger.debug("G(%d, %s) accepted after %d attempt(s)", n, p, attempt)
            return Graph.from_networkx(sample)
    raise GenerationTimeout(MAX_GNP_ATTEMPTS)
