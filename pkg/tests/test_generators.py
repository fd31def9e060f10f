"""Test module for graph generators."""

import pytest

from tridecomp.exceptions import EmptyGraphError, GenerationTimeout, GeneratorParameterError
from tridecomp.generators import (
    BlowupMode,
    gen_blowup,
    gen_complete,
    gen_cycle,
    gen_gnp_min_degree,
    gen_join_regular,
)


@pytest.mark.parametrize("n, edges", [(1, 0), (3, 3), (5, 10), (8, 28)])
def test_complete(n, edges):
    """Test complete graphs have every pair as an edge."""
    graph = gen_complete(n)
    assert graph.edge_count() == edges
    assert graph.min_degree() == n - 1


def test_complete_needs_vertices():
    """Test K_0 is refused."""
    with pytest.raises(EmptyGraphError):
        gen_complete(0)


def test_cycle():
    """Test the cycle is 2-regular in cyclic order."""
    graph = gen_cycle(4)
    assert list(graph.edges()) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    with pytest.raises(GeneratorParameterError):
        gen_cycle(2)


def test_join_construction():
    """Test the join at k = 1 has n = 36, minimum degree 26 and 468 edges."""
    graph = gen_join_regular(1)
    assert graph.n == 36
    assert graph.min_degree() == 26
    assert graph.edge_count() == 18 * 18 + 2 * (18 * 8 // 2)
    assert all(graph.has_edge(u, v) for u in range(18) for v in range(18, 36))


def test_join_parameters():
    """Test out of range join sizes are refused."""
    with pytest.raises(GeneratorParameterError):
        gen_join_regular(0)


def test_join_ignores_seed():
    """Test the join construction is the same graph for every seed."""
    assert gen_join_regular(1, seed=7) == gen_join_regular(1) == gen_join_regular(1, seed=2**63)


def test_clique_blowup_of_c4():
    """Test blowing up C4 with cliques of size t gives minimum degree 3t - 1."""
    graph = gen_blowup(gen_cycle(4), 5, BlowupMode.CLIQUE)
    assert graph.n == 20
    assert graph.min_degree() == 14
    assert graph.has_edge(0, 1)
    assert not graph.has_edge(0, 10)


def test_independent_blowup_of_k4():
    """Test blowing up K4 with independent parts gives a complete 4-partite graph."""
    graph = gen_blowup(gen_complete(4), 3, BlowupMode.INDEPENDENT)
    assert graph.n == 12
    assert graph.min_degree() == 9
    assert graph.edge_count() == 6 * 9
    assert not graph.has_edge(0, 1)


def test_blowup_parameters():
    """Test empty parts are refused."""
    with pytest.raises(GeneratorParameterError):
        gen_blowup(gen_cycle(4), 0)


def test_gnp_is_seeded():
    """Test the random graph meets its minimum degree and depends only on the seed."""
    first = gen_gnp_min_degree(20, 0.9, 15, seed=3)
    assert first.min_degree() >= 15
    assert first == gen_gnp_min_degree(20, 0.9, 15, seed=3)


@pytest.mark.parametrize("n, p, delta_min", [(10, 1.5, 0), (10, 0.5, 10)])
def test_gnp_parameters(n, p, delta_min):
    """Test probabilities outside [0, 1] and unreachable degrees are refused."""
    with pytest.raises(GeneratorParameterError):
        gen_gnp_min_degree(n, p, delta_min, seed=0)


def test_gnp_gives_up():
    """Test rejection sampling stops when no graph can qualify."""
    with pytest.raises(GenerationTimeout):
        gen_gnp_min_degree(10, 0.0, 1, seed=0)
