"""Shared graphs for the test suite."""

import pytest

from tridecomp.generators import (
    BlowupMode,
    gen_blowup,
    gen_complete,
    gen_cycle,
    gen_gnp_min_degree,
    gen_join_regular,
)
from tridecomp.graph import dump_edge_list


@pytest.fixture
def k5():
    return gen_complete(5)


@pytest.fixture(scope="session")
def join_k1():
    return gen_join_regular(1)


@pytest.fixture
def c4():
    return gen_cycle(4)


@pytest.fixture
def four_partite():
    """K_{2,2,2,2}: every triangle extends, but no K4 extends to a K5."""
    return gen_blowup(gen_complete(4), 2, BlowupMode.INDEPENDENT)


@pytest.fixture(params=[3, 5, 11])
def dense_n9(request):
    """Nine vertices with minimum degree 7, so every clique extends."""
    return gen_gnp_min_degree(9, 0.9, 7, seed=request.param)


@pytest.fixture(scope="session")
def dense_n60():
    """Sixty vertices above the degree threshold."""
    return gen_gnp_min_degree(60, 0.95, 50, seed=7)


@pytest.fixture
def write_graph(tmp_path):
    """Write a graph as an edge list and return the path."""

    def write(graph, name="graph.txt"):
        path = tmp_path / name
        path.write_text(dump_edge_list(graph), encoding="utf-8")
        return path

    return write
