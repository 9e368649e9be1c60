import pytest

from errors import ContractViolation
from numerics import RandomStream
from topology import (
    EsGraph,
    audit_graph,
    bfs_distances,
    diameter,
    export_edges,
    import_edges,
    is_connected,
    path_graph,
    random_connected_graph,
    ring_graph,
)


@pytest.mark.parametrize("M", range(2, 13))
@pytest.mark.parametrize("seed", range(5))
def test_random_graph_is_connected_and_bounded(M, seed):
    graph = random_connected_graph(M, 3, RandomStream(seed))
    audit_graph(graph, 3)
    assert all(1 <= graph.degree(m) <= 3 for m in range(M))


def test_random_graph_is_deterministic():
    a = random_connected_graph(8, 3, RandomStream(4))
    b = random_connected_graph(8, 3, RandomStream(4))
    assert a == b


def test_single_node_has_self_loop():
    graph = random_connected_graph(1, 3, RandomStream(0))
    assert graph.neighbors(0) == (0,)


def test_degree_bound_too_small():
    with pytest.raises(ContractViolation):
        random_connected_graph(5, 1, RandomStream(0))


def test_ring_and_path_shapes():
    ring = ring_graph(5)
    assert ring.neighbors(0) == (1, 4)
    assert diameter(ring) == 2
    path = path_graph(4)
    assert bfs_distances(path, 0) == [0, 1, 2, 3]
    with pytest.raises(ContractViolation):
        ring_graph(2)


def test_audit_rejects_disconnected_graph():
    graph = EsGraph.from_edges(4, [(0, 1), (2, 3)])
    assert not is_connected(graph)
    with pytest.raises(ContractViolation, match="disconnected"):
        audit_graph(graph)


def test_edges_out_of_range():
    with pytest.raises(ContractViolation):
        EsGraph.from_edges(2, [(0, 2)])


def test_edge_file_round_trip(tmp_path):
    graph = random_connected_graph(7, 3, RandomStream(2))
    export_edges(graph, tmp_path / "edges.txt")
    assert import_edges(tmp_path / "edges.txt") == graph
