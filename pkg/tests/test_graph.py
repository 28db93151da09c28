import networkx as nx
import pytest
from hypothesis import given, settings

from spanexcess.errors import GraphError, ScopeError
from spanexcess.graph import (Graph, VertexSet, complete_graph, components_after_deletion, cycle_graph,
                              disjoint_union, empty_graph, is_connected, is_isomorphic, join, path_graph, star)

from conftest import graphs


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def test_vertex_set_roundtrip():
    S = VertexSet.of([4, 0, 2])
    assert list(S) == [0, 2, 4]
    assert len(S) == 3 and 2 in S and 1 not in S


def test_graph_rejects_loops_and_asymmetry():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0))


def test_basic_constructors():
    assert complete_graph(5).num_edges == 10
    assert empty_graph(4).num_edges == 0
    assert star(6).degrees == (6, 1, 1, 1, 1, 1, 1)
    assert path_graph(4).num_edges == 3
    assert cycle_graph(5).degrees == (2,) * 5
    g = join(complete_graph(2), empty_graph(3))
    assert g.n == 5 and g.num_edges == 1 + 6
    assert disjoint_union(complete_graph(2), complete_graph(3)).num_edges == 4


def test_matrix_symmetric_zero_diagonal():
    a = join(complete_graph(2), cycle_graph(4)).matrix
    assert (a == a.T).all() and (a.diagonal() == 0).all()


def test_components_after_deletion_star():
    c, comps = components_after_deletion(star(6), [0])
    assert c == 6 and all(len(x) == 1 for x in comps)


def test_components_after_deletion_everything_raises():
    with pytest.raises(GraphError):
        components_after_deletion(complete_graph(3), [0, 1, 2])


def test_is_connected_empty_graph_raises():
    with pytest.raises(GraphError):
        is_connected(Graph.from_edges(0, []))


def test_masks_scope():
    with pytest.raises(ScopeError):
        empty_graph(63).masks()


def test_isomorphism_scope():
    with pytest.raises(ScopeError):
        is_isomorphic(empty_graph(10), empty_graph(10))


def test_relabel_is_isomorphic():
    g = join(complete_graph(1), disjoint_union(complete_graph(3), empty_graph(3)))
    h = g.relabel([6, 5, 4, 3, 2, 1, 0])
    assert is_isomorphic(g, h)
    assert not is_isomorphic(g, g.remove_edge(1, 2))


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=9))
def test_components_match_networkx(g):
    if g.n == 0:
        return
    c, comps = components_after_deletion(g)
    assert c == nx.number_connected_components(to_nx(g))
    assert sorted(len(x) for x in comps) == sorted(len(x) for x in nx.connected_components(to_nx(g)))


@settings(max_examples=120, deadline=None)
@given(graphs(max_n=7), graphs(max_n=7))
def test_isomorphism_matches_networkx(g, h):
    assert is_isomorphic(g, h) == nx.is_isomorphic(to_nx(g), to_nx(h))


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=8))
def test_isomorphic_to_random_relabelling(g):
    perm = list(reversed(range(g.n)))
    assert is_isomorphic(g, g.relabel(perm))
