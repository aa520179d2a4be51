import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import simulate_lpa

from cnplace.community import (
    CommunityError,
    communities_document,
    communities_from_document,
    communities_from_sets,
    find_communities,
    group_by_labels,
    propagate_labels,
    random_partition,
)
from cnplace.generators import clique_bridge, complete, gnp
from cnplace.graph import NetworkGraph

edge_lists = st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), max_size=40)


def test_isolated_node():
    s = propagate_labels(NetworkGraph.from_edges([], nodes=[5]))
    assert s.labels == {5: 5} and s.iteration == 1 and not s.changed


def test_triangle_superstep_by_superstep():
    g = NetworkGraph.from_edges([(1, 2), (2, 3), (1, 3)])
    assert propagate_labels(g, max_iters=1).labels == {1: 3, 2: 3, 3: 2}
    s = propagate_labels(g)
    assert s.labels == {1: 3, 2: 3, 3: 3}
    # superstep 3 sees no change and stops the run
    assert s.iteration == 3 and not s.changed


def test_two_four_cliques():
    g = clique_bridge(4)
    s = propagate_labels(g)
    assert len(set(s.labels.values())) == 2
    assert len({s.labels[v] for v in range(4)}) == 1
    assert len({s.labels[v] for v in range(4, 8)}) == 1


def test_max_iters_validated():
    with pytest.raises(ValueError):
        propagate_labels(complete(3), max_iters=0)


def test_bipartite_oscillation_capped():
    # synchronous updates swap the two sides of K2 forever
    g = NetworkGraph.from_edges([(0, 1)])
    s = propagate_labels(g, max_iters=7)
    assert s.iteration == 7 and s.changed
    assert s.labels == {0: 1, 1: 0}
    assert propagate_labels(g, max_iters=8).labels == {0: 0, 1: 1}


@given(edge_lists, st.integers(1, 10))
@settings(max_examples=80)
def test_matches_reference_simulation(edges, cap):
    g = NetworkGraph.from_edges(edges)
    s = propagate_labels(g, cap)
    labels, steps = simulate_lpa({v: set(g.adj[v]) for v in g.nodes}, cap)
    assert s.labels == labels
    assert s.iteration == steps <= cap


@given(edge_lists)
@settings(max_examples=60)
def test_labels_come_from_own_component(edges):
    g = NetworkGraph.from_edges(edges)
    s = propagate_labels(g)
    for v, lab in s.labels.items():
        assert lab in g.bfs_distances(v)


@given(edge_lists)
@settings(max_examples=60)
def test_grouping_partitions(edges):
    g = NetworkGraph.from_edges(edges)
    comms, _ = find_communities(g)
    members = [c.members for c in comms]
    assert sum(len(m) for m in members) == g.n
    assert set().union(*members) == set(g.nodes) if members else True
    for c in comms:
        assert c.subgraph == g.subgraph(c.members)


def test_group_examples():
    tri = complete(3, offset=1)
    assert [c.size for c in group_by_labels(tri, {1: 3, 2: 3, 3: 3})] == [3]
    iso = NetworkGraph.from_edges([], nodes=[1, 2])
    assert [c.members for c in group_by_labels(iso, {1: 1, 2: 2})] == [{1}, {2}]
    with pytest.raises(CommunityError):
        group_by_labels(tri, {1: 1, 2: 1})


def test_clique_bridge_communities():
    comms, _ = find_communities(clique_bridge(5))
    assert sorted(sorted(c.members) for c in comms) == [list(range(5)), list(range(5, 10))]


def test_determinism():
    g = gnp(60, 0.08, seed=3)
    assert propagate_labels(g) == propagate_labels(g)


def test_from_sets_validation():
    g = complete(4)
    with pytest.raises(CommunityError):
        communities_from_sets(g, [[0, 1], [1, 2, 3]])
    with pytest.raises(CommunityError):
        communities_from_sets(g, [[0, 1]])
    cs = communities_from_sets(g, [[2, 3], [0, 1]])
    assert [c.label for c in cs] == [0, 2]


def test_random_partition_sizes_and_seed():
    g = gnp(30, 0.2, seed=1)
    a = random_partition(g, [10, 15, 5], seed=4)
    b = random_partition(g, [10, 15, 5], seed=4)
    assert a == b
    assert sorted(c.size for c in a) == [5, 10, 15]
    with pytest.raises(CommunityError):
        random_partition(g, [10, 10], seed=4)


def test_document_round_trip():
    g = clique_bridge(3)
    comms, _ = find_communities(g)
    doc = communities_document(g, comms)
    back = communities_from_document(g, {"communities": doc})
    assert [(c.label, c.members) for c in back] == [(c.label, c.members) for c in comms]


def test_document_unknown_members():
    g = complete(3)
    doc = [{"label": 0, "members": ["0", "1", "2", "ghost"]}]
    with pytest.raises(CommunityError):
        communities_from_document(g, doc)
    assert communities_from_document(g, doc, ignore_unknown=True)[0].size == 3
