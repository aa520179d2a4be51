import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cnplace.graph import MEDIUM, STRONG, WEAK
from cnplace.snapshot import (
    SnapshotParseError,
    SnapshotSchemaError,
    graph_from_document,
    parse_snapshot,
    read_snapshot,
    snapshot_document,
)


def node(i, **kw):
    d = {"id": str(i), "working": True, "is_server": False, "device_count": 1}
    d.update(kw)
    return d


def link(a, b, **kw):
    d = {"a": str(a), "b": str(b), "working": True}
    d.update(kw)
    return d


def test_minimal_document():
    g = graph_from_document({"nodes": [node("a"), node("b")], "links": [link("a", "b")]})
    assert (g.n, g.m) == (2, 1)
    assert [g.name(v) for v in g.nodes] == ["a", "b"]


def test_non_working_node_dropped(fixtures_dir):
    g = read_snapshot(fixtures_dir / "nonworking.json")
    assert (g.n, g.m) == (2, 1)
    assert sorted(g.name(v) for v in g.nodes) == ["A", "B"]


def test_non_working_link_dropped():
    g = graph_from_document({"nodes": [node(1), node(2)], "links": [link(1, 2, working=False)]})
    assert (g.n, g.m) == (2, 0)


def test_empty_node_list():
    g = parse_snapshot(b'{"nodes": [], "links": []}')
    assert (g.n, g.m) == (0, 0)


def test_malformed_has_position(fixtures_dir):
    with pytest.raises(SnapshotParseError, match="line"):
        read_snapshot(fixtures_dir / "malformed.json")


def test_duplicate_id():
    with pytest.raises(SnapshotSchemaError, match="duplicate"):
        graph_from_document({"nodes": [node(1), node(1)], "links": []})


def test_unknown_endpoint():
    with pytest.raises(SnapshotSchemaError, match="unknown"):
        graph_from_document({"nodes": [node(1)], "links": [link(1, 9)]})


@pytest.mark.parametrize("bad, where", [
    ({"device_count": 0}, "device_count"),
    ({"device_count": "2"}, "device_count"),
    ({"availability_pct": 120}, "availability_pct"),
    ({"is_server": "yes"}, "is_server"),
])
def test_field_errors_name_the_field(bad, where):
    with pytest.raises(SnapshotSchemaError, match=where):
        graph_from_document({"nodes": [node(1, **bad)], "links": []})


def test_missing_field():
    n = node(1)
    del n["device_count"]
    with pytest.raises(SnapshotSchemaError, match=r"nodes\[0\]\.device_count"):
        graph_from_document({"nodes": [n], "links": []})


def test_availability_normalised_and_classes():
    g = graph_from_document({"nodes": [
        node("s", is_server=True, availability_pct=95, latency_ms=3.5),
        node("m", device_count=3),
        node("w"),
    ], "links": []})
    s, m, w = g.nodes
    assert g.attrs[s].availability == pytest.approx(0.95)
    assert g.attrs[s].latency_ms == 3.5
    assert [g.attrs[v].comp_class for v in (s, m, w)] == [STRONG, MEDIUM, WEAK]


def test_multilinks_merge():
    g = graph_from_document({"nodes": [node(1), node(2)], "links": [
        link(1, 2, bandwidth_mbps=10, rtt_ms=4),
        link(2, 1, bandwidth_mbps=30, rtt_ms=9),
        link(1, 2, rtt_ms=2),
    ]})
    assert g.m == 1
    e = g.edge(*g.edges()[0])
    assert (e.bandwidth_mbps, e.rtt_ms) == (30, 2)


def test_self_link_ignored():
    g = graph_from_document({"nodes": [node(1)], "links": [link(1, 1)]})
    assert g.m == 0


def test_csv(fixtures_dir):
    g = read_snapshot(fixtures_dir / "triangle.csv")
    assert (g.n, g.m) == (3, 3)


def test_csv_measurements_and_flags():
    g = parse_snapshot("a,b,working,bandwidth_mbps,rtt_ms\nx,y,1,5.5,\ny,z,0,,\n", "csv")
    assert (g.n, g.m) == (3, 1)
    e = g.edge(*g.edges()[0])
    assert e.bandwidth_mbps == 5.5 and e.rtt_ms is None


@pytest.mark.parametrize("text, err", [
    ("x,y\n1,2\n", SnapshotSchemaError),
    ("a,b,rtt_ms\n1,2,fast\n", SnapshotParseError),
    ("a,b,working\n1,2,maybe\n", SnapshotParseError),
])
def test_csv_errors(text, err):
    with pytest.raises(err):
        parse_snapshot(text, "csv")


def test_unknown_format():
    with pytest.raises(ValueError):
        parse_snapshot(b"{}", "xml")


docs = st.integers(1, 12).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.booleans(), min_size=n, max_size=n),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.booleans()), max_size=30),
))


@given(docs)
def test_parse_invariants(spec):
    n, working, pairs = spec
    doc = {"nodes": [node(i, working=working[i]) for i in range(n)],
           "links": [link(a, b, working=w) for a, b, w in pairs]}
    g = graph_from_document(json.loads(json.dumps(doc)))
    assert g.n == sum(working)
    expected = {frozenset((str(a), str(b))) for a, b, w in pairs if w and a != b and working[a] and working[b]}
    assert {frozenset((g.name(u), g.name(v))) for u, v in g.edges()} == expected
    for u in g.nodes:
        assert u not in g.adj[u]
        assert all(u in g.adj[w] for w in g.adj[u])


def test_document_round_trip(fixtures_dir):
    g = read_snapshot(fixtures_dir / "two_cliques.json")
    g2 = graph_from_document(json.loads(json.dumps(snapshot_document(g))))
    assert g2 == g
