import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factories import random_community, random_weights
from oracles import brute_betweenness, brute_closeness

from cnplace.centrality import centrality
from cnplace.community import Community
from cnplace.election import (
    MissingAttributeError,
    WeightConfig,
    WeightConfigError,
    absolute_config,
    combined_config,
    config_from_dict,
    elect,
    elect_all,
    load_weight_config,
    missing_attributes,
    normalize_heuristics,
    parse_weight_spec,
    random_config,
)
from cnplace.generators import complete, path, star
from cnplace.graph import NetworkGraph, NodeAttributes


def test_absolute_config():
    assert absolute_config(5).w == (0, 0, 0, 0, 1)
    assert absolute_config(1).w == (1, 0, 0, 0, 0)
    assert absolute_config("b2").w == (0, 0, 0, 1, 0)
    for bad in (0, 6, "c1", True):
        with pytest.raises(WeightConfigError):
            absolute_config(bad)


def test_combined_config():
    assert combined_config(1, 4, 0.6).w == pytest.approx((0.4, 0, 0, 0.6, 0))
    assert combined_config("a1", "b2", 0.4).w == pytest.approx((0.6, 0, 0, 0.4, 0))
    with pytest.raises(WeightConfigError):
        combined_config(2, 2, 0.5)
    for f in (0.0, 1.0, -0.1):
        with pytest.raises(WeightConfigError):
            combined_config(1, 2, f)


@pytest.mark.parametrize("w", [(0, 0, 0, 0, 0), (1, -1, 0, 0, 0), (1, 0, 0), (float("nan"), 1, 0, 0, 0)])
def test_weight_validation(w):
    with pytest.raises(WeightConfigError):
        WeightConfig(w)


def test_spec_parsing():
    assert parse_weight_spec("b3") == absolute_config("b3")
    assert parse_weight_spec("a1+b2:0.6").w == pytest.approx((0.4, 0, 0, 0.6, 0))
    assert parse_weight_spec("1,0,0,0.5,0").w == (1, 0, 0, 0.5, 0)
    assert parse_weight_spec("random", seed=3) == random_config(3)
    for bad in ("random", "zz", "a1+a1:0.5", "1,x,0,0,0"):
        with pytest.raises(WeightConfigError):
            parse_weight_spec(bad)


def test_json_config():
    assert config_from_dict({"mode": "absolute", "heuristic": "a2"}).w == (0, 1, 0, 0, 0)
    assert config_from_dict({"mode": "combined", "m1": "a1", "m2": "b2", "f": 0.6}).w[3] == 0.6
    assert config_from_dict({"mode": "explicit", "weights": [0, 0, 1, 1, 0]}).w == (0, 0, 1, 1, 0)
    assert load_weight_config(json.dumps({"mode": "random"}), seed=9).seed == 9
    with pytest.raises(WeightConfigError):
        config_from_dict({"mode": "combined", "m1": "a1"})
    with pytest.raises(WeightConfigError):
        config_from_dict({"mode": "bogus"})


def test_normalize_examples():
    g = path(3).with_attributes(attrs={
        0: NodeAttributes(is_server=True, availability=0.9, latency_ms=10.0),
        1: NodeAttributes(device_count=2, availability=0.9, latency_ms=20.0),
        2: NodeAttributes(availability=0.9, latency_ms=20.0),
    })
    comps = normalize_heuristics(g, centrality(g))
    assert [comps[v][4] for v in (0, 1, 2)] == pytest.approx([1.0, 0.4 / 0.9, 0.0])
    assert [comps[v][3] for v in (0, 1)] == [1.0, 0.0]
    assert all(comps[v][2] == 0.5 for v in g.nodes)


def test_normalize_missing_required():
    g = path(3)
    with pytest.raises(MissingAttributeError) as err:
        normalize_heuristics(g, centrality(g))
    assert set(err.value.missing) == {"b1", "b2"}
    comps = normalize_heuristics(g, centrality(g), required=(1, 2, 5))
    assert all(comps[v][2] == comps[v][3] == 0.5 for v in g.nodes)


def test_missing_attributes_respects_weights():
    g = path(3)
    assert missing_attributes(g, absolute_config("a1")) == {}
    assert set(missing_attributes(g, combined_config("b1", "b2", 0.5))) == {"availability", "latency_ms"}
    assert missing_attributes(g, random_config(1)) == {}


def test_strong_node_leads_under_b3():
    g = path(3).with_attributes(attrs={2: NodeAttributes(is_server=True)})
    assert elect(g, None, absolute_config(5)).leader == 2


def test_symmetric_triangle_tie_break():
    for w in (absolute_config(1), absolute_config(2), absolute_config(5), combined_config(1, 5, 0.3)):
        r = elect(complete(3, offset=4), None, w)
        assert r.nodes() == [4, 5, 6]


def test_star_centre_leads_under_a1():
    assert elect(star(3), None, absolute_config(1)).leader == 0


def test_only_largest_component_ranked():
    g = NetworkGraph.from_edges([(0, 1), (1, 2), (5, 6)])
    r = elect(Community(0, frozenset(g.nodes), g), None, absolute_config(1))
    assert sorted(r.nodes()) == [0, 1, 2]


def test_score_is_weighted_sum():
    rng = np.random.default_rng(0)
    c = random_community(rng)
    w = WeightConfig((0.2, 0.1, 0.3, 0.25, 0.15))
    for s in elect(c, None, w).ordered:
        assert s.score == pytest.approx(sum(a * b for a, b in zip(w.w, s.components)), abs=1e-15)


def test_random_mode_seeded_and_uniformish():
    g = complete(4)
    c = Community(0, frozenset(g.nodes), g)
    assert elect(c, None, random_config(7)) == elect(c, None, random_config(7))
    leaders = [elect(c, None, random_config(s)).leader for s in range(400)]
    counts = np.bincount(leaders, minlength=4)
    assert counts.min() > 60


def test_elect_all_keyed_by_label():
    rng = np.random.default_rng(5)
    comms = [random_community(rng, label=lab) for lab in (9, 3, 6)]
    out = elect_all(comms, absolute_config(2))
    assert list(out) == [3, 6, 9]


@given(st.integers(0, 2 ** 32 - 1), st.floats(1e-3, 1e3))
@settings(max_examples=60, deadline=None)
def test_scaling_invariance(seed, lam):
    rng = np.random.default_rng(seed)
    c = random_community(rng)
    w = WeightConfig(random_weights(rng))
    assert elect(c, None, w).nodes() == elect(c, None, w.scaled(lam)).nodes()


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_totality_and_order(seed):
    rng = np.random.default_rng(seed)
    c = random_community(rng)
    r = elect(c, None, WeightConfig(random_weights(rng)))
    assert sorted(r.nodes()) == sorted(c.members)
    keys = [(-s.score, s.node) for s in r.ordered]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def raw_heuristics(c):
    """Independent higher-is-better heuristic values for each node."""
    g = c.subgraph
    b = brute_betweenness(g.nodes, g.edges())
    cl = brute_closeness(g.nodes, g.edges())
    return {v: (b[v], cl[v], g.attrs[v].availability, -g.attrs[v].latency_ms, g.attrs[v].comp_class)
            for v in g.nodes}


def dominating_node(raw, w):
    active = [k for k in range(5) if w[k] > 0]
    for x, hx in raw.items():
        ok = True
        for y, hy in raw.items():
            if y == x:
                continue
            if any(hx[k] < hy[k] - 1e-12 for k in active) or not any(hx[k] > hy[k] + 1e-12 for k in active):
                ok = False
                break
        if ok:
            return x
    return None


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=80, deadline=None)
def test_dominance(seed):
    rng = np.random.default_rng(seed)
    c = random_community(rng)
    w = random_weights(rng)
    x = dominating_node(raw_heuristics(c), w)
    if x is not None:
        assert elect(c, None, WeightConfig(w)).leader == x
