"""Community finding by synchronous label propagation.

Every superstep reads the labels of the previous superstep only (two
buffers), so the outcome does not depend on node visiting order.  A node
adopts the most frequent label among its neighbours, ties going to the
numerically highest label; its own label does not vote.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .graph import NetworkGraph

DEFAULT_MAX_ITERS = 10


class CommunityError(Exception):
    pass


@dataclass(frozen=True)
class LabelState:
    labels: Mapping[int, int]
    iteration: int
    changed: bool


@dataclass(frozen=True)
class Community:
    label: int
    members: frozenset[int]
    subgraph: NetworkGraph

    @property
    def size(self) -> int:
        return len(self.members)


def _superstep(g: NetworkGraph, labels: Mapping[int, int]) -> dict[int, int]:
    new = {}
    for v in g.nodes:
        nbrs = g.adj[v]
        if not nbrs:
            new[v] = labels[v]
            continue
        counts = Counter(labels[u] for u in nbrs)
        top = max(counts.values())
        new[v] = max(lab for lab, c in counts.items() if c == top)
    return new


def propagate_labels(g: NetworkGraph, max_iters: int = DEFAULT_MAX_ITERS) -> LabelState:
    """Run at most ``max_iters`` supersteps, stopping early once labels are stable.

    ``iteration`` counts executed supersteps, including the final one that
    observed no change.  When the cap is hit the state after the last
    superstep is returned with ``changed=True``.
    """
    if isinstance(max_iters, bool) or not isinstance(max_iters, int) or max_iters < 1:
        raise ValueError(f"max_iters must be an integer >= 1, got {max_iters!r}")
    labels = {v: v for v in g.nodes}
    changed = True
    it = 0
    while it < max_iters:
        new = _superstep(g, labels)
        it += 1
        changed = new != labels
        labels = new
        if not changed:
            break
    return LabelState(labels=labels, iteration=it, changed=changed)


def group_by_labels(g: NetworkGraph, state: LabelState | Mapping[int, int]) -> list[Community]:
    """Communities ordered by label."""
    labels = state.labels if isinstance(state, LabelState) else state
    missing = [v for v in g.nodes if v not in labels]
    if missing:
        raise CommunityError(f"label map misses {len(missing)} node(s), e.g. {missing[:5]}")
    groups: dict[int, list[int]] = {}
    for v in g.nodes:
        groups.setdefault(labels[v], []).append(v)
    return [
        Community(label=lab, members=frozenset(mem), subgraph=g.subgraph(mem))
        for lab, mem in sorted(groups.items())
    ]


def communities_from_sets(g: NetworkGraph, sets: Iterable[Iterable[int]]) -> list[Community]:
    """Wrap an externally supplied partition; each set is labelled by its smallest node.

    Raises CommunityError unless the sets partition ``g.nodes`` exactly.
    """
    seen: set[int] = set()
    out = []
    for s in sets:
        members = frozenset(s)
        if not members:
            raise CommunityError("empty community in partition")
        if members & seen:
            raise CommunityError("partition sets overlap")
        unknown = members.difference(g.adj)
        if unknown:
            raise CommunityError(f"partition references unknown nodes {sorted(unknown)[:5]}")
        seen |= members
        out.append(Community(label=min(members), members=members, subgraph=g.subgraph(members)))
    if len(seen) != g.n:
        raise CommunityError(f"partition covers {len(seen)} of {g.n} nodes")
    return sorted(out, key=lambda c: c.label)


def find_communities(g: NetworkGraph, max_iters: int = DEFAULT_MAX_ITERS) -> tuple[list[Community], LabelState]:
    state = propagate_labels(g, max_iters)
    return group_by_labels(g, state), state


def random_partition(g: NetworkGraph, sizes: Iterable[int], seed: int) -> list[Community]:
    """Baseline partition: shuffle the nodes and cut them into groups of ``sizes``."""
    sizes = list(sizes)
    if sum(sizes) != g.n or any(s < 1 for s in sizes):
        raise CommunityError(f"sizes {sizes[:5]}... do not split {g.n} nodes")
    rng = np.random.default_rng(seed)
    order = [g.nodes[i] for i in rng.permutation(g.n)]
    sets, start = [], 0
    for s in sizes:
        sets.append(order[start:start + s])
        start += s
    return communities_from_sets(g, sets)


def communities_document(g: NetworkGraph, comms: Iterable[Community]) -> list[dict]:
    return [
        {"label": c.label, "members": [g.name(v) for v in sorted(c.members)]}
        for c in sorted(comms, key=lambda c: c.label)
    ]


def communities_from_document(g: NetworkGraph, doc, ignore_unknown: bool = False) -> list[Community]:
    """Inverse of :func:`communities_document`; labels from the file are kept.

    With ``ignore_unknown`` members absent from ``g`` (for instance nodes
    dropped by leaf pruning) are skipped instead of rejected.
    """
    if isinstance(doc, dict):
        doc = doc.get("communities")
    if not isinstance(doc, list):
        raise CommunityError("communities document must be an array of {label, members}")
    by_name = {g.name(v): v for v in g.nodes}
    labels: dict[int, int] = {}
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict) or "members" not in entry:
            raise CommunityError(f"communities[{i}]: expected an object with 'members'")
        lab = entry.get("label", i)
        if isinstance(lab, bool) or not isinstance(lab, int) or lab < 0:
            raise CommunityError(f"communities[{i}].label: expected a non-negative integer")
        for name in entry["members"]:
            v = by_name.get(str(name))
            if v is None:
                if ignore_unknown:
                    continue
                raise CommunityError(f"communities[{i}]: unknown member {name!r}")
            if v in labels:
                raise CommunityError(f"communities[{i}]: node {name!r} listed twice")
            labels[v] = lab
    return group_by_labels(g, labels)
