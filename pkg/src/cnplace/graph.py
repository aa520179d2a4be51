"""Undirected attributed graph of community-network nodes and links.

Graphs are immutable after construction: every transformation (leaf pruning,
subgraph extraction, attribute synthesis) returns a new instance.  Node ids
are non-negative integers; the snapshot parser assigns them densely in
document order and keeps the original identifier in ``names``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Iterable, Mapping

STRONG = 1.0
MEDIUM = 0.5
WEAK = 0.1

COMP_CLASSES = (STRONG, MEDIUM, WEAK)


class GraphError(Exception):
    pass


class EmptyGraph(GraphError):
    pass


def comp_class_for(is_server: bool, device_count: int) -> float:
    """Computational class: servers are strong, multi-device nodes medium, the rest weak."""
    if is_server:
        return STRONG
    if device_count > 1:
        return MEDIUM
    return WEAK


@dataclass(frozen=True)
class NodeAttributes:
    """System heuristics of one node.

    ``availability`` is a fraction in [0, 1] and ``latency_ms`` a non-negative
    delay; both may be ``None`` when the snapshot did not carry them.
    """

    device_count: int = 1
    is_server: bool = False
    availability: float | None = None
    latency_ms: float | None = None
    synthetic: bool = False

    def __post_init__(self):
        if self.device_count < 1:
            raise ValueError(f"device_count must be >= 1, got {self.device_count}")
        if self.availability is not None and not 0.0 <= self.availability <= 1.0:
            raise ValueError(f"availability must lie in [0, 1], got {self.availability}")
        if self.latency_ms is not None and self.latency_ms < 0:
            raise ValueError(f"latency_ms must be >= 0, got {self.latency_ms}")

    @property
    def comp_class(self) -> float:
        return comp_class_for(self.is_server, self.device_count)


@dataclass(frozen=True)
class EdgeAttributes:
    bandwidth_mbps: float | None = None
    rtt_ms: float | None = None
    synthetic: bool = False

    def __post_init__(self):
        if self.bandwidth_mbps is not None and not self.bandwidth_mbps > 0:
            raise ValueError(f"bandwidth_mbps must be > 0, got {self.bandwidth_mbps}")
        if self.rtt_ms is not None and not self.rtt_ms > 0:
            raise ValueError(f"rtt_ms must be > 0, got {self.rtt_ms}")

    @property
    def measured(self) -> bool:
        return self.bandwidth_mbps is not None and self.rtt_ms is not None


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class NetworkGraph:
    """Simple undirected graph with node and edge attributes.

    Build instances through :meth:`from_edges`; the constructor expects
    already-validated, symmetric adjacency.
    """

    nodes: tuple[int, ...]
    adj: Mapping[int, frozenset[int]]
    attrs: Mapping[int, NodeAttributes] = field(default_factory=dict)
    edge_attrs: Mapping[tuple[int, int], EdgeAttributes] = field(default_factory=dict)
    names: Mapping[int, str] = field(default_factory=dict)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        nodes: Iterable[int] = (),
        attrs: Mapping[int, NodeAttributes] | None = None,
        edge_attrs: Mapping[tuple[int, int], EdgeAttributes] | None = None,
        names: Mapping[int, str] | None = None,
    ) -> "NetworkGraph":
        """Build a graph, dropping self-loops and collapsing repeated edges.

        Nodes missing from ``attrs`` get default (weak, unmeasured) attributes.
        """
        adj: dict[int, set[int]] = {}
        for v in nodes:
            _check_id(v)
            adj.setdefault(v, set())
        for u, v in edges:
            _check_id(u)
            _check_id(v)
            adj.setdefault(u, set())
            adj.setdefault(v, set())
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        attrs = dict(attrs or {})
        for v in attrs:
            if v not in adj:
                raise GraphError(f"attributes given for unknown node {v}")
        full_attrs = {v: attrs.get(v, NodeAttributes()) for v in adj}
        eattrs = {}
        for (u, v), ea in (edge_attrs or {}).items():
            key = edge_key(u, v)
            if u == v or v not in adj.get(u, ()):
                raise GraphError(f"edge attributes given for missing edge {key}")
            eattrs[key] = ea
        names = {v: str(names[v]) for v in adj if names and v in names}
        return cls(
            nodes=tuple(sorted(adj)),
            adj=MappingProxyType({v: frozenset(adj[v]) for v in sorted(adj)}),
            attrs=MappingProxyType(full_attrs),
            edge_attrs=MappingProxyType(eattrs),
            names=MappingProxyType(names),
        )

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self.adj.values()) // 2

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v) -> bool:
        return v in self.adj

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def edges(self) -> list[tuple[int, int]]:
        """Sorted list of edges as ``(u, v)`` with ``u < v``."""
        return sorted((u, v) for u in self.adj for v in self.adj[u] if u < v)

    def has_edge(self, u: int, v: int) -> bool:
        return u in self.adj and v in self.adj[u]

    def edge(self, u: int, v: int) -> EdgeAttributes:
        return self.edge_attrs.get(edge_key(u, v), EdgeAttributes())

    def name(self, v: int) -> str:
        return self.names.get(v, str(v))

    def subgraph(self, members: Iterable[int]) -> "NetworkGraph":
        """Induced subgraph on ``members`` (attributes carried over)."""
        keep = set(members)
        missing = keep.difference(self.adj)
        if missing:
            raise GraphError(f"nodes not in graph: {sorted(missing)[:10]}")
        adj = {v: self.adj[v] & keep for v in sorted(keep)}
        eattrs = {}
        for u, nbrs in adj.items():
            for w in nbrs:
                if u < w and (u, w) in self.edge_attrs:
                    eattrs[(u, w)] = self.edge_attrs[(u, w)]
        return NetworkGraph(
            nodes=tuple(adj),
            adj=MappingProxyType(adj),
            attrs=MappingProxyType({v: self.attrs[v] for v in adj}),
            edge_attrs=MappingProxyType(eattrs),
            names=MappingProxyType({v: self.names[v] for v in adj if v in self.names}),
        )

    def with_attributes(
        self,
        attrs: Mapping[int, NodeAttributes] | None = None,
        edge_attrs: Mapping[tuple[int, int], EdgeAttributes] | None = None,
    ) -> "NetworkGraph":
        """Copy of the graph with some node/edge attributes replaced."""
        new_attrs = dict(self.attrs)
        new_edges = dict(self.edge_attrs)
        for v, a in (attrs or {}).items():
            if v not in self.adj:
                raise GraphError(f"unknown node {v}")
            new_attrs[v] = a
        for (u, v), ea in (edge_attrs or {}).items():
            if not self.has_edge(u, v):
                raise GraphError(f"unknown edge {(u, v)}")
            new_edges[edge_key(u, v)] = ea
        return replace(
            self,
            attrs=MappingProxyType(new_attrs),
            edge_attrs=MappingProxyType(new_edges),
        )

    def bfs_distances(self, source: int) -> dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = du
                    queue.append(w)
        return dist


def _check_id(v) -> None:
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise GraphError(f"node ids must be non-negative integers, got {v!r}")


def prune_leaves(g: NetworkGraph) -> NetworkGraph:
    """Drop every node of degree <= 1 in a single pass.

    Degrees are read from the input graph only, so nodes that become leaves
    after the removal are kept; calling this twice can remove more.
    """
    keep = [v for v in g.nodes if g.degree(v) >= 2]
    return g.subgraph(keep)


def connected_components(g: NetworkGraph) -> list[set[int]]:
    """Connected components, largest first; ties ordered by smallest node id."""
    seen: set[int] = set()
    comps = []
    for v in g.nodes:
        if v in seen:
            continue
        comp = set(g.bfs_distances(v))
        seen |= comp
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def largest_component(g: NetworkGraph) -> NetworkGraph:
    if g.n == 0:
        raise EmptyGraph("graph has no nodes")
    return g.subgraph(connected_components(g)[0])
