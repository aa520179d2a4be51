"""Placement-quality metrics: hops to leader, degree statistics, path quality.

Distances are measured inside the largest connected component of each
community, the set the leader is elected from.  The hops mean leaves the
leader out unless ``include_leader`` is set.

Paths to the leader are the BFS tree rooted at the leader with neighbours
visited in ascending id order; along a path the bandwidth is the bottleneck
(minimum) and the RTT is the sum over links.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from dataclasses import asdict, dataclass, field
from statistics import fmean
from typing import Sequence

from .community import Community
from .election import Ranking, WeightConfig, elect
from .graph import GraphError, NetworkGraph, largest_component
from .stats import Ecdf, ecdf, gof_ks

__all__ = [
    "Ecdf",
    "PairedReport",
    "PlacementReport",
    "ReportRow",
    "compare_partitions",
    "degree_stats",
    "ecdf",
    "gof_ks",
    "hops_to_leader",
    "leader_paths",
    "placement_report",
]


def _component(c: Community | NetworkGraph) -> NetworkGraph:
    g = c.subgraph if isinstance(c, Community) else c
    return largest_component(g)


def hops_to_leader(c: Community | NetworkGraph, leader: int, include_leader: bool = False) -> float:
    comp = _component(c)
    if leader not in comp:
        raise ValueError(f"leader {leader} is not in the community's largest component")
    dist = comp.bfs_distances(leader)
    values = list(dist.values()) if include_leader else [d for v, d in dist.items() if v != leader]
    return fmean(values) if values else 0.0


def degree_stats(c: Community | NetworkGraph) -> tuple[int, float]:
    g = c.subgraph if isinstance(c, Community) else c
    if g.n == 0:
        return 0, 0.0
    return max(g.degree(v) for v in g.nodes), 2.0 * g.m / g.n


@dataclass(frozen=True)
class LeaderPaths:
    hops: dict[int, int]
    bandwidth: dict[int, float | None]
    rtt: dict[int, float | None]


def leader_paths(comp: NetworkGraph, leader: int) -> LeaderPaths:
    """Hop count, bottleneck bandwidth and total RTT from every node to ``leader``.

    Bandwidth/RTT are ``None`` for a node whose path crosses an unmeasured link.
    """
    hops = {leader: 0}
    bw: dict[int, float | None] = {leader: math.inf}
    rtt: dict[int, float | None] = {leader: 0.0}
    queue = deque([leader])
    while queue:
        u = queue.popleft()
        for w in sorted(comp.adj[u]):
            if w in hops:
                continue
            hops[w] = hops[u] + 1
            ea = comp.edge(u, w)
            bw[w] = None if bw[u] is None or ea.bandwidth_mbps is None else min(bw[u], ea.bandwidth_mbps)
            rtt[w] = None if rtt[u] is None or ea.rtt_ms is None else rtt[u] + ea.rtt_ms
            queue.append(w)
    del bw[leader], rtt[leader], hops[leader]
    return LeaderPaths(hops, bw, rtt)


@dataclass(frozen=True)
class ReportRow:
    label: int
    size: int
    leader: int
    avg_hops: float
    max_degree: int
    avg_degree: float
    avg_bw_to_leader: float | None
    avg_rtt_to_leader: float | None


@dataclass(frozen=True)
class PlacementReport:
    rows: tuple[ReportRow, ...]
    # one entry per non-leader node, for ECDFs
    hop_samples: tuple[int, ...] = field(default=(), compare=False)
    bw_samples: tuple[float, ...] = field(default=(), compare=False)
    rtt_samples: tuple[float, ...] = field(default=(), compare=False)

    def mean_avg_hops(self) -> float:
        return fmean(r.avg_hops for r in self.rows) if self.rows else 0.0

    def summary(self) -> dict:
        def mean_of(attr):
            vals = [getattr(r, attr) for r in self.rows if getattr(r, attr) is not None]
            return fmean(vals) if vals else None

        return {
            "communities": len(self.rows),
            "mean_size": mean_of("size"),
            "mean_avg_hops": mean_of("avg_hops"),
            "mean_max_degree": mean_of("max_degree"),
            "mean_avg_degree": mean_of("avg_degree"),
            "mean_avg_bw_to_leader": mean_of("avg_bw_to_leader"),
            "mean_avg_rtt_to_leader": mean_of("avg_rtt_to_leader"),
        }

    def to_rows(self, g: NetworkGraph | None = None) -> list[dict]:
        out = []
        for r in self.rows:
            d = asdict(r)
            if g is not None:
                d["leader"] = g.name(r.leader)
            out.append(d)
        return out

    def to_csv(self, g: NetworkGraph | None = None, header_lines: Sequence[str] = ()) -> str:
        buf = io.StringIO()
        for line in header_lines:
            buf.write(f"# {line}\n")
        cols = [f.name for f in ReportRow.__dataclass_fields__.values()]
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for row in self.to_rows(g):
            writer.writerow({k: _fmt(v) for k, v in row.items()})
        return buf.getvalue()


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def placement_report(
    communities: Sequence[Community],
    rankings: dict[int, Ranking],
    include_leader: bool = False,
) -> PlacementReport:
    rows = []
    hop_s, bw_s, rtt_s = [], [], []
    for c in sorted(communities, key=lambda c: c.label):
        leader = rankings[c.label].leader
        comp = _component(c)
        paths = leader_paths(comp, leader)
        max_deg, avg_deg = degree_stats(c)
        bws = [x for x in paths.bandwidth.values() if x is not None]
        rtts = [x for x in paths.rtt.values() if x is not None]
        complete = len(bws) == len(paths.bandwidth)
        rows.append(ReportRow(
            label=c.label,
            size=c.size,
            leader=leader,
            avg_hops=hops_to_leader(comp, leader, include_leader),
            max_degree=max_deg,
            avg_degree=avg_deg,
            avg_bw_to_leader=fmean(bws) if bws and complete else None,
            avg_rtt_to_leader=fmean(rtts) if rtts and len(rtts) == len(paths.rtt) else None,
        ))
        hop_s.extend(paths.hops[v] for v in sorted(paths.hops))
        bw_s.extend(bws)
        rtt_s.extend(rtts)
    return PlacementReport(tuple(rows), tuple(hop_s), tuple(bw_s), tuple(rtt_s))


@dataclass(frozen=True)
class PairedReport:
    a: PlacementReport
    b: PlacementReport
    rankings_a: dict[int, Ranking] = field(compare=False, default_factory=dict)
    rankings_b: dict[int, Ranking] = field(compare=False, default_factory=dict)

    def swapped(self) -> "PairedReport":
        return PairedReport(self.b, self.a, self.rankings_b, self.rankings_a)

    def summary(self) -> dict:
        return {"a": self.a.summary(), "b": self.b.summary()}


def _check_cover(g: NetworkGraph, part: Sequence[Community], name: str) -> None:
    seen: set[int] = set()
    for c in part:
        if c.members & seen:
            raise GraphError(f"partition {name} has overlapping communities")
        seen |= c.members
    if seen != set(g.nodes):
        raise GraphError(f"partition {name} covers {len(seen & set(g.nodes))} of {g.n} nodes")


def compare_partitions(
    g: NetworkGraph,
    part_a: Sequence[Community],
    part_b: Sequence[Community],
    w: WeightConfig,
    include_leader: bool = False,
) -> PairedReport:
    """Elect leaders under two partitions of ``g`` and report both side by side."""
    _check_cover(g, part_a, "A")
    _check_cover(g, part_b, "B")
    ra = {c.label: elect(c, None, w) for c in part_a}
    rb = {c.label: elect(c, None, w) for c in part_b}
    return PairedReport(
        placement_report(part_a, ra, include_leader),
        placement_report(part_b, rb, include_leader),
        ra,
        rb,
    )


def ecdf_csv(xs, header_lines: Sequence[str] = (), value_name: str = "value") -> str:
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    buf.write(f"{value_name},cumulative_fraction\n")
    if len(xs):
        for v, f in ecdf(xs).rows():
            buf.write(f"{v!r},{f!r}\n")
    return buf.getvalue()
