"""Topological heuristics: betweenness and closeness on hop distances.

Betweenness is exact (Brandes accumulation), unnormalized, and counts each
unordered pair {u, v} once.  Closeness keeps the (n - 1) numerator with n the
size of the whole input graph and sums distances to reachable nodes only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .graph import NetworkGraph


@dataclass(frozen=True)
class CentralityScores:
    betweenness: Mapping[int, float]
    closeness: Mapping[int, float]


def _sssp(g: NetworkGraph, s: int):
    order = []
    preds: dict[int, list[int]] = {s: []}
    sigma = {s: 1}
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v] + 1
        for w in sorted(g.adj[v]):
            if w not in dist:
                dist[w] = dv
                sigma[w] = 0
                preds[w] = []
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def betweenness(g: NetworkGraph) -> dict[int, float]:
    bc = dict.fromkeys(g.nodes, 0.0)
    for s in g.nodes:
        order, preds, sigma = _sssp(g, s)
        delta = dict.fromkeys(order, 0.0)
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    # every unordered pair was seen from both of its endpoints
    return {v: b / 2.0 for v, b in bc.items()}


def closeness(g: NetworkGraph) -> dict[int, float]:
    out = {}
    for v in g.nodes:
        total = sum(g.bfs_distances(v).values())
        out[v] = (g.n - 1) / total if total > 0 else 0.0
    return out


def centrality(g: NetworkGraph) -> CentralityScores:
    return CentralityScores(betweenness=betweenness(g), closeness=closeness(g))
