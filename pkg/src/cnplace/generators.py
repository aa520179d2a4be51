"""Small synthetic topologies for tests, demos and desk-scale experiments."""

from __future__ import annotations

import itertools

import numpy as np

from .graph import NetworkGraph


def path(n: int) -> NetworkGraph:
    return NetworkGraph.from_edges([(i, i + 1) for i in range(n - 1)], nodes=range(n))


def cycle(n: int) -> NetworkGraph:
    return NetworkGraph.from_edges([(i, (i + 1) % n) for i in range(n)])


def complete(n: int, offset: int = 0) -> NetworkGraph:
    return NetworkGraph.from_edges(
        itertools.combinations(range(offset, offset + n), 2), nodes=range(offset, offset + n)
    )


def star(leaves: int) -> NetworkGraph:
    """Centre 0 joined to nodes 1..leaves."""
    return NetworkGraph.from_edges([(0, i) for i in range(1, leaves + 1)])


def clique_bridge(k: int = 5) -> NetworkGraph:
    """Two k-cliques on 0..k-1 and k..2k-1 joined by the edge (k-1, k)."""
    edges = list(itertools.combinations(range(k), 2))
    edges += list(itertools.combinations(range(k, 2 * k), 2))
    edges.append((k - 1, k))
    return NetworkGraph.from_edges(edges)


def gnp(n: int, p: float, seed: int) -> NetworkGraph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return NetworkGraph.from_edges(zip(iu[keep].tolist(), ju[keep].tolist()), nodes=range(n))


def planted_partition(
    blocks: int, size: int, p_in: float, p_out: float, seed: int
) -> tuple[NetworkGraph, list[int]]:
    """Stochastic block model with equal blocks; returns the graph and block of each node."""
    n = blocks * size
    block = np.repeat(np.arange(blocks), size)
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(block[iu] == block[ju], p_in, p_out)
    keep = rng.random(iu.size) < prob
    g = NetworkGraph.from_edges(zip(iu[keep].tolist(), ju[keep].tolist()), nodes=range(n))
    return g, block.tolist()
