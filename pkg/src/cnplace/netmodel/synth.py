"""Fill in missing link and node measurements from fitted distributions.

Bandwidth and RTT come from independent streams, so synthetic pairs are
uncorrelated by construction.  Draws that are not strictly positive are
redrawn from the same stream up to :data:`MAX_RETRIES` times and then clamped
to :data:`EPSILON`.  Edges are filled in ascending ``(u, v)`` order and nodes
in ascending id order, which makes the output a pure function of the graph,
the parameters and the seed.

Missing node latency is drawn from the RTT model; missing availability from
Uniform(0.9, 1.0) (:data:`AVAILABILITY_RANGE`).
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..graph import EdgeAttributes, NetworkGraph
from .gev import GevParams, gev_quantile
from .kappa import Kappa4Params, kappa_quantile
from .rng import open_uniform, stream

MAX_RETRIES = 100
EPSILON = 1e-6
AVAILABILITY_RANGE = (0.9, 1.0)


def positive_draws(quantile, gen: np.random.Generator, n: int) -> np.ndarray:
    out = quantile(open_uniform(gen, n)) if n else np.empty(0)
    bad = ~(out > 0)
    for _ in range(MAX_RETRIES):
        if not bad.any():
            break
        out[bad] = quantile(open_uniform(gen, int(bad.sum())))
        bad = ~(out > 0)
    out[bad] = EPSILON
    return out


def draw_bandwidth(p: Kappa4Params, n: int, seed: int) -> np.ndarray:
    return positive_draws(lambda u: kappa_quantile(p, u), stream(seed, "bandwidth"), n)


def draw_rtt(p: GevParams, n: int, seed: int) -> np.ndarray:
    return positive_draws(lambda u: gev_quantile(p, u), stream(seed, "rtt"), n)


def synthesize_attributes(
    g: NetworkGraph,
    bw: Kappa4Params,
    rtt: GevParams,
    seed: int,
    fill_nodes: bool = True,
) -> NetworkGraph:
    """Return ``g`` with every missing bandwidth/RTT (and node measurement) drawn.

    Measured values are never touched; filled edges and nodes get
    ``synthetic=True``.
    """
    edges = g.edges()
    need_bw = [e for e in edges if g.edge(*e).bandwidth_mbps is None]
    need_rtt = [e for e in edges if g.edge(*e).rtt_ms is None]
    bw_vals = dict(zip(need_bw, draw_bandwidth(bw, len(need_bw), seed).tolist()))
    rtt_vals = dict(zip(need_rtt, draw_rtt(rtt, len(need_rtt), seed).tolist()))

    new_edges = {}
    for e in sorted(set(bw_vals) | set(rtt_vals)):
        old = g.edge(*e)
        new_edges[e] = EdgeAttributes(
            bandwidth_mbps=bw_vals.get(e, old.bandwidth_mbps),
            rtt_ms=rtt_vals.get(e, old.rtt_ms),
            synthetic=True,
        )

    new_nodes = {}
    if fill_nodes:
        need_lat = [v for v in g.nodes if g.attrs[v].latency_ms is None]
        need_av = [v for v in g.nodes if g.attrs[v].availability is None]
        lat = positive_draws(lambda u: gev_quantile(rtt, u), stream(seed, "node_latency"), len(need_lat))
        lo, hi = AVAILABILITY_RANGE
        av = lo + (hi - lo) * open_uniform(stream(seed, "node_availability"), len(need_av))
        lat_vals = dict(zip(need_lat, lat.tolist()))
        av_vals = dict(zip(need_av, av.tolist()))
        for v in sorted(set(lat_vals) | set(av_vals)):
            old = g.attrs[v]
            new_nodes[v] = replace(
                old,
                latency_ms=lat_vals.get(v, old.latency_ms),
                availability=av_vals.get(v, old.availability),
                synthetic=True,
            )

    if not new_edges and not new_nodes:
        return g
    return g.with_attributes(attrs=new_nodes, edge_attrs=new_edges)
