"""Random attributed communities shared by the election tests."""

from __future__ import annotations

import numpy as np

from cnplace.community import Community
from cnplace.generators import gnp
from cnplace.graph import NodeAttributes, largest_component


def random_community(rng: np.random.Generator, label: int = 0) -> Community:
    n = int(rng.integers(2, 16))
    g = gnp(n, float(rng.uniform(0.25, 0.8)), int(rng.integers(2 ** 31)))
    attrs = {
        v: NodeAttributes(
            device_count=int(rng.integers(1, 4)),
            is_server=bool(rng.random() < 0.15),
            # coarse grids so that ties between nodes actually occur
            availability=float(rng.integers(90, 101)) / 100,
            latency_ms=float(rng.integers(1, 8)),
        )
        for v in g.nodes
    }
    g = largest_component(g.with_attributes(attrs=attrs))
    return Community(label, frozenset(g.nodes), g)


def random_weights(rng: np.random.Generator) -> tuple[float, ...]:
    w = rng.uniform(0, 1, 5) * (rng.random(5) < 0.6)
    if not w.any():
        w[rng.integers(5)] = 1.0
    return tuple(float(x) for x in w)
