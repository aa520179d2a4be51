"""Seeded random streams.

All randomness derives from one integer root seed.  A named stream is
``numpy.random.Generator(PCG64(SeedSequence(seed, spawn_key=(stream_id, *extra))))``
with the fixed ids in :data:`STREAMS`; ``extra`` keys (for instance a
community label) split a stream further.  PCG64 and SeedSequence are
specified bit-for-bit by NumPy, so the draws are portable across platforms.

Uniform variates for inverse-CDF sampling are ``(j + 0.5) / 2**53`` with
``j`` a 53-bit integer from the generator, which keeps them strictly inside
(0, 1).
"""

from __future__ import annotations

import numpy as np

STREAMS = {
    "bandwidth": 1,
    "rtt": 2,
    "node_latency": 3,
    "node_availability": 4,
    "election": 5,
    "baseline": 6,
    "sampler": 7,
}

_SCALE = 2.0 ** -53


def stream(seed: int, name: str, *extra: int) -> np.random.Generator:
    if name not in STREAMS:
        raise KeyError(f"unknown random stream {name!r}")
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    key = (STREAMS[name],) + tuple(int(x) for x in extra)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=key)))


def open_uniform(gen: np.random.Generator, n: int) -> np.ndarray:
    """``n`` uniforms strictly between 0 and 1."""
    j = gen.integers(0, 2 ** 53, size=n, dtype=np.uint64)
    return (j.astype(np.float64) + 0.5) * _SCALE
