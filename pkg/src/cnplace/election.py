"""Leader election inside a community.

Each node of the community's largest connected component gets five
heuristics, in this order:

    a1  betweenness centrality
    a2  closeness centrality
    b1  availability
    b2  latency (inverted: lower latency scores higher)
    b3  computational class

Every heuristic is min-max normalized over the component (a constant
heuristic maps to 0.5) and the node score is the weighted sum.  The ranking
sorts by decreasing score, ties broken by ascending node id.

Centralities are computed per community by :mod:`cnplace.centrality` and
passed in, rather than derived vertex by vertex during the election.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .centrality import CentralityScores, centrality
from .community import Community
from .graph import EmptyGraph, NetworkGraph, largest_component
from .netmodel.rng import stream

HEURISTICS = ("a1", "a2", "b1", "b2", "b3")
MODES = ("absolute", "combined", "explicit", "random")


class WeightConfigError(ValueError):
    pass


class MissingAttributeError(Exception):
    """Raised when a positively weighted heuristic lacks data for some nodes."""

    def __init__(self, missing: Mapping[str, Sequence[int]]):
        self.missing = {k: list(v) for k, v in missing.items()}
        parts = [f"{k}: {len(v)} node(s)" for k, v in self.missing.items()]
        super().__init__("missing node attributes (" + ", ".join(parts) + ")")


@dataclass(frozen=True)
class WeightConfig:
    w: tuple[float, ...]
    mode: str = "explicit"
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise WeightConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "random":
            if self.seed is None:
                raise WeightConfigError("random election needs a seed")
            return
        if len(self.w) != 5:
            raise WeightConfigError(f"need 5 weights, got {len(self.w)}")
        if any(not math.isfinite(x) or x < 0 for x in self.w):
            raise WeightConfigError(f"weights must be finite and >= 0: {self.w}")
        if not any(x > 0 for x in self.w):
            raise WeightConfigError("at least one weight must be positive")

    def scaled(self, factor: float) -> "WeightConfig":
        return WeightConfig(tuple(factor * x for x in self.w), self.mode, self.seed)

    def to_dict(self) -> dict:
        d = {"mode": self.mode, "weights": list(self.w)}
        if self.seed is not None:
            d["seed"] = self.seed
        return d


def _heuristic_index(h) -> int:
    if isinstance(h, str):
        if h not in HEURISTICS:
            raise WeightConfigError(f"unknown heuristic {h!r}; expected one of {HEURISTICS}")
        return HEURISTICS.index(h) + 1
    if isinstance(h, bool) or not isinstance(h, int) or not 1 <= h <= 5:
        raise WeightConfigError(f"heuristic index must be in 1..5, got {h!r}")
    return h


def absolute_config(h) -> WeightConfig:
    """All weight on one heuristic (index 1..5 or name such as ``"b3"``)."""
    idx = _heuristic_index(h)
    w = [0.0] * 5
    w[idx - 1] = 1.0
    return WeightConfig(tuple(w), mode="absolute")


def combined_config(m1, m2, f: float) -> WeightConfig:
    """Weight ``1 - f`` on ``m1`` and ``f`` on ``m2``."""
    i1, i2 = _heuristic_index(m1), _heuristic_index(m2)
    if i1 == i2:
        raise WeightConfigError("combined heuristics must differ")
    if not 0.0 < f < 1.0:
        raise WeightConfigError(f"f must lie strictly between 0 and 1, got {f}")
    w = [0.0] * 5
    w[i1 - 1] = 1.0 - f
    w[i2 - 1] = f
    return WeightConfig(tuple(w), mode="combined")


def random_config(seed: int) -> WeightConfig:
    return WeightConfig((), mode="random", seed=seed)


def config_from_dict(d: Mapping) -> WeightConfig:
    """Parse a weight configuration object (the JSON weights file)."""
    if not isinstance(d, Mapping):
        raise WeightConfigError("weight config must be an object")
    mode = d.get("mode")
    try:
        if mode == "absolute":
            return absolute_config(d["heuristic"])
        if mode == "combined":
            return combined_config(d["m1"], d["m2"], float(d["f"]))
        if mode == "explicit":
            return WeightConfig(tuple(float(x) for x in d["weights"]))
        if mode == "random":
            seed = d["seed"]
            if isinstance(seed, bool) or not isinstance(seed, int):
                raise WeightConfigError("seed must be an integer")
            return random_config(seed)
    except KeyError as exc:
        raise WeightConfigError(f"mode {mode!r} requires field {exc.args[0]!r}") from None
    except TypeError as exc:
        raise WeightConfigError(str(exc)) from None
    raise WeightConfigError(f"unknown mode {mode!r}; expected one of {MODES}")


def parse_weight_spec(spec: str, seed: int | None = None) -> WeightConfig:
    """Parse the compact command-line form.

    ``b3`` (absolute), ``a1+b2:0.6`` (combined, f=0.6 on the second),
    ``1,0,0,0.5,0`` (explicit) or ``random`` (uses ``seed``).
    """
    spec = spec.strip()
    if spec == "random":
        if seed is None:
            raise WeightConfigError("random election needs --seed")
        return random_config(seed)
    if spec in HEURISTICS:
        return absolute_config(spec)
    if "+" in spec:
        pair, _, f = spec.partition(":")
        m1, _, m2 = pair.partition("+")
        try:
            return combined_config(m1.strip(), m2.strip(), float(f) if f else 0.5)
        except ValueError as exc:
            raise WeightConfigError(str(exc)) from None
    if "," in spec:
        try:
            return WeightConfig(tuple(float(x) for x in spec.split(",")))
        except ValueError as exc:
            raise WeightConfigError(str(exc)) from None
    raise WeightConfigError(f"cannot parse weight spec {spec!r}")


def load_weight_config(text: str, seed: int | None = None) -> WeightConfig:
    """Accept either a JSON document or the compact spec string."""
    stripped = text.strip()
    if stripped.startswith("{"):
        d = json.loads(stripped)
        if d.get("mode") == "random" and "seed" not in d and seed is not None:
            d = {**d, "seed": seed}
        return config_from_dict(d)
    return parse_weight_spec(stripped, seed)


@dataclass(frozen=True)
class NodeScore:
    node: int
    score: float
    components: tuple[float, ...]


@dataclass(frozen=True)
class Ranking:
    ordered: tuple[NodeScore, ...]
    config: WeightConfig | None = field(default=None, compare=False)

    @property
    def leader(self) -> int:
        return self.ordered[0].node

    def nodes(self) -> list[int]:
        return [s.node for s in self.ordered]


def _minmax(values: dict[int, float], invert: bool = False) -> dict[int, float]:
    lo = min(values.values())
    hi = max(values.values())
    if hi == lo:
        return dict.fromkeys(values, 0.5)
    span = hi - lo
    out = {v: (x - lo) / span for v, x in values.items()}
    if invert:
        out = {v: 1.0 - x for v, x in out.items()}
    return out


def _raw_heuristics(g: NetworkGraph, cent: CentralityScores):
    raw: list[dict[int, float | None]] = [
        {v: cent.betweenness[v] for v in g.nodes},
        {v: cent.closeness[v] for v in g.nodes},
        {v: g.attrs[v].availability for v in g.nodes},
        {v: g.attrs[v].latency_ms for v in g.nodes},
        {v: g.attrs[v].comp_class for v in g.nodes},
    ]
    return raw


def missing_attributes(g: NetworkGraph, w: WeightConfig | None = None) -> dict[str, list[int]]:
    """Nodes lacking availability/latency, restricted to heuristics with positive weight."""
    need_b1 = need_b2 = True
    if w is not None:
        if w.mode == "random":
            return {}
        need_b1, need_b2 = w.w[2] > 0, w.w[3] > 0
    out = {}
    if need_b1:
        miss = [v for v in g.nodes if g.attrs[v].availability is None]
        if miss:
            out["availability"] = miss
    if need_b2:
        miss = [v for v in g.nodes if g.attrs[v].latency_ms is None]
        if miss:
            out["latency_ms"] = miss
    return out


def normalize_heuristics(
    c: Community | NetworkGraph,
    cent: CentralityScores,
    required: Sequence[int] = (1, 2, 3, 4, 5),
) -> dict[int, tuple[float, ...]]:
    """Normalized 5-vectors for the nodes of the largest component.

    A heuristic outside ``required`` whose data is missing is filled with the
    neutral 0.5; a required one raises :class:`MissingAttributeError`.
    """
    g = c.subgraph if isinstance(c, Community) else c
    if g.n == 0:
        raise EmptyGraph("community has no nodes")
    comp = largest_component(g)
    raw = _raw_heuristics(comp, cent)
    missing = {}
    cols = []
    for k, values in enumerate(raw):
        absent = [v for v, x in values.items() if x is None]
        if absent:
            if k + 1 in required:
                missing[HEURISTICS[k]] = absent
            cols.append(dict.fromkeys(values, 0.5))
            continue
        cols.append(_minmax(values, invert=(k == 3)))
    if missing:
        raise MissingAttributeError(missing)
    return {v: tuple(col[v] for col in cols) for v in comp.nodes}


def _score(w: Sequence[float], comps: Sequence[float]) -> float:
    return math.fsum(wk * ck for wk, ck in zip(w, comps))


def elect(
    c: Community | NetworkGraph,
    cent: CentralityScores | None,
    w: WeightConfig,
    label: int | None = None,
) -> Ranking:
    """Rank the nodes of the community's largest component.

    ``cent=None`` computes centralities on that component.  In random mode
    each node draws a uniform score from a stream keyed by ``(seed, label)``,
    so the leader is a uniform pick that does not depend on other
    communities.
    """
    g = c.subgraph if isinstance(c, Community) else c
    if label is None:
        label = c.label if isinstance(c, Community) else (min(g.nodes) if g.n else 0)
    if g.n == 0:
        raise EmptyGraph("community has no nodes")
    comp = largest_component(g)
    if cent is None:
        cent = centrality(comp)
    if w.mode == "random":
        comps = normalize_heuristics(comp, cent, required=())
        draws = stream(w.seed, "election", label).random(comp.n)
        scores = [NodeScore(v, float(draws[i]), comps[v]) for i, v in enumerate(comp.nodes)]
    else:
        required = [k + 1 for k, x in enumerate(w.w) if x > 0]
        comps = normalize_heuristics(comp, cent, required=required)
        scores = [NodeScore(v, _score(w.w, comps[v]), comps[v]) for v in comp.nodes]
    scores.sort(key=lambda s: (-s.score, s.node))
    return Ranking(tuple(scores), w)


def elect_all(communities: Sequence[Community], w: WeightConfig) -> dict[int, Ranking]:
    """Elect one leader per community; result keyed and ordered by label."""
    return {c.label: elect(c, None, w) for c in sorted(communities, key=lambda c: c.label)}


def ranking_document(g: NetworkGraph, label: int, r: Ranking) -> dict:
    return {
        "label": label,
        "leader": g.name(r.leader),
        "ranking": [
            {"node": g.name(s.node), "score": s.score, "components": list(s.components)}
            for s in r.ordered
        ],
    }
