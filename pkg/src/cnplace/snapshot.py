"""Network snapshot ingestion and serialization.

JSON snapshot::

    {"nodes": [{"id": "n1", "working": true, "is_server": false,
                "device_count": 2, "availability_pct": 99.1, "latency_ms": 4.2}],
     "links": [{"a": "n1", "b": "n2", "working": true,
                "bandwidth_mbps": 18.5, "rtt_ms": 3.1}]}

``availability_pct``, ``latency_ms``, ``bandwidth_mbps`` and ``rtt_ms`` are
optional.  A link becomes an edge only when it and both of its end nodes are
working.  Repeated links between the same pair collapse into one edge keeping
the largest bandwidth and the smallest RTT.

CSV edge list (header required)::

    a,b,working,bandwidth_mbps,rtt_ms
    n1,n2,1,18.5,3.1

Only ``a`` and ``b`` are mandatory columns; empty cells mean "unknown".
Nodes are the link endpoints in order of first appearance, all working,
single-device and non-server.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

from .graph import EdgeAttributes, NetworkGraph, NodeAttributes, edge_key

FORMATS = ("json", "csv")


class SnapshotError(Exception):
    """Base class for snapshot problems."""


class SnapshotParseError(SnapshotError):
    pass


class SnapshotSchemaError(SnapshotError):
    pass


def parse_snapshot(data: bytes | str, format: str = "json") -> NetworkGraph:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SnapshotParseError(f"snapshot is not valid UTF-8: {exc}") from None
    if format == "json":
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SnapshotParseError(
                f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
        return graph_from_document(doc)
    if format == "csv":
        return _parse_csv(data)
    raise ValueError(f"unknown snapshot format {format!r}; expected one of {FORMATS}")


def read_snapshot(path, format: str | None = None) -> NetworkGraph:
    if format is None:
        format = "csv" if str(path).lower().endswith(".csv") else "json"
    with open(path, "rb") as fh:
        return parse_snapshot(fh.read(), format)


def _field(obj: dict, key: str, where: str, kind, required=True, default=None):
    if key not in obj or obj[key] is None:
        if required:
            raise SnapshotSchemaError(f"{where}.{key}: missing required field")
        return default
    val = obj[key]
    if kind is bool:
        ok = isinstance(val, bool)
    elif kind is int:
        ok = isinstance(val, int) and not isinstance(val, bool)
    elif kind is float:
        ok = isinstance(val, (int, float)) and not isinstance(val, bool)
    else:
        ok = isinstance(val, kind)
    if not ok:
        raise SnapshotSchemaError(
            f"{where}.{key}: expected {kind.__name__}, got {type(val).__name__}"
        )
    return float(val) if kind is float else val


def graph_from_document(doc: Any) -> NetworkGraph:
    """Build a graph from an already-decoded JSON snapshot document."""
    if not isinstance(doc, dict):
        raise SnapshotSchemaError("top level: expected an object with 'nodes' and 'links'")
    raw_nodes = doc.get("nodes", [])
    raw_links = doc.get("links", [])
    if not isinstance(raw_nodes, list) or not isinstance(raw_links, list):
        raise SnapshotSchemaError("top level: 'nodes' and 'links' must be arrays")

    ids: dict[str, int] = {}
    seen: set[str] = set()
    attrs: dict[int, NodeAttributes] = {}
    for i, obj in enumerate(raw_nodes):
        where = f"nodes[{i}]"
        if not isinstance(obj, dict):
            raise SnapshotSchemaError(f"{where}: expected an object")
        ext = _field(obj, "id", where, str)
        if ext in seen:
            raise SnapshotSchemaError(f"{where}.id: duplicate node id {ext!r}")
        seen.add(ext)
        working = _field(obj, "working", where, bool)
        is_server = _field(obj, "is_server", where, bool)
        devices = _field(obj, "device_count", where, int)
        if devices < 1:
            raise SnapshotSchemaError(f"{where}.device_count: must be >= 1, got {devices}")
        avail = _field(obj, "availability_pct", where, float, required=False)
        if avail is not None and not 0.0 <= avail <= 100.0:
            raise SnapshotSchemaError(f"{where}.availability_pct: must lie in [0, 100]")
        latency = _field(obj, "latency_ms", where, float, required=False)
        if latency is not None and latency < 0:
            raise SnapshotSchemaError(f"{where}.latency_ms: must be >= 0")
        synthetic = _field(obj, "synthetic", where, bool, required=False, default=False)
        if not working:
            continue
        nid = len(ids)
        ids[ext] = nid
        attrs[nid] = NodeAttributes(
            device_count=devices,
            is_server=is_server,
            availability=None if avail is None else avail / 100.0,
            latency_ms=latency,
            synthetic=synthetic,
        )

    edges: dict[tuple[int, int], EdgeAttributes] = {}
    for i, obj in enumerate(raw_links):
        where = f"links[{i}]"
        if not isinstance(obj, dict):
            raise SnapshotSchemaError(f"{where}: expected an object")
        a = _field(obj, "a", where, str)
        b = _field(obj, "b", where, str)
        for end in (a, b):
            if end not in seen:
                raise SnapshotSchemaError(f"{where}: references unknown node {end!r}")
        working = _field(obj, "working", where, bool)
        bw = _field(obj, "bandwidth_mbps", where, float, required=False)
        rtt = _field(obj, "rtt_ms", where, float, required=False)
        synthetic = _field(obj, "synthetic", where, bool, required=False, default=False)
        if bw is not None and bw <= 0:
            raise SnapshotSchemaError(f"{where}.bandwidth_mbps: must be > 0")
        if rtt is not None and rtt <= 0:
            raise SnapshotSchemaError(f"{where}.rtt_ms: must be > 0")
        if not working or a not in ids or b not in ids or a == b:
            continue
        key = edge_key(ids[a], ids[b])
        _merge_link(edges, key, EdgeAttributes(bw, rtt, synthetic))

    return NetworkGraph.from_edges(
        edges,
        nodes=range(len(ids)),
        attrs=attrs,
        edge_attrs=edges,
        names={nid: ext for ext, nid in ids.items()},
    )


def _merge_link(edges, key, new: EdgeAttributes) -> None:
    old = edges.get(key)
    if old is None:
        edges[key] = new
        return
    bws = [x for x in (old.bandwidth_mbps, new.bandwidth_mbps) if x is not None]
    rtts = [x for x in (old.rtt_ms, new.rtt_ms) if x is not None]
    edges[key] = EdgeAttributes(
        bandwidth_mbps=max(bws) if bws else None,
        rtt_ms=min(rtts) if rtts else None,
        synthetic=old.synthetic and new.synthetic,
    )


_TRUE = {"1", "true", "yes", "y", "t"}
_FALSE = {"0", "false", "no", "n", "f"}


def _parse_csv(text: str) -> NetworkGraph:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return NetworkGraph.from_edges([])
    cols = [c.strip() for c in reader.fieldnames]
    reader.fieldnames = cols
    for need in ("a", "b"):
        if need not in cols:
            raise SnapshotSchemaError(f"csv header: missing column {need!r}")

    ids: dict[str, int] = {}
    edges: dict[tuple[int, int], EdgeAttributes] = {}

    def num(row, col, line):
        cell = (row.get(col) or "").strip()
        if not cell:
            return None
        try:
            return float(cell)
        except ValueError:
            raise SnapshotParseError(f"line {line}, column {col!r}: not a number: {cell!r}") from None

    for row in reader:
        line = reader.line_num
        a = (row.get("a") or "").strip()
        b = (row.get("b") or "").strip()
        if not a or not b:
            raise SnapshotSchemaError(f"line {line}: empty endpoint")
        flag = (row.get("working") or "1").strip().lower()
        if flag not in _TRUE | _FALSE:
            raise SnapshotParseError(f"line {line}, column 'working': bad boolean {flag!r}")
        bw = num(row, "bandwidth_mbps", line)
        rtt = num(row, "rtt_ms", line)
        if (bw is not None and bw <= 0) or (rtt is not None and rtt <= 0):
            raise SnapshotSchemaError(f"line {line}: bandwidth_mbps and rtt_ms must be > 0")
        for end in (a, b):
            ids.setdefault(end, len(ids))
        if flag in _FALSE or a == b:
            continue
        _merge_link(edges, edge_key(ids[a], ids[b]), EdgeAttributes(bw, rtt))

    return NetworkGraph.from_edges(
        edges,
        nodes=range(len(ids)),
        edge_attrs=edges,
        names={nid: ext for ext, nid in ids.items()},
    )


def snapshot_document(g: NetworkGraph) -> dict:
    """Inverse of :func:`graph_from_document` (working nodes and links only)."""
    nodes = []
    for v in g.nodes:
        a = g.attrs[v]
        obj = {
            "id": g.name(v),
            "working": True,
            "is_server": a.is_server,
            "device_count": a.device_count,
        }
        if a.availability is not None:
            obj["availability_pct"] = a.availability * 100.0
        if a.latency_ms is not None:
            obj["latency_ms"] = a.latency_ms
        if a.synthetic:
            obj["synthetic"] = True
        nodes.append(obj)
    links = []
    for u, v in g.edges():
        ea = g.edge(u, v)
        obj = {"a": g.name(u), "b": g.name(v), "working": True}
        if ea.bandwidth_mbps is not None:
            obj["bandwidth_mbps"] = ea.bandwidth_mbps
        if ea.rtt_ms is not None:
            obj["rtt_ms"] = ea.rtt_ms
        if ea.synthetic:
            obj["synthetic"] = True
        links.append(obj)
    return {"nodes": nodes, "links": links}
