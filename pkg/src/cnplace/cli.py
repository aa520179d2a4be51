"""Command-line pipeline: communities, elect, fit, synth, report.

Exit codes: 0 ok, 2 parse/usage error, 3 missing data, 4 numeric or
degenerate input.  Every output file carries a manifest with the tool
version, a hash of the effective configuration and the seed; the output
directory is not part of the hash, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .community import (
    CommunityError,
    DEFAULT_MAX_ITERS,
    communities_document,
    communities_from_document,
    find_communities,
    random_partition,
)
from .election import (
    MissingAttributeError,
    WeightConfig,
    WeightConfigError,
    elect_all,
    load_weight_config,
    missing_attributes,
    ranking_document,
)
from .graph import GraphError, NetworkGraph, prune_leaves
from .metrics import compare_partitions, ecdf_csv, placement_report
from .netmodel import (
    FitError,
    GevParams,
    Kappa4Params,
    fit_samples,
    params_from_dict,
    synthesize_attributes,
)
from .netmodel.fitting import FAMILIES
from .netmodel.kappa import feasible
from .netmodel.lmoments import LMomentError
from .netmodel.rng import stream
from .snapshot import SnapshotError, parse_snapshot, snapshot_document

log = logging.getLogger("cnplace")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MISSING = 3
EXIT_NUMERIC = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def manifest(command: str, config: dict, seed) -> dict:
    return {
        "tool": "cnplace",
        "version": __version__,
        "command": command,
        "config_hash": _sha256(_canonical(config).encode()),
        "seed": seed,
    }


def _manifest_lines(m: dict) -> list[str]:
    return [f"{k}={m[k]}" for k in ("tool", "version", "command", "config_hash", "seed")]


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n")


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_PARSE) from None


def _format_for(args) -> str:
    if args.format:
        return args.format
    return "csv" if str(args.input).lower().endswith(".csv") else "json"


def load_graph(args) -> tuple[NetworkGraph, dict]:
    if not args.input:
        raise CliError("--input is required", EXIT_PARSE)
    raw = _read_bytes(args.input)
    fmt = _format_for(args)
    g = parse_snapshot(raw, fmt)
    if not args.keep_leaves:
        g = prune_leaves(g)
    cfg = {"input_sha256": _sha256(raw), "format": fmt, "keep_leaves": bool(args.keep_leaves)}
    return g, cfg


def _load_json(path: str):
    try:
        return json.loads(_read_bytes(path))
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}", EXIT_PARSE) from None


def load_weights(args) -> WeightConfig:
    spec = args.weights or "b3"
    text = spec
    if Path(spec).is_file():
        text = _read_bytes(spec).decode()
    try:
        return load_weight_config(text, args.seed)
    except json.JSONDecodeError as exc:
        raise CliError(f"weights: {exc}", EXIT_PARSE) from None
    except WeightConfigError as exc:
        raise CliError(f"weights: {exc}", EXIT_PARSE) from None


def _load_params(path: str, family: str):
    doc = _load_json(path)
    if not isinstance(doc, dict) or "params" not in doc:
        raise CliError(f"{path}: expected a fit document with 'family' and 'params'", EXIT_NUMERIC)
    fam = doc.get("family", family)
    try:
        p = params_from_dict(fam, doc["params"])
    except (FitError, ValueError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_NUMERIC) from None
    if family == "kappa4" and isinstance(p, GevParams):
        p = Kappa4Params(p.mu, p.sigma, p.k, 0.0)
    if family == "kappa4" and not isinstance(p, Kappa4Params):
        raise CliError(f"{path}: bandwidth model must be kappa4 or gev, got {fam}", EXIT_NUMERIC)
    if family == "gev" and not isinstance(p, GevParams):
        raise CliError(f"{path}: RTT model must be gev, got {fam}", EXIT_NUMERIC)
    if isinstance(p, Kappa4Params) and not feasible(p.k, p.h):
        raise CliError(f"{path}: Kappa parameters outside the valid region", EXIT_NUMERIC)
    return p, doc["params"]


def _require_seed(args, why: str) -> int:
    if args.seed is None:
        raise CliError(f"--seed is required for {why}", EXIT_PARSE)
    return args.seed


def _synth_models(args):
    if not (args.bw_params and args.rtt_params):
        return None
    bw, bw_raw = _load_params(args.bw_params, "kappa4")
    rtt, rtt_raw = _load_params(args.rtt_params, "gev")
    return bw, rtt, {"bw": bw_raw, "rtt": rtt_raw}


def _phase_one(g: NetworkGraph, args):
    comms, state = find_communities(g, args.max_iters)
    return comms, state


def _load_or_find_communities(g, args):
    if getattr(args, "communities", None):
        doc = _load_json(args.communities)
        raw = _read_bytes(args.communities)
        return communities_from_document(g, doc), {"communities_sha256": _sha256(raw)}, None
    comms, state = _phase_one(g, args)
    return comms, {"max_iters": args.max_iters}, state


def _prepare_attributes(g, w, args, cfg):
    """Synthesize missing measurements when models are given, else insist on them."""
    models = _synth_models(args)
    if models is not None:
        seed = _require_seed(args, "attribute synthesis")
        bw, rtt, raw = models
        cfg["synthesis"] = raw
        return synthesize_attributes(g, bw, rtt, seed)
    missing = missing_attributes(g, w)
    if missing:
        raise CliError("missing data: " + _describe_missing(g, missing), EXIT_MISSING)
    return g


def _describe_missing(g, missing: dict) -> str:
    parts = []
    for fld, nodes in missing.items():
        names = ", ".join(g.name(v) for v in nodes[:20])
        parts.append(f"{fld} ({len(nodes)} nodes: {names}{' ...' if len(nodes) > 20 else ''})")
    return "; ".join(parts)


def _comm_stats(comms, state) -> dict:
    d = {"count": len(comms), "sizes": [c.size for c in comms]}
    if state is not None:
        d["supersteps"] = state.iteration
        d["converged"] = not state.changed
    return d


def cmd_communities(args) -> int:
    g, cfg = load_graph(args)
    cfg.update(command="communities", max_iters=args.max_iters)
    comms, state = _phase_one(g, args)
    out = _outdir(args)
    m = manifest("communities", cfg, args.seed)
    doc = {"manifest": m, **_comm_stats(comms, state), "communities": communities_document(g, comms)}
    _write_json(out / "communities.json", doc)
    print(json.dumps({k: v for k, v in doc.items() if k not in ("communities", "manifest")}))
    return EXIT_OK


def _election_outputs(g, comms, rankings, w, args, m, prefix="placement"):
    out = _outdir(args)
    report = placement_report(comms, rankings, args.include_leader)
    doc = {
        "manifest": m,
        "weights": w.to_dict(),
        "include_leader": bool(args.include_leader),
        "summary": report.summary(),
        "report": report.to_rows(g),
        "rankings": [ranking_document(g, lab, r) for lab, r in rankings.items()],
    }
    _write_json(out / f"{prefix}.json", doc)
    (out / f"{prefix}.csv").write_text(report.to_csv(g, _manifest_lines(m)))
    return report


def cmd_elect(args) -> int:
    g, cfg = load_graph(args)
    w = load_weights(args)
    if w.mode == "random":
        _require_seed(args, "random election")
    g = _prepare_attributes(g, w, args, cfg)
    comms, ccfg, _ = _load_or_find_communities(g, args)
    cfg.update(ccfg, command="elect", weights=w.to_dict(), include_leader=bool(args.include_leader))
    rankings = elect_all(comms, w)
    m = manifest("elect", cfg, args.seed)
    report = _election_outputs(g, comms, rankings, w, args, m)
    print(json.dumps(report.summary()))
    return EXIT_OK


def _read_samples(path: str) -> list[float]:
    text = _read_bytes(path).decode()
    xs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            xs.append(float(line))
        except ValueError:
            raise CliError(f"{path}: line {lineno}: not a number: {line!r}", EXIT_PARSE) from None
    return xs


def cmd_fit(args) -> int:
    if not args.input:
        raise CliError("--input is required", EXIT_PARSE)
    xs = _read_samples(args.input)
    fitted = fit_samples(xs, args.family)
    cfg = {"command": "fit", "family": args.family, "input_sha256": _sha256(_read_bytes(args.input))}
    doc = {"manifest": manifest("fit", cfg, args.seed), **fitted.to_dict()}
    if fitted.fallback:
        log.warning("Kappa fit did not converge; fell back to GEV (h = 0)")
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if args.out:
        (_outdir(args) / f"fit_{args.family}.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_synth(args) -> int:
    g, cfg = load_graph(args)
    seed = _require_seed(args, "synth")
    models = _synth_models(args)
    if models is None:
        raise CliError("synth needs --bw-params and --rtt-params", EXIT_PARSE)
    bw, rtt, raw = models
    cfg.update(command="synth", synthesis=raw)
    g2 = synthesize_attributes(g, bw, rtt, seed)
    doc = {"manifest": manifest("synth", cfg, seed), **snapshot_document(g2)}
    _write_json(_outdir(args) / "snapshot.json", doc)
    filled = sum(1 for e in g2.edges() if g2.edge(*e).synthetic)
    print(json.dumps({"nodes": g2.n, "links": g2.m, "synthetic_links": filled}))
    return EXIT_OK


def cmd_report(args) -> int:
    g, cfg = load_graph(args)
    w = load_weights(args)
    if w.mode == "random":
        _require_seed(args, "random election")
    g = _prepare_attributes(g, w, args, cfg)
    comms, state = _phase_one(g, args)
    if args.baseline:
        raw = _read_bytes(args.baseline)
        baseline = communities_from_document(g, _load_json(args.baseline), ignore_unknown=True)
        cfg["baseline_sha256"] = _sha256(raw)
    else:
        seed = _require_seed(args, "the random baseline partition")
        baseline = random_partition(g, [c.size for c in comms], stream(seed, "baseline"))
        cfg["baseline"] = "random-equal-size"
    cfg.update(command="report", max_iters=args.max_iters, weights=w.to_dict(),
               include_leader=bool(args.include_leader))
    m = manifest("report", cfg, args.seed)
    out = _outdir(args)
    _write_json(out / "communities.json",
                {"manifest": m, **_comm_stats(comms, state), "communities": communities_document(g, comms)})

    paired = compare_partitions(g, comms, baseline, w, args.include_leader)
    _election_outputs(g, comms, paired.rankings_a, w, args, m, prefix="placement")
    _election_outputs(g, baseline, paired.rankings_b, w, args, m, prefix="baseline_placement")
    comparison = {"manifest": m, "phase_one": paired.a.summary(), "baseline": paired.b.summary()}
    _write_json(out / "comparison.json", comparison)
    lines = _manifest_lines(m)
    for tag, rep in (("phase_one", paired.a), ("baseline", paired.b)):
        (out / f"ecdf_hops_{tag}.csv").write_text(ecdf_csv(rep.hop_samples, lines, "hops"))
        (out / f"ecdf_bw_{tag}.csv").write_text(ecdf_csv(rep.bw_samples, lines, "bandwidth_mbps"))
        (out / f"ecdf_rtt_{tag}.csv").write_text(ecdf_csv(rep.rtt_samples, lines, "rtt_ms"))
    print(json.dumps({k: v for k, v in comparison.items() if k != "manifest"}))
    return EXIT_OK


def _outdir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="snapshot (json/csv) or samples file")
    common.add_argument("--format", choices=("json", "csv"), help="snapshot format (default: by extension)")
    common.add_argument("--seed", type=int, help="root seed for all randomness")
    common.add_argument("--out", help="output directory (default: current directory)")
    common.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS,
                        help="label propagation superstep cap (default: %(default)s)")
    common.add_argument("--weights", help="weight spec (b3, a1+b2:0.6, 1,0,0,0,0, random) or JSON file")
    common.add_argument("--baseline", help="communities JSON used as the comparison partition")
    common.add_argument("--include-leader", action="store_true",
                        help="count the leader (distance 0) in the hops mean")
    common.add_argument("--keep-leaves", action="store_true", help="skip degree<=1 pruning")
    common.add_argument("-v", "--verbose", action="store_true")

    models = argparse.ArgumentParser(add_help=False)
    models.add_argument("--bw-params", help="fit JSON for the bandwidth model (kappa4)")
    models.add_argument("--rtt-params", help="fit JSON for the RTT model (gev)")

    parser = argparse.ArgumentParser(prog="cnplace", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cnplace {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("communities", parents=[common], help="Phase One: label propagation")
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("elect", parents=[common, models], help="Phase Two: leader election")
    p.add_argument("--communities", help="communities.json from the communities command")
    p.set_defaults(func=cmd_elect)

    p = sub.add_parser("fit", parents=[common], help="fit a distribution to one-per-line samples")
    p.add_argument("--family", choices=FAMILIES, default="gev")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("synth", parents=[common, models], help="fill missing link/node measurements")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("report", parents=[common, models],
                       help="communities + election + comparison against a baseline partition")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.max_iters < 1:
        parser.error("--max-iters must be >= 1")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"cnplace: error: {exc}", file=sys.stderr)
        return exc.code
    except MissingAttributeError as exc:
        print(f"cnplace: error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except SnapshotError as exc:
        print(f"cnplace: error: snapshot: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CommunityError, GraphError) as exc:
        print(f"cnplace: error: partition: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (FitError, LMomentError) as exc:
        print(f"cnplace: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
