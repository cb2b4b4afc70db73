"""Command-line front end.

Subcommands: classify (structural classes), frontier (rate-region boundary as
CSV, optionally rendered to a figure), check (channel-class conditions),
report (everything applicable for one channel into a directory).

Exit codes: 0 success (condition verdicts are data, not failures), 2 malformed
channel file, 3 channel validation failure, 4 theorem/channel-class mismatch.
Outputs are plain ASCII with '.' decimal points regardless of locale.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import ChannelClassError
from .channel_model import (
    ChannelDataError,
    ChannelLaw,
    ChannelValidationError,
    channel_digest,
    classify_channel,
    load_channel,
)
from .condition_checkers import check_high_gain, check_more_capable
from .distributions import AuxCardinalities
from .region_builder import Frontier, SearchConfig, compute_frontier

CSV_HEADER = "mu,r1_bits,r2_bits,witness_seed,active_constraint"


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _aux_from_flag(text: str | None) -> AuxCardinalities | None:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("aux-cards must be three comma-separated ints: u,v,t")
    try:
        u, v, t = (int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return AuxCardinalities(u, v, t)


def _config_from_args(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        mu_grid_size=getattr(args, "mu_grid", 21),
        restarts=args.restarts,
        local_steps=args.local_steps,
        step_scale=args.step_scale,
        seed=args.seed,
        aux=_aux_from_flag(args.aux_cards),
        hull=getattr(args, "hull", False),
    )


def _config_doc(cfg: SearchConfig, law: ChannelLaw) -> dict:
    aux = cfg.resolve_aux(law)
    return {
        "mu_grid_size": cfg.mu_grid_size,
        "restarts": cfg.restarts,
        "local_steps": cfg.local_steps,
        "step_scale": cfg.step_scale,
        "seed": cfg.seed,
        "aux_cards": [aux.card_u, aux.card_v, aux.card_t],
        "pareto_tol": cfg.pareto_tol,
        "hull": cfg.hull,
        "threads": cfg.resolve_threads(),
    }


def _manifest(args: argparse.Namespace, channel_file: str, extra: dict) -> dict:
    doc = {
        "tool": "cicpc",
        "version": __version__,
        "command": list(getattr(args, "_argv", [])),
        "channel_file": channel_file,
        "channel_sha256": channel_digest(channel_file),
    }
    doc.update(extra)
    return doc


def _write_json(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, ensure_ascii=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)


def _frontier_csv(frontier: Frontier) -> str:
    lines = [CSV_HEADER]
    for p in frontier.points:
        mu = "" if p.mu is None else _fmt(p.mu)
        seed = ""
        if p.witness is not None and hasattr(p.witness, "restart"):
            seed = str(p.witness.restart)
        lines.append(f"{mu},{_fmt(p.r1)},{_fmt(p.r2)},{seed},{p.active_constraint}")
    return "\n".join(lines) + "\n"


# -- classify ----------------------------------------------------------------


def cmd_classify(args: argparse.Namespace) -> int:
    law = load_channel(args.channel)
    report = classify_channel(law, tol=args.tol)
    doc: dict = {
        "semideterministic": report.semideterministic,
        "degraded": report.degraded,
        "max_deviation": report.max_deviation,
    }
    if report.y1_map is not None:
        doc["y1_map"] = report.y1_map.tolist()
    if report.degrading_kernel is not None:
        doc["degrading_kernel"] = report.degrading_kernel.tolist()
    doc["manifest"] = _manifest(args, args.channel, {"tol": args.tol})
    _write_json(doc, args.out)
    return 0


# -- frontier ----------------------------------------------------------------


def cmd_frontier(args: argparse.Namespace) -> int:
    law = load_channel(args.channel)
    cfg = _config_from_args(args)
    start = time.monotonic()
    frontier = compute_frontier(law, args.theorem, cfg)
    wall = time.monotonic() - start
    out = Path(args.out)
    out.write_text(_frontier_csv(frontier), encoding="ascii")
    manifest = _manifest(
        args,
        args.channel,
        {
            "theorem": args.theorem,
            "search_config": _config_doc(cfg, law),
            "gate_checks": frontier.metadata.extra.get("gate", {}),
            "wall_time_s": wall,
            "points": len(frontier.points),
            "output": str(out),
        },
    )
    Path(str(out) + ".manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=True) + "\n", encoding="ascii"
    )
    if args.plot:
        from .plotting import render_frontiers

        render_frontiers({args.theorem: frontier}, args.plot, title=Path(args.channel).name)
    return 0


# -- check -------------------------------------------------------------------


def _verdict_doc(verdict) -> dict:
    return {
        "condition": verdict.condition,
        "status": verdict.status,
        "margin_bits": verdict.margin_bits,
        "witness": np.asarray(verdict.witness).tolist(),
        "budget": {
            "restarts": verdict.restarts,
            "evaluations": verdict.samples_used,
        },
        "aux_cards": [verdict.aux.card_u, verdict.aux.card_v, verdict.aux.card_t],
    }


def cmd_check(args: argparse.Namespace) -> int:
    law = load_channel(args.channel)
    cfg = _config_from_args(args)
    if args.condition == "more-capable":
        verdicts = [check_more_capable(law, cfg)]
    else:
        verdicts = list(check_high_gain(law, cfg))
    doc = {
        "condition": args.condition,
        "verdicts": [_verdict_doc(v) for v in verdicts],
        "status": verdicts[0].status,
        "margin_bits": verdicts[0].margin_bits,
        "manifest": _manifest(args, args.channel, {"search_config": _config_doc(cfg, law)}),
    }
    _write_json(doc, args.out)
    return 0


# -- report ------------------------------------------------------------------


def cmd_report(args: argparse.Namespace) -> int:
    law = load_channel(args.channel)
    cfg = _config_from_args(args)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    classification = classify_channel(law)
    mc = check_more_capable(law, cfg)
    hg = check_high_gain(law, cfg)
    theorems = ["t1", "t2"]
    if classification.degraded:
        theorems.append("t3")
    if classification.semideterministic and mc.status != "violated":
        theorems.append("t4")
    frontiers: dict[str, Frontier] = {}
    for theorem in theorems:
        frontier = compute_frontier(law, theorem, cfg)
        frontiers[theorem] = frontier
        (outdir / f"frontier_{theorem}.csv").write_text(
            _frontier_csv(frontier), encoding="ascii"
        )
    from .plotting import render_frontiers

    render_frontiers(frontiers, outdir / "regions.png", title=Path(args.channel).name)
    summary = {
        "channel": args.channel,
        "classification": {
            "semideterministic": classification.semideterministic,
            "degraded": classification.degraded,
            "max_deviation": classification.max_deviation,
        },
        "conditions": {
            "more-capable": _verdict_doc(mc),
            "high-gain": [_verdict_doc(v) for v in hg],
        },
        "frontiers": {
            t: {"csv": f"frontier_{t}.csv", "points": len(f.points)}
            for t, f in frontiers.items()
        },
        "figure": "regions.png",
        "manifest": _manifest(args, args.channel, {"search_config": _config_doc(cfg, law)}),
    }
    (outdir / "summary.json").write_text(
        json.dumps(summary, indent=2, ensure_ascii=True) + "\n", encoding="ascii"
    )
    return 0


# -- parser ------------------------------------------------------------------


def _add_search_flags(p: argparse.ArgumentParser, *, frontier: bool) -> None:
    if frontier:
        p.add_argument("--mu-grid", type=int, default=21, dest="mu_grid",
                       help="number of scalarization weights, endpoints included")
        p.add_argument("--hull", action="store_true",
                       help="apply the time-sharing (upper concave) envelope")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--local-steps", type=int, default=400, dest="local_steps")
    p.add_argument("--step-scale", type=float, default=1.0, dest="step_scale")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--aux-cards", default=None, dest="aux_cards",
                   help="auxiliary cardinalities u,v,t (default: min(4,|X1||X2||Xr1|))")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cicpc",
        description="Rate regions of the cognitive interference channel with a "
        "relay link between destinations.",
    )
    parser.add_argument("--version", action="version", version=f"cicpc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="structural channel classes")
    p.add_argument("channel")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("frontier", help="compute a rate-region frontier CSV")
    p.add_argument("channel")
    p.add_argument("--theorem", required=True, choices=["t1", "t2", "t3", "t4"])
    p.add_argument("--out", required=True, help="CSV output path (manifest sidecar added)")
    p.add_argument("--plot", default=None, help="also render the frontier to this image file")
    _add_search_flags(p, frontier=True)
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("check", help="more-capable / high-gain condition verdicts")
    p.add_argument("channel")
    p.add_argument("--condition", required=True, choices=["more-capable", "high-gain"])
    p.add_argument("--out", default=None)
    _add_search_flags(p, frontier=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="classification, checks, frontiers and figure")
    p.add_argument("channel")
    p.add_argument("--out-dir", required=True, dest="out_dir")
    _add_search_flags(p, frontier=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = ["cicpc"] + argv
    try:
        return args.func(args)
    except (ChannelDataError, OSError) as exc:
        print(f"cicpc: channel file error: {exc}", file=sys.stderr)
        return 2
    except ChannelValidationError as exc:
        print(f"cicpc: channel validation failed: {exc}", file=sys.stderr)
        return 3
    except ChannelClassError as exc:
        print(f"cicpc: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
