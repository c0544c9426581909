"""Command-line entry point.

Subcommands: ``generate`` runs the optimizer over a multi-view spec and
writes the result document (optionally with figures and patched chart
documents), ``evaluate`` scores an assignment, ``compare`` scores two
side by side, ``serve`` starts the HTTP API.

Exit codes: 2 spec parse error, 3 graph construction error, 4 no
feasible solution, 5 assignment schema mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import chartdoc
from . import report as report_mod
from .evaluator import SchemaMismatch, assignment_from_doc
from .evaluator import report as eval_report
from .graph import GraphError, build_graph, load_mvspec
from .metrics import ParamsStore, Weights
from .optimizer import DEFAULT_SEED, AllRejected, GaConfig, optimize
from .palettes import load_palettes

EXIT_PARSE = 2
EXIT_GRAPH = 3
EXIT_INFEASIBLE = 4
EXIT_SCHEMA = 5


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", required=True, help="multi-view specification (JSON)")
    p.add_argument("--params", default="params.json", help="normalization extrema file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvcolor",
        description="Generate and evaluate colormaps for multiple-view visualizations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="optimize colormaps for a spec")
    _add_common(g)
    g.add_argument("--palettes", help="seed palette library (JSON)")
    g.add_argument("--out", required=True, help="result document path")
    g.add_argument("--seed", default=str(DEFAULT_SEED), help="RNG seed (integer or 'random')")
    g.add_argument("--pop-size", type=int)
    g.add_argument("--generations", type=int)
    g.add_argument("--n-best", type=int)
    g.add_argument("--step", type=float)
    g.add_argument("--weights", help="w_d,w_gdis,w_hu,w_con")
    g.add_argument("--gallery-size", type=int, help="cap on exported front members")
    g.add_argument("--pick", type=int, default=0, help="front member used for chart patching")
    g.add_argument("--scale-path", default=chartdoc.DEFAULT_SCALE_PATH)
    g.add_argument("--figures", help="directory for swatch/scatter figures and CSV")

    e = sub.add_parser("evaluate", help="score an assignment or generate output")
    _add_common(e)
    e.add_argument("assignment", help="assignment or result document (JSON)")
    e.add_argument("--pick", type=int, default=0, help="member index for result documents")
    e.add_argument("--json", dest="json_out", help="write the report as JSON here")
    e.add_argument("--figures", help="directory for score figures and CSV")

    c = sub.add_parser("compare", help="score two assignments side by side")
    _add_common(c)
    c.add_argument("baseline", help="baseline assignment document")
    c.add_argument("candidate", help="candidate assignment document")
    c.add_argument("--pick", type=int, default=0, help="member index for result documents")
    c.add_argument("--json", dest="json_out")
    c.add_argument("--figures")

    s = sub.add_parser("serve", help="start the HTTP API")
    s.add_argument("--port", type=int, default=8788)
    s.add_argument("--palettes")
    return parser


def _load_graph(spec_path):
    try:
        spec = load_mvspec(spec_path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: cannot parse spec: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    try:
        return spec, build_graph(spec)
    except GraphError as exc:
        print(f"error: graph construction failed: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_GRAPH)


def _case_id(spec_path) -> str:
    return os.path.splitext(os.path.basename(spec_path))[0]


def _parse_weights(text, spec_weights) -> Weights:
    if text:
        parts = [float(x) for x in text.split(",")]
        if len(parts) != 4:
            raise SystemExit("expected --weights w_d,w_gdis,w_hu,w_con")
        return Weights(*parts)
    return Weights.from_mapping(spec_weights)


def cmd_generate(args) -> int:
    spec, graph = _load_graph(args.spec)
    try:
        seeds = load_palettes(args.palettes)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: cannot load palettes: {exc}", file=sys.stderr)
        return EXIT_PARSE

    overrides = dict(spec.ga)
    for key, val in (
        ("pop_size", args.pop_size),
        ("generations", args.generations),
        ("n_best", args.n_best),
        ("step", args.step),
    ):
        if val is not None:
            overrides[key] = val
    if args.seed == "random":
        overrides["seed"] = int.from_bytes(os.urandom(4), "big")
    else:
        overrides["seed"] = int(args.seed)
    cfg = GaConfig.from_mapping(overrides)
    weights = _parse_weights(args.weights, spec.weights)

    store = ParamsStore.load(args.params)
    case_id = _case_id(args.spec)
    try:
        result = optimize(graph, seeds, store, weights, cfg, case_id)
    except AllRejected as exc:
        print(f"error: optimization infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    store.save(args.params)

    members = result.front
    if args.gallery_size:
        members = members[: args.gallery_size]
    decoded = [(m, m.solution.decode(graph, cfg.samples)) for m in members]

    config_echo = {
        "spec": os.path.basename(args.spec),
        "weights": vars(weights),
        "ga": {
            "pop_size": cfg.pop_size,
            "generations": cfg.generations,
            "n_best": cfg.n_best,
            "crossover_rate": cfg.crossover_rate,
            "step": cfg.step,
            "hard_floor_delta_e": cfg.hard_floor_delta_e,
            "samples": cfg.samples,
        },
    }
    doc = report_mod.result_document(
        graph, decoded, case_id, cfg.rng_seed, config_echo, graph.warnings
    )
    report_mod.dump_json(doc, args.out)
    print(f"wrote {args.out}: {len(decoded)} front member(s)")

    pick = max(0, min(args.pick, len(decoded) - 1))
    chart_views = [v for v in spec.views if v.embedded_chart_doc is not None]
    if chart_views:
        charts_dir = os.path.splitext(args.out)[0] + "_charts"
        os.makedirs(charts_dir, exist_ok=True)
        _, colormaps = decoded[pick]
        for view in chart_views:
            patched = chartdoc.patch_color_scale(
                view.embedded_chart_doc, view, colormaps[view.id], args.scale_path
            )
            path = os.path.join(charts_dir, f"{view.id}.json")
            report_mod.dump_json(patched, path)
            print(f"patched chart document: {path}")

    if args.figures:
        written = report_mod.write_generate_report(doc, decoded, graph, args.figures)
        print(f"figures: {len(written)} file(s) in {args.figures}")
    return 0


def _load_assignment(path, graph, pick: int):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if "members" in doc:  # a generate result document
        members = doc["members"]
        if not 0 <= pick < len(members):
            raise SchemaMismatch(f"member index {pick} out of range ({len(members)} members)")
        doc = members[pick]["assignment"]
    elif "assignment" in doc:
        doc = doc["assignment"]
    return assignment_from_doc(doc, graph)


def cmd_evaluate(args) -> int:
    spec, graph = _load_graph(args.spec)
    try:
        colormaps = _load_assignment(args.assignment, graph, args.pick)
    except SchemaMismatch as exc:
        print(f"error: assignment does not match spec: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    rep = eval_report([colormaps], graph, labels=["assignment"])
    print(rep.to_text())
    if args.json_out:
        report_mod.dump_json(rep.to_dict(), args.json_out)
    if args.figures:
        report_mod.write_eval_report(rep, [colormaps], graph, args.figures)
    return 0


def cmd_compare(args) -> int:
    spec, graph = _load_graph(args.spec)
    try:
        base = _load_assignment(args.baseline, graph, args.pick)
        cand = _load_assignment(args.candidate, graph, args.pick)
    except SchemaMismatch as exc:
        print(f"error: assignment does not match spec: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    rep = eval_report([base, cand], graph, labels=["baseline", "candidate"])
    print(rep.to_text())
    if args.json_out:
        report_mod.dump_json(rep.to_dict(), args.json_out)
    if args.figures:
        report_mod.write_eval_report(rep, [base, cand], graph, args.figures)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(palettes_path=args.palettes)
    uvicorn.run(app, host="127.0.0.1", port=args.port)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "generate": cmd_generate,
        "evaluate": cmd_evaluate,
        "compare": cmd_compare,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1


if __name__ == "__main__":
    sys.exit(main())
