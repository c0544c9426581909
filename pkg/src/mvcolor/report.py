"""Result documents, delimited summaries, and figure rendering.

A generate run produces one JSON result document holding every front
member (per-view color assignment, cost vector, evaluation scores) plus
the run configuration echo.  Alongside it, the report path can render a
swatch grid per front member, a scatter of the front in objective
space, and a metrics CSV.
"""

from __future__ import annotations

import csv
import io
import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .color import Color
from .evaluator import EvalReport, assignment_to_doc, score_assignment
from .graph import MvGraph
from .metrics import Colormap


def _quantize(colormaps: dict, graph: MvGraph) -> dict:
    """Round-trip colors through their hex form: the document's scores
    must describe exactly the colors the document serializes."""
    return {
        vid: Colormap(
            cm.kind, cm.keys, tuple(Color.from_hex(c.hex) for c in cm.colors)
        )
        for vid, cm in colormaps.items()
    }


def result_document(
    graph: MvGraph,
    members: list,
    case_id: str,
    seed: int,
    config_echo: dict,
    warnings: list[str],
) -> dict:
    """Assemble the canonical generate-output document.

    ``members`` pairs each costed solution with its decoded colormaps;
    the document must be byte-stable for a fixed seed, so it carries no
    absolute paths or timestamps.
    """
    out_members = []
    for entry, colormaps in members:
        quantized = _quantize(colormaps, graph)
        scores = score_assignment(quantized, graph)
        out_members.append(
            {
                "assignment": assignment_to_doc(quantized, graph),
                "costs": entry.costs.to_dict(),
                "scores": scores.to_dict(),
            }
        )
    return {
        "case_id": case_id,
        "seed": seed,
        "config": config_echo,
        "groups": [
            {
                "id": g.id,
                "views": list(g.view_ids),
                "kind": g.kind,
                "domain": list(g.domain),
            }
            for g in graph.groups
        ],
        "hierarchy": [
            {
                "parent_group": l.parent_group,
                "parent_key": l.parent_key,
                "child_group": l.child_group,
            }
            for l in graph.hierarchy_links
        ],
        "members": out_members,
        "warnings": list(warnings),
    }


def dump_json(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- delimited output ------------------------------------------------------


def front_csv(doc: dict) -> str:
    """One row per front member with objectives and evaluation scores."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["member", "c_sv", "c_mv", "overall_wcd", "prs", "mean_hqs"])
    for i, member in enumerate(doc["members"]):
        scores = member["scores"]
        writer.writerow(
            [
                i,
                member["costs"]["c_sv"],
                member["costs"]["c_mv"],
                scores["overall_wcd"],
                scores["prs"],
                scores["mean_hqs"],
            ]
        )
    return buf.getvalue()


def report_csv(rep: EvalReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["metric"] + [s.label for s in rep.scores] + (["delta"] if rep.deltas else []))
    rows = [
        ("overall_wcd", [s.overall_wcd for s in rep.scores]),
        ("prs", [s.prs for s in rep.scores]),
        ("mean_hqs", [s.mean_hqs for s in rep.scores]),
    ]
    for name, vals in rows:
        row = [name] + vals
        if rep.deltas:
            row.append(rep.deltas.get(name))
        writer.writerow(row)
    for vid in rep.scores[0].per_view_wcd:
        row = [f"wcd_{vid}"] + [s.per_view_wcd[vid] for s in rep.scores]
        if rep.deltas:
            row.append(None)
        writer.writerow(row)
    return buf.getvalue()


# -- figures ---------------------------------------------------------------


def render_swatches(colormaps: dict[str, Colormap], graph: MvGraph, path) -> None:
    """One labeled swatch row per view."""
    views = graph.view_order
    fig, axes = plt.subplots(len(views), 1, figsize=(8, 0.6 * len(views) + 0.6))
    if len(views) == 1:
        axes = [axes]
    for ax, vid in zip(axes, views):
        cm = colormaps[vid]
        for i, color in enumerate(cm.colors):
            ax.add_patch(plt.Rectangle((i, 0), 0.92, 1, color=(color.r, color.g, color.b)))
        ax.set_xlim(0, max(len(cm), 1))
        ax.set_ylim(0, 1)
        ax.set_ylabel(vid, rotation=0, ha="right", va="center", fontsize=8)
        ax.set_xticks([])
        ax.set_yticks([])
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_front_scatter(doc: dict, path) -> None:
    """Front members in objective space (consistency vs effectiveness)."""
    xs = [m["costs"]["c_sv"] for m in doc["members"]]
    ys = [m["costs"]["c_mv"] for m in doc["members"]]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.scatter(xs, ys, c="#4477aa")
    for i, (x, y) in enumerate(zip(xs, ys)):
        ax.annotate(str(i), (x, y), textcoords="offset points", xytext=(4, 3), fontsize=8)
    ax.set_xlabel("single-view cost")
    ax.set_ylabel("multi-view cost")
    ax.set_title("non-dominated solutions")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_score_bars(rep: EvalReport, path) -> None:
    """Grouped bars over the three headline scores."""
    metrics = ["overall_wcd", "prs", "mean_hqs"]
    labels = [s.label for s in rep.scores]
    values = [
        [getattr(s, m) or 0.0 for m in ["overall_wcd", "prs", "mean_hqs"]]
        for s in rep.scores
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    width = 0.8 / len(values)
    for i, (label, vals) in enumerate(zip(labels, values)):
        xs = [j + i * width for j in range(len(metrics))]
        ax.bar(xs, vals, width=width, label=label)
    ax.set_xticks([j + width * (len(values) - 1) / 2 for j in range(len(metrics))])
    ax.set_xticklabels(metrics)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_generate_report(doc: dict, members, graph: MvGraph, figures_dir) -> list[str]:
    """Render figures and the CSV for a generate run; returns file names."""
    os.makedirs(figures_dir, exist_ok=True)
    written = []
    csv_path = os.path.join(figures_dir, "front.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(front_csv(doc))
    written.append(csv_path)
    scatter = os.path.join(figures_dir, "front_scatter.png")
    render_front_scatter(doc, scatter)
    written.append(scatter)
    for i, (_, colormaps) in enumerate(members):
        p = os.path.join(figures_dir, f"member_{i:03d}_swatches.png")
        render_swatches(colormaps, graph, p)
        written.append(p)
    return written


def write_eval_report(rep: EvalReport, assignments, graph: MvGraph, figures_dir) -> list[str]:
    os.makedirs(figures_dir, exist_ok=True)
    written = []
    csv_path = os.path.join(figures_dir, "scores.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(report_csv(rep))
    written.append(csv_path)
    bars = os.path.join(figures_dir, "scores.png")
    render_score_bars(rep, bars)
    written.append(bars)
    for score, colormaps in zip(rep.scores, assignments):
        p = os.path.join(figures_dir, f"{score.label}_swatches.png")
        render_swatches(colormaps, graph, p)
        written.append(p)
    return written
