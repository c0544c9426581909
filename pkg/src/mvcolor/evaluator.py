"""Quantitative scoring of colormap assignments.

Three scores summarize an assignment: worst-case within-view
discriminability (WCD), the minimum cross-view difference between
colors of unrelated entities (PRS), and a hierarchy quality score (HQS)
balancing child discriminability against hue fidelity to the parent.
Reports compare up to two assignments side by side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .color import Color, ciede2000, circular_hue_distance
from .graph import MvGraph
from .metrics import Colormap, entity_of


class SchemaMismatch(Exception):
    """An assignment document does not match the specification's views."""


def wcd(cm: Colormap) -> Optional[float]:
    """Minimum pairwise difference within one colormap; None below 2 colors."""
    if len(cm) < 2:
        return None
    best = None
    cs = cm.colors
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            d = ciede2000(cs[i], cs[j])
            if best is None or d < best:
                best = d
    return best


def overall_wcd(colormaps: Mapping[str, Colormap], graph: MvGraph) -> Optional[float]:
    """Minimum WCD across views with discrete colormaps.

    Continuous ramps are deliberately smooth, so their small adjacent
    steps would swamp the minimum; they are scored per view but excluded
    here.
    """
    values = []
    for vid in graph.view_order:
        cm = colormaps[vid]
        if cm.kind != "discrete":
            continue
        v = wcd(cm)
        if v is not None:
            values.append(v)
    return min(values) if values else None


def prs(colormaps: Mapping[str, Colormap], graph: MvGraph) -> Optional[float]:
    """Minimum cross-view difference between colors of different entities.

    This measures how easily *parallel* categorical entities could be
    confused across views, so only discrete colormaps participate:
    continuous ramps encode one value gradient, not parallel entities.
    Views drawing on the same shared colormap are skipped (separation
    inside one palette is what WCD measures), and so are views in
    parent/descendant groups: a child colormap intentionally stays
    close to its parent's hue, which is what HQS measures.  Colors
    sharing an entity never count.
    """
    order = [v for v in graph.view_order if colormaps[v].kind == "discrete"]
    best = None
    for i, a in enumerate(order):
        for b in order[i + 1 :]:
            if graph.group_of(a).id == graph.group_of(b).id:
                continue
            if graph.hierarchy_related(a, b):
                continue
            for ka, ca in colormaps[a].items():
                ea = entity_of(ka)
                for kb, cb in colormaps[b].items():
                    if ea == entity_of(kb):
                        continue
                    d = ciede2000(ca, cb)
                    if best is None or d < best:
                        best = d
    return best


def hqs(parent: Color, children: Colormap) -> tuple[float, float, float]:
    """(score, child WCD, hue deviation) for one hierarchy family.

    Child WCD is defined as 0 for fewer than two children; the hue
    deviation is the mean circular distance between the parent's hue
    and each child's.
    """
    child_wcd = wcd(children) or 0.0
    ph = parent.hue_hsl
    hhd = sum(circular_hue_distance(ph, c.hue_hsl) for c in children.colors) / len(children)
    return child_wcd / (1.0 + hhd), child_wcd, hhd


@dataclass
class HierarchyScore:
    parent_group: str
    parent_key: str
    child_group: str
    hqs: float
    child_wcd: float
    hhd: float


@dataclass
class AssignmentScores:
    label: str
    per_view_wcd: dict  # view id -> float | None
    overall_wcd: Optional[float]
    prs: Optional[float]
    hierarchy: list[HierarchyScore]

    @property
    def mean_hqs(self) -> Optional[float]:
        if not self.hierarchy:
            return None
        return sum(h.hqs for h in self.hierarchy) / len(self.hierarchy)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "per_view_wcd": self.per_view_wcd,
            "overall_wcd": self.overall_wcd,
            "prs": self.prs,
            "hierarchy": [
                {
                    "parent_group": h.parent_group,
                    "parent_key": h.parent_key,
                    "child_group": h.child_group,
                    "hqs": h.hqs,
                    "child_wcd": h.child_wcd,
                    "hhd": h.hhd,
                }
                for h in self.hierarchy
            ],
            "mean_hqs": self.mean_hqs,
        }


@dataclass
class EvalReport:
    scores: list[AssignmentScores]
    deltas: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"scores": [s.to_dict() for s in self.scores], "deltas": self.deltas}

    def to_text(self) -> str:
        lines = []
        header = f"{'metric':<22}" + "".join(f"{s.label:>14}" for s in self.scores)
        if self.deltas:
            header += f"{'delta':>14}"
        lines.append(header)
        lines.append("-" * len(header))

        def fmt(v):
            return f"{v:>14.4f}" if v is not None else f"{'n/a':>14}"

        rows = [
            ("overall WCD", [s.overall_wcd for s in self.scores], "overall_wcd"),
            ("PRS", [s.prs for s in self.scores], "prs"),
            ("mean HQS", [s.mean_hqs for s in self.scores], "mean_hqs"),
        ]
        for name, values, key in rows:
            line = f"{name:<22}" + "".join(fmt(v) for v in values)
            if self.deltas:
                line += fmt(self.deltas.get(key))
            lines.append(line)
        for vid in self.scores[0].per_view_wcd:
            line = f"{'WCD ' + vid:<22}" + "".join(
                fmt(s.per_view_wcd[vid]) for s in self.scores
            )
            lines.append(line)
        for s in self.scores:
            for h in s.hierarchy:
                lines.append(
                    f"{'HQS ' + h.parent_key + '->' + h.child_group:<22}"
                    f"{h.hqs:>14.4f}  (child WCD {h.child_wcd:.4f}, hue dev {h.hhd:.4f})"
                    f"  [{s.label}]"
                )
        return "\n".join(lines)


def score_assignment(
    colormaps: Mapping[str, Colormap], graph: MvGraph, label: str = "assignment"
) -> AssignmentScores:
    per_view = {vid: wcd(colormaps[vid]) for vid in graph.view_order}
    hier = []
    for link in graph.hierarchy_links:
        parent_cm = None
        for vid in graph.group(link.parent_group).view_ids:
            cm = colormaps[vid]
            keyed = {entity_of(k): c for k, c in cm.items()}
            if link.parent_key in keyed:
                parent_cm = keyed[link.parent_key]
                break
        if parent_cm is None:
            raise SchemaMismatch(
                f"no view in group {link.parent_group!r} carries parent entity "
                f"{link.parent_key!r}"
            )
        child_view = graph.group(link.child_group).view_ids[0]
        score, cw, hhd = hqs(parent_cm, colormaps[child_view])
        hier.append(
            HierarchyScore(link.parent_group, link.parent_key, link.child_group, score, cw, hhd)
        )
    return AssignmentScores(
        label=label,
        per_view_wcd=per_view,
        overall_wcd=overall_wcd(colormaps, graph),
        prs=prs(colormaps, graph),
        hierarchy=hier,
    )


def report(
    assignments: list[Mapping[str, Colormap]],
    graph: MvGraph,
    labels: Optional[list[str]] = None,
) -> EvalReport:
    """Score one or two assignments; with two, deltas are second minus first."""
    if not 1 <= len(assignments) <= 2:
        raise ValueError("report takes one or two assignments")
    labels = labels or ["baseline", "candidate"][: len(assignments)]
    scores = [
        score_assignment(cm, graph, label) for cm, label in zip(assignments, labels)
    ]
    deltas = {}
    if len(scores) == 2:
        a, b = scores

        def delta(x, y):
            return None if x is None or y is None else y - x

        deltas = {
            "overall_wcd": delta(a.overall_wcd, b.overall_wcd),
            "prs": delta(a.prs, b.prs),
            "mean_hqs": delta(a.mean_hqs, b.mean_hqs),
        }
    return EvalReport(scores=scores, deltas=deltas)


# -- assignment documents --------------------------------------------------


def assignment_to_doc(colormaps: Mapping[str, Colormap], graph: MvGraph) -> dict:
    """Serializable per-view entity -> hex mapping."""
    return {
        "views": {
            vid: {
                "kind": colormaps[vid].kind,
                "keys": list(colormaps[vid].keys),
                "colors": [c.hex for c in colormaps[vid].colors],
            }
            for vid in graph.view_order
        }
    }


def assignment_from_doc(doc: dict, graph: MvGraph) -> dict[str, Colormap]:
    """Parse and validate an assignment document against the graph."""
    views = doc.get("views")
    if not isinstance(views, dict):
        raise SchemaMismatch("assignment document has no 'views' mapping")
    out: dict[str, Colormap] = {}
    for vid in graph.view_order:
        view = graph.views[vid]
        entry = views.get(vid)
        if entry is None:
            raise SchemaMismatch(f"assignment misses view {vid!r}")
        keys = tuple(str(k) for k in entry["keys"])
        colors = tuple(Color.from_hex(h) for h in entry["colors"])
        if len(keys) != len(colors):
            raise SchemaMismatch(f"view {vid!r}: keys and colors differ in length")
        kind = entry.get("kind", view.colormap_kind)
        if kind == "discrete" and view.field_kind == "categorical":
            expected = set(view.domain_keys)
            got = {entity_of(k) for k in keys}
            if expected - got:
                missing = sorted(expected - got)
                raise SchemaMismatch(f"view {vid!r}: missing entity keys {missing}")
        out[vid] = Colormap(kind, keys, colors)
    return out
