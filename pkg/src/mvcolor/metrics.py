"""Cost metrics over per-view colormaps and their aggregation.

Four raw metrics feed the optimizer: within-view color difference,
cross-view color difference, cross-view hue separation (for hierarchy
siblings), and cross-view lightness continuity.  Raw values are min-max
normalized against per-case historical extrema, folded into
minimization components, and smoothly penalized around fixed thresholds
before aggregation into the two objectives (single-view effectiveness,
multiple-view consistency).
"""

from __future__ import annotations

import json
import os
import math
import tempfile
import threading
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .color import ACHROMATIC_CHROMA, Color, ciede2000, circular_hue_distance
from .graph import MvGraph

# Continuous colormaps are represented by this many evenly spaced samples.
DEFAULT_SAMPLES = 5

# Raw-value thresholds (pairwise scale) and sigmoid steepness.
PENALTY_FACTOR = 0.2
THRESHOLDS = {
    "sv_diff": 30.0,
    "continuity": 30.0,
    "mv_diff": 20.0,
    "hue_uniformity": 20.0,
}
# continuity is lower-is-better: the threshold caps the lightness spread.
LOWER_IS_BETTER = {"continuity"}

# Normalized cost components above this trigger a flat aggregate surcharge.
MAX_ALLOWED = 0.2
VIOLATION_SURCHARGE = 0.5

METRIC_KEYS = ("sv_diff", "continuity", "mv_diff", "hue_uniformity")


def entity_of(key: str) -> str:
    """Data entity behind a colormap key (samples carry an ``@i`` suffix)."""
    return key.split("@", 1)[0]


@dataclass(frozen=True)
class Colormap:
    """An ordered, entity-keyed list of colors for one view."""

    kind: str  # "discrete" | "continuous"
    keys: tuple[str, ...]
    colors: tuple[Color, ...]

    def __post_init__(self):
        if not self.colors:
            raise ValueError("colormap needs at least one color")
        if len(self.keys) != len(self.colors):
            raise ValueError("one key per color required")

    def __len__(self) -> int:
        return len(self.colors)

    def color_for(self, key: str) -> Color:
        return self.colors[self.keys.index(key)]

    def items(self):
        return zip(self.keys, self.colors)


# -- raw metrics ---------------------------------------------------------


def local_discriminability(cm: Colormap) -> float:
    """Within-view color difference: the full double sum over pairs."""
    total = 0.0
    cs = cm.colors
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            total += 2.0 * ciede2000(cs[i], cs[j])
    return total


def _cross_difference(a: Colormap, b: Colormap) -> tuple[float, int]:
    total, count = 0.0, 0
    for ka, ca in a.items():
        ea = entity_of(ka)
        for kb, cb in b.items():
            if ea == entity_of(kb):
                continue  # shared entities hold identical colors by construction
            total += ciede2000(ca, cb)
            count += 1
    return total, count


def global_discriminability(a: Colormap, b: Colormap) -> Optional[float]:
    """Cross-view color difference over distinct-entity pairs.

    Returns None (not applicable) when every cross pair shares its
    entity, e.g. two fully redundant views.
    """
    total, count = _cross_difference(a, b)
    return total if count else None


def hue_uniformity(a: Colormap, b: Colormap) -> Optional[float]:
    """Smallest cross-view HSL hue distance; achromatic colors skipped."""
    best = None
    for ca in a.colors:
        if ca.hcl[1] < ACHROMATIC_CHROMA:
            continue
        ha = ca.hue_hsl
        for cb in b.colors:
            if cb.hcl[1] < ACHROMATIC_CHROMA:
                continue
            d = circular_hue_distance(ha, cb.hue_hsl)
            if best is None or d < best:
                best = d
    return best


def continuity(a: Colormap, b: Colormap) -> float:
    """Cross-view lightness spread: sum of |dL| over all cross pairs."""
    total = 0.0
    las = [c.lightness for c in a.colors]
    lbs = [c.lightness for c in b.colors]
    for la in las:
        for lb in lbs:
            total += abs(la - lb)
    return total


# -- normalization and penalties ------------------------------------------


class ParamsStore:
    """Historical per-case min/max of each raw metric, persisted as JSON.

    Extrema only widen: the minimum is non-increasing and the maximum
    non-decreasing across updates.  Writes go through a temp file and an
    atomic rename.
    """

    def __init__(self, data: Optional[dict] = None):
        self._data: dict[str, dict[str, list[float]]] = data or {}
        self._lock = threading.Lock()

    @classmethod
    def load(cls, path) -> "ParamsStore":
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
            data = {
                case: {k: [float(v["min_cost"]), float(v["max_cost"])] for k, v in entry.items()}
                for case, entry in raw.items()
            }
            return cls(data)
        return cls()

    def save(self, path) -> None:
        doc = {
            case: {
                k: {"min_cost": lohi[0], "max_cost": lohi[1]}
                for k, lohi in sorted(entry.items())
            }
            for case, entry in sorted(self._data.items())
        }
        with self._lock:
            dirname = os.path.dirname(os.path.abspath(path))
            fd, tmp = tempfile.mkstemp(prefix=".params-", suffix=".json", dir=dirname)
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    json.dump(doc, fh, indent=2, sort_keys=True)
                    fh.write("\n")
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def extrema(self, case_id: str, key: str) -> Optional[tuple[float, float]]:
        entry = self._data.get(case_id, {}).get(key)
        return (entry[0], entry[1]) if entry else None

    def observe(self, case_id: str, key: str, raw: float) -> None:
        with self._lock:
            entry = self._data.setdefault(case_id, {}).setdefault(key, [raw, raw])
            entry[0] = min(entry[0], raw)
            entry[1] = max(entry[1], raw)

    def snapshot(self, case_id: str) -> dict[str, tuple[float, float]]:
        return {k: (v[0], v[1]) for k, v in self._data.get(case_id, {}).items()}

    def merge(self, case_id: str, observed: Mapping[str, tuple[float, float]]) -> None:
        for key, (lo, hi) in observed.items():
            self.observe(case_id, key, lo)
            self.observe(case_id, key, hi)


def normalize_with(raw: float, lo: float, hi: float) -> float:
    """Min-max scale ``raw`` into [0, 1]; degenerate extrema give 0.5."""
    if hi <= lo:
        return 0.5
    return min(1.0, max(0.0, (raw - lo) / (hi - lo)))


def normalize(raw: float, metric_key: str, store: ParamsStore, case_id: str) -> float:
    """Normalize against the store's extrema, widening them on the way."""
    store.observe(case_id, metric_key, raw)
    lo, hi = store.extrema(case_id, metric_key)
    return normalize_with(raw, lo, hi)


def penalty_multiplier(raw: float, metric_key: str) -> float:
    """Smooth penalty in (1, 2); 1.5 exactly at the threshold."""
    t = THRESHOLDS[metric_key]
    x = raw - t if metric_key in LOWER_IS_BETTER else t - raw
    return 1.0 + 1.0 / (1.0 + math.exp(-PENALTY_FACTOR * x))


def penalize(normalized_cost: float, raw: float, metric_key: str) -> float:
    return normalized_cost * penalty_multiplier(raw, metric_key)


# -- aggregation -----------------------------------------------------------


@dataclass(frozen=True)
class Weights:
    w_d: float = 1.0
    w_gdis: float = 1.0
    w_hu: float = 1.0
    w_con: float = 1.0

    @classmethod
    def from_mapping(cls, m: Optional[Mapping[str, float]]) -> "Weights":
        m = m or {}
        return cls(
            w_d=float(m.get("w_d", 1.0)),
            w_gdis=float(m.get("w_gdis", 1.0)),
            w_hu=float(m.get("w_hu", 1.0)),
            w_con=float(m.get("w_con", 1.0)),
        )


@dataclass
class CostVector:
    """Raw, normalized, and penalized cost components plus the objectives.

    Raw values are stored on the pairwise scale (per-pair means for the
    sums, the min itself for hue separation) keyed by view id or by
    "a~b" view pairs.  ``normalized``/``penalized`` hold per-metric
    means over scopes; ``not_applicable`` lists skipped scopes.
    """

    raw: dict
    normalized: dict
    penalized: dict
    c_sv: float
    c_mv: float
    not_applicable: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "raw": self.raw,
            "normalized": self.normalized,
            "penalized": self.penalized,
            "c_sv": self.c_sv,
            "c_mv": self.c_mv,
            "not_applicable": list(self.not_applicable),
        }


def _pair_key(a: str, b: str) -> str:
    return f"{a}~{b}"


def raw_metric_scopes(colormaps: Mapping[str, Colormap], graph: MvGraph) -> dict:
    """Per-scope raw values (pairwise scale) for all four metrics."""
    order = [v for v in graph.view_order]
    sv: dict[str, Optional[float]] = {}
    for vid in order:
        cm = colormaps[vid]
        if len(cm) < 2:
            sv[vid] = None
        else:
            n = len(cm)
            sv[vid] = local_discriminability(cm) / (n * (n - 1))

    mv: dict[str, Optional[float]] = {}
    hu: dict[str, Optional[float]] = {}
    con: dict[str, float] = {}
    for i, a in enumerate(order):
        for b in order[i + 1 :]:
            key = _pair_key(a, b)
            cma, cmb = colormaps[a], colormaps[b]
            total, count = _cross_difference(cma, cmb)
            mv[key] = total / count if count else None
            con[key] = continuity(cma, cmb) / (len(cma) * len(cmb))
            link = graph.hierarchy_link_between(a, b)
            if link is None:
                hu[key] = _distinct_entity_hue_gap(cma, cmb)
            else:
                pa, ch = (a, b) if graph.group_of(a).id == link.parent_group else (b, a)
                hu[key] = _sibling_hue_gap(colormaps[pa], colormaps[ch], link.parent_key)
    return {"sv_diff": sv, "mv_diff": mv, "hue_uniformity": hu, "continuity": con}


def _distinct_entity_hue_gap(a: Colormap, b: Colormap) -> Optional[float]:
    """Hue separation over cross pairs of different entities; shared
    entities hold identical colors by construction and are skipped (a
    fully redundant pair has no meaningful hue gap to measure)."""
    best = None
    for ka, ca in a.items():
        if ca.hcl[1] < ACHROMATIC_CHROMA:
            continue
        ea = entity_of(ka)
        for kb, cb in b.items():
            if ea == entity_of(kb) or cb.hcl[1] < ACHROMATIC_CHROMA:
                continue
            d = circular_hue_distance(ca.hue_hsl, cb.hue_hsl)
            if best is None or d < best:
                best = d
    return best


def _sibling_hue_gap(parent_cm: Colormap, child_cm: Colormap, parent_key: str) -> Optional[float]:
    """Hue separation between a child colormap and the parent's *other*
    entities: the linked parent color is excluded because the child is
    meant to share its hue."""
    keep = [c for k, c in parent_cm.items() if entity_of(k) != parent_key]
    if not keep:
        return None
    pruned = Colormap("discrete", tuple(f"p@{i}" for i in range(len(keep))), tuple(keep))
    return hue_uniformity(pruned, child_cm)


def seed_extrema(
    scopes_list: list[dict], base: Mapping[str, tuple[float, float]]
) -> dict[str, tuple[float, float]]:
    """Extrema for normalization: stored values, else seeded from the
    observed raw values of an initial batch."""
    extrema = dict(base)
    for key in METRIC_KEYS:
        if key in extrema:
            continue
        values = [
            v
            for scopes in scopes_list
            for v in scopes[key].values()
            if v is not None
        ]
        if values:
            extrema[key] = (min(values), max(values))
    return extrema


def observed_ranges(scopes_list: list[dict]) -> dict[str, tuple[float, float]]:
    out: dict[str, tuple[float, float]] = {}
    for scopes in scopes_list:
        for key in METRIC_KEYS:
            values = [v for v in scopes[key].values() if v is not None]
            if not values:
                continue
            lo, hi = min(values), max(values)
            if key in out:
                out[key] = (min(out[key][0], lo), max(out[key][1], hi))
            else:
                out[key] = (lo, hi)
    return out


def cost_vector(
    colormaps: Mapping[str, Colormap],
    graph: MvGraph,
    extrema: Mapping[str, tuple[float, float]],
    weights: Weights = Weights(),
    scopes: Optional[dict] = None,
) -> CostVector:
    """Aggregate the two objectives for one decoded solution.

    Maximize-type metrics become ``1 - normalized`` cost components;
    continuity stays as-is.  Components are sigmoid-penalized on their
    raw value, weighted, and summed: per view for the single-view
    objective, per spatially-weighted view pair for the consistency
    objective.  Any normalized component above ``MAX_ALLOWED`` adds a
    flat weighted surcharge to its aggregate.
    """
    if scopes is None:
        scopes = raw_metric_scopes(colormaps, graph)

    def norm(raw: float, key: str) -> float:
        lohi = extrema.get(key)
        if lohi is None:
            return 0.5
        return normalize_with(raw, lohi[0], lohi[1])

    na: list[str] = []
    norm_acc: dict[str, list[float]] = {k: [] for k in METRIC_KEYS}
    pen_acc: dict[str, list[float]] = {k: [] for k in METRIC_KEYS}

    def component(raw: Optional[float], key: str, scope: str) -> Optional[tuple[float, float]]:
        if raw is None:
            na.append(f"{key}:{scope}")
            return None
        n = norm(raw, key)
        cost = n if key in LOWER_IS_BETTER else 1.0 - n
        pen = penalize(cost, raw, key)
        norm_acc[key].append(cost)
        pen_acc[key].append(pen)
        return cost, pen

    c_sv = 0.0
    for vid, raw in scopes["sv_diff"].items():
        comp = component(raw, "sv_diff", vid)
        if comp is None:
            continue
        cost, pen = comp
        c_sv += weights.w_d * pen
        if cost > MAX_ALLOWED:
            c_sv += VIOLATION_SURCHARGE * weights.w_d

    c_mv = 0.0
    order = graph.view_order
    for i, a in enumerate(order):
        for b in order[i + 1 :]:
            key = _pair_key(a, b)
            omega = graph.spatial_proximity(a, b)
            pair_sum = 0.0
            for mkey, w in (
                ("mv_diff", weights.w_gdis),
                ("hue_uniformity", weights.w_hu),
                ("continuity", weights.w_con),
            ):
                comp = component(scopes[mkey][key], mkey, key)
                if comp is None:
                    continue
                cost, pen = comp
                pair_sum += w * pen
                if cost > MAX_ALLOWED:
                    c_mv += VIOLATION_SURCHARGE * w
            c_mv += omega * pair_sum

    mean = lambda xs: sum(xs) / len(xs) if xs else 0.0
    return CostVector(
        raw=scopes,
        normalized={k: mean(v) for k, v in norm_acc.items()},
        penalized={k: mean(v) for k, v in pen_acc.items()},
        c_sv=c_sv,
        c_mv=c_mv,
        not_applicable=na,
    )
