"""Pareto-based genetic search over multi-view colormap assignments.

A genome stores an entity-keyed colormap per top-level color group plus
derivation parameters per hierarchy child group; child colormaps are
always re-derived from their parent entity's color, so hierarchy
consistency holds by construction.  Each generation evaluates the two
objectives, extracts the non-dominated front, carries it over unchanged,
and refills the population from elite parents via per-group crossover
and HSV perturbation.
"""

from __future__ import annotations

import random
import warnings as _warnings
from dataclasses import dataclass, field, replace
from typing import Optional

from .color import ACHROMATIC_CHROMA, Color, ciede2000, hcl_to_srgb
from .graph import ColorGroup, MvGraph
from .metrics import (
    DEFAULT_SAMPLES,
    Colormap,
    CostVector,
    ParamsStore,
    Weights,
    cost_vector,
    observed_ranges,
    raw_metric_scopes,
    seed_extrema,
)
from .palettes import Palette, extend_palette

DEFAULT_SEED = 1729

# Sequential ramps interpolate luminance downward from this value and
# chroma upward from this value toward the parent color.
RAMP_TOP_LUMINANCE = 92.0
RAMP_FLOOR_LUMINANCE = 20.0
RAMP_START_CHROMA = 15.0
RAMP_CHROMA_CAP = 90.0

DEFAULT_HUE_SPREAD = 30.0
MIN_HUE_SPREAD = 5.0
MAX_HUE_SPREAD = 120.0
SIBLING_LUMA_OFFSET = 8.0

DEDUP_DELTA_E = 1.0


class OptimizeError(Exception):
    pass


class AllRejected(OptimizeError):
    """Every candidate violated a hard constraint."""


class ParentsTooClose(OptimizeError):
    """Parent hues leave no room for disjoint child hue ranges."""


class AchromaticParentWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ChildParams:
    """Derivation knobs for one hierarchy child group."""

    hue_spread: float = DEFAULT_HUE_SPREAD
    chroma_offset: float = 0.0
    luma_offset: float = 0.0


@dataclass(frozen=True)
class GaConfig:
    pop_size: int = 50
    generations: int = 100
    n_best: int = 10
    crossover_rate: float = 0.5
    step: float = 0.05
    rng_seed: int = DEFAULT_SEED
    hard_floor_delta_e: float = 10.0
    samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError("pop_size must be at least 2")
        if self.n_best > self.pop_size:
            raise ValueError("n_best cannot exceed pop_size")
        if not 0.0 < self.step <= 1.0:
            raise ValueError("step must be in (0, 1]")
        if self.generations < 1:
            raise ValueError("generations must be at least 1")

    @classmethod
    def from_mapping(cls, m: Optional[dict]) -> "GaConfig":
        m = dict(m or {})
        rename = {"seed": "rng_seed"}
        kwargs = {rename.get(k, k): v for k, v in m.items()}
        valid = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in kwargs.items() if k in valid})


@dataclass
class Solution:
    """One genome: root colormaps per top-level group + child parameters."""

    roots: dict  # group id -> tuple[Color, ...]
    child_params: dict  # child group id -> ChildParams
    _decoded: Optional[dict] = field(default=None, repr=False, compare=False)

    def copy(self) -> "Solution":
        return Solution(dict(self.roots), dict(self.child_params))

    def decode(self, graph: MvGraph, samples: int = DEFAULT_SAMPLES) -> dict[str, Colormap]:
        """Per-view colormaps; cached per sample count (genomes are
        treated as immutable and decoded against one graph)."""
        if self._decoded is None:
            self._decoded = {}
        if samples not in self._decoded:
            self._decoded[samples] = decode_solution(self, graph, samples)
        return self._decoded[samples]


@dataclass
class CostedSolution:
    solution: Solution
    costs: Optional[CostVector] = None
    rejected: bool = False
    reject_reason: str = ""

    @property
    def c_sv(self) -> float:
        return self.costs.c_sv if self.costs else float("inf")

    @property
    def c_mv(self) -> float:
        return self.costs.c_mv if self.costs else float("inf")


# -- inherit operators -----------------------------------------------------


def inherit_sequential(
    parent: Color,
    k: int,
    chroma_offset: float = 0.0,
    luma_offset: float = 0.0,
) -> list[Color]:
    """Sequential ramp at the parent's hue, light-to-dark.

    Luminance interpolates from the fixed top down toward the parent's
    luminance band; chroma rises from a pale start toward the parent's
    chroma.  All samples share the parent hue (gamut mapping reduces
    chroma only, so hue survives).
    """
    if k < 2:
        raise ValueError("a sequential ramp needs at least 2 samples")
    h, c, l = parent.hcl
    c = max(0.0, c + chroma_offset)
    l = min(100.0, max(0.0, l + luma_offset))
    if c < ACHROMATIC_CHROMA:
        _warnings.warn(
            "sequential ramp derived from an achromatic parent; using a gray ramp",
            AchromaticParentWarning,
            stacklevel=2,
        )
        h, c = 0.0, 0.0
    l_end = max(RAMP_FLOOR_LUMINANCE, l - 20.0)
    c_end = min(RAMP_CHROMA_CAP, c + 20.0) if c >= ACHROMATIC_CHROMA else 0.0
    out = []
    for i in range(k):
        t = i / (k - 1)
        li = RAMP_TOP_LUMINANCE + t * (l_end - RAMP_TOP_LUMINANCE)
        ci = RAMP_START_CHROMA + t * (c_end - RAMP_START_CHROMA) if c_end else 0.0
        out.append(hcl_to_srgb(h, ci, li))
    return out


def _reorder_max_adjacent(colors: list[Color]) -> list[Color]:
    """Greedy farthest-insertion ordering: maximize the minimum adjacent
    perceptual difference; deterministic with index tie-breaks."""
    n = len(colors)
    if n <= 2:
        return list(colors)
    d = [[ciede2000(a, b) for b in colors] for a in colors]
    best_pair, best_d = (0, 1), -1.0
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] > best_d:
                best_pair, best_d = (i, j), d[i][j]
    order = list(best_pair)
    remaining = [i for i in range(n) if i not in order]
    while remaining:
        pick = max(remaining, key=lambda i: (min(d[i][j] for j in order), -i))
        best_pos, best_min = 0, -1.0
        for pos in range(len(order) + 1):
            trial = order[:pos] + [pick] + order[pos:]
            m = min(d[trial[t]][trial[t + 1]] for t in range(len(trial) - 1))
            if m > best_min:
                best_pos, best_min = pos, m
        order.insert(best_pos, pick)
        remaining.remove(pick)
    return [colors[i] for i in order]


def inherit_categorical(
    parents: dict[str, Color],
    child_counts: dict[str, int],
    spread: float,
) -> dict[str, list[Color]]:
    """Per-parent child color families fanned around each parent's hue.

    Hue ranges of different parents must stay disjoint on the circle;
    the requested spread is shrunk uniformly until they are.  Children
    inherit the parent's chroma and luminance with small alternating
    luminance offsets, then each family is reordered for maximal
    adjacent difference.
    """
    if not 0.0 < spread <= MAX_HUE_SPREAD:
        raise ValueError(f"spread must be in (0, {MAX_HUE_SPREAD}]")
    keys = list(parents)
    hues = {k: parents[k].hcl[0] for k in keys}
    effective = spread
    if len(keys) > 1:
        ordered = sorted(hues.values())
        gaps = [
            (ordered[(i + 1) % len(ordered)] - ordered[i]) % 360.0 or 360.0
            for i in range(len(ordered))
        ]
        min_gap = min(gaps)
        effective = min(spread, 0.95 * min_gap)
        if effective < MIN_HUE_SPREAD:
            raise ParentsTooClose(
                f"parent hues only {min_gap:.1f} deg apart; cannot fit disjoint "
                f"child hue ranges of at least {MIN_HUE_SPREAD} deg"
            )
    out: dict[str, list[Color]] = {}
    for key in keys:
        n = child_counts[key]
        if n < 1:
            raise ValueError(f"child count for {key!r} must be >= 1")
        h, c, l = parents[key].hcl
        if n == 1:
            child_hues = [h]
        else:
            child_hues = [h - effective / 2.0 + effective * i / (n - 1) for i in range(n)]
        colors = []
        for i, hi in enumerate(child_hues):
            li = l + (SIBLING_LUMA_OFFSET if i % 2 == 0 else -SIBLING_LUMA_OFFSET)
            li = min(95.0, max(10.0, li))
            colors.append(hcl_to_srgb(hi % 360.0, c, li))
        out[key] = _reorder_max_adjacent(colors)
    return out


# -- decoding --------------------------------------------------------------


def _sample_keys(base: str, k: int) -> tuple[str, ...]:
    return tuple(f"{base}@{i}" for i in range(k))


def decode_solution(sol: Solution, graph: MvGraph, samples: int = DEFAULT_SAMPLES) -> dict[str, Colormap]:
    """Realize per-view colormaps from a genome.

    Groups are processed parents-first; child groups derive entirely
    from their parent entity's color and the stored child parameters.
    """
    group_maps: dict[str, Colormap] = {}
    pending_children: dict[str, list] = {}  # parent group id -> child links

    for group in graph.coloring_order():
        link = graph.parent_link(group.id)
        if link is None:
            colors = sol.roots[group.id]
            if group.kind == "categorical":
                group_maps[group.id] = Colormap("discrete", group.domain, tuple(colors))
            else:
                ramp = inherit_sequential(colors[0], samples)
                group_maps[group.id] = Colormap(
                    "continuous", _sample_keys(group.domain[0], samples), tuple(ramp)
                )
        else:
            pending_children.setdefault(link.parent_group, []).append((link, group))

    # Child families are laid out per parent group so sibling hue ranges
    # can be kept disjoint.
    for parent_gid in sorted(pending_children, key=lambda g: int(g[1:])):
        links = pending_children[parent_gid]
        parent_cm = group_maps[parent_gid]
        cat_links = [(l, g) for l, g in links if g.kind == "categorical"]
        seq_links = [(l, g) for l, g in links if g.kind == "sequential"]

        for link, group in seq_links:
            params = sol.child_params.get(group.id, ChildParams())
            parent_color = parent_cm.color_for(link.parent_key)
            ramp = inherit_sequential(
                parent_color, samples, params.chroma_offset, params.luma_offset
            )
            group_maps[group.id] = Colormap(
                "continuous", _sample_keys(link.parent_key, samples), tuple(ramp)
            )

        if cat_links:
            spread = min(
                sol.child_params.get(g.id, ChildParams()).hue_spread for _, g in cat_links
            )
            parents = {}
            counts = {}
            for link, group in cat_links:
                params = sol.child_params.get(group.id, ChildParams())
                base = parent_cm.color_for(link.parent_key)
                h, c, l = base.hcl
                parents[link.parent_key] = hcl_to_srgb(
                    h,
                    max(0.0, c + params.chroma_offset),
                    min(100.0, max(0.0, l + params.luma_offset)),
                )
                counts[link.parent_key] = len(group.domain)
            families = inherit_categorical(parents, counts, spread)
            for link, group in cat_links:
                group_maps[group.id] = Colormap(
                    "discrete", group.domain, tuple(families[link.parent_key])
                )

    views: dict[str, Colormap] = {}
    for vid in graph.view_order:
        view = graph.views[vid]
        group = graph.group_of(vid)
        gm = group_maps[group.id]
        if view.colormap_kind == "discrete" and group.kind == "categorical":
            keys = view.domain_keys
            views[vid] = Colormap("discrete", keys, tuple(gm.color_for(k) for k in keys))
        else:
            views[vid] = gm
    return views


# -- population ------------------------------------------------------------


def init_population(
    graph: MvGraph,
    seeds: list[Palette],
    cfg: GaConfig,
    rng: random.Random,
) -> list[Solution]:
    """Seed genomes from the palette library.

    Groups draw a palette that covers their color count when one exists;
    larger needs extend the biggest seed with golden-angle colors.
    """
    if not seeds:
        raise ValueError("seed palette library is empty")
    child_ids = [l.child_group for l in graph.hierarchy_links]
    pop = []
    for _ in range(cfg.pop_size):
        roots = {}
        used: list[int] = []  # avoid handing two groups the same palette
        for group in graph.level1_groups():
            need = len(group.domain) if group.kind == "categorical" else 1
            eligible = [i for i, p in enumerate(seeds) if len(p) >= need]
            if eligible:
                fresh = [i for i in eligible if i not in used]
                idx = (fresh or eligible)[rng.randrange(len(fresh or eligible))]
                used.append(idx)
                colors = list(seeds[idx].colors[:need])
            else:
                pal = max(seeds, key=len)
                colors = extend_palette(list(pal.colors), need, cfg.hard_floor_delta_e)
            roots[group.id] = tuple(colors)
        pop.append(Solution(roots, {cid: ChildParams() for cid in child_ids}))
    return pop


def evaluate(
    population: list[CostedSolution],
    graph: MvGraph,
    extrema: dict,
    weights: Weights,
    cfg: GaConfig,
) -> None:
    """Fill in cost vectors; hard-constraint violators are marked rejected.

    A discrete view containing a pair below the hard perceptual-difference
    floor is insufficient color differentiation; undecodable genomes
    (e.g. parent hues too close for child fans) are rejected too.
    """
    for entry in population:
        if entry.costs is not None or entry.rejected:
            continue
        try:
            decoded = entry.solution.decode(graph, cfg.samples)
        except ParentsTooClose as exc:
            entry.rejected = True
            entry.reject_reason = str(exc)
            continue
        reason = _hard_floor_violation(decoded, cfg.hard_floor_delta_e)
        if reason:
            entry.rejected = True
            entry.reject_reason = reason
            continue
        entry.costs = cost_vector(decoded, graph, extrema, weights)


def _hard_floor_violation(decoded: dict[str, Colormap], floor: float) -> str:
    for vid, cm in decoded.items():
        if cm.kind != "discrete":
            continue
        cs = cm.colors
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                if ciede2000(cs[i], cs[j]) < floor:
                    return f"view {vid!r}: colors {i} and {j} differ by less than {floor}"
    return ""


def pareto_front(population: list[CostedSolution]) -> list[CostedSolution]:
    """Non-dominated subset under strict dominance in both objectives."""
    feasible = [e for e in population if not e.rejected and e.costs is not None]
    if not feasible:
        raise AllRejected("no feasible solution in the population")
    front = []
    for e in feasible:
        dominated = any(
            o.c_sv < e.c_sv and o.c_mv < e.c_mv for o in feasible if o is not e
        )
        if not dominated:
            front.append(e)
    return front


def select_parents(
    front: list[CostedSolution], cfg: GaConfig, rng: random.Random
) -> tuple[CostedSolution, CostedSolution]:
    """Uniform draw from the elite pool (best aggregate cost, capped)."""
    ranked = sorted(
        range(len(front)), key=lambda i: (front[i].c_sv + front[i].c_mv, i)
    )
    pool = [front[i] for i in ranked[: cfg.n_best]]
    a = pool[rng.randrange(len(pool))]
    if len(pool) == 1:
        return a, a
    rest = [p for p in pool if p is not a]
    return a, rest[rng.randrange(len(rest))]


def crossover(
    a: Solution, b: Solution, cfg: GaConfig, rng: random.Random, graph: MvGraph
) -> tuple[Solution, Solution]:
    """Exchange whole top-level group colormaps with the crossover rate;
    child parameters travel with their ancestor group."""
    o1, o2 = a.copy(), b.copy()
    for group in graph.level1_groups():
        if rng.random() < cfg.crossover_rate:
            o1.roots[group.id], o2.roots[group.id] = o2.roots[group.id], o1.roots[group.id]
            for cid in graph.descendant_groups(group.id):
                o1.child_params[cid], o2.child_params[cid] = (
                    o2.child_params[cid],
                    o1.child_params[cid],
                )
    return o1, o2


def perturb(sol: Solution, cfg: GaConfig, rng: random.Random) -> Solution:
    """Jitter each root color in HSV (hue wraps, S/V clamp) and, rarely,
    a child group's hue spread."""
    roots = {}
    for gid, colors in sorted(sol.roots.items()):
        new = []
        for color in colors:
            h, s, v = color.hsv
            h = (h + rng.uniform(-cfg.step, cfg.step)) % 1.0
            s = min(1.0, max(0.0, s + rng.uniform(-cfg.step, cfg.step)))
            v = min(1.0, max(0.0, v + rng.uniform(-cfg.step, cfg.step)))
            new.append(Color.from_hsv(h, s, v))
        roots[gid] = tuple(new)
    params = {}
    for cid, p in sorted(sol.child_params.items()):
        if rng.random() < 0.1:
            spread = p.hue_spread + rng.uniform(-1.0, 1.0) * cfg.step * 60.0
            spread = min(MAX_HUE_SPREAD, max(MIN_HUE_SPREAD, spread))
            params[cid] = replace(p, hue_spread=spread)
        else:
            params[cid] = p
    return Solution(roots, params)


# -- main loop -------------------------------------------------------------


@dataclass
class OptimizeResult:
    front: list[CostedSolution]
    extrema: dict
    best_aggregate_history: list[float]
    generations_run: int
    rejected_total: int


def _dedup_key_equal(a: dict[str, Colormap], b: dict[str, Colormap]) -> bool:
    for vid, cma in a.items():
        cmb = b[vid]
        if len(cma) != len(cmb):
            return False
        for ca, cb in zip(cma.colors, cmb.colors):
            if ciede2000(ca, cb) >= DEDUP_DELTA_E:
                return False
    return True


def optimize(
    graph: MvGraph,
    seeds: list[Palette],
    store: ParamsStore,
    weights: Weights,
    cfg: GaConfig,
    case_id: str,
) -> OptimizeResult:
    """Run the full generational loop and return the final front.

    Normalization extrema are frozen for the whole run (stored values,
    else seeded from the initial population) and merged back into the
    store afterwards, so costs are comparable across generations and a
    fixed seed reproduces the run bit-exactly.
    """
    # A strict hard floor can reject an entire initial draw; retry with
    # fresh (still seed-derived) draws before giving up.
    for attempt in range(25):
        rng = random.Random(f"init:{cfg.rng_seed}:{attempt}")
        population = [CostedSolution(s) for s in init_population(graph, seeds, cfg, rng)]
        scopes_list = []
        for entry in population:
            try:
                decoded = entry.solution.decode(graph, cfg.samples)
            except ParentsTooClose:
                continue
            scopes_list.append(raw_metric_scopes(decoded, graph))
        extrema = seed_extrema(scopes_list, store.snapshot(case_id))
        evaluate(population, graph, extrema, weights, cfg)
        if any(not e.rejected for e in population):
            break
    else:
        raise AllRejected(
            "no feasible initial population found; the hard floor may be too strict"
        )
    observed = observed_ranges(scopes_list)

    def widen(scopes: dict) -> None:
        for key, (lo, hi) in observed_ranges([scopes]).items():
            if key in observed:
                observed[key] = (min(observed[key][0], lo), max(observed[key][1], hi))
            else:
                observed[key] = (lo, hi)

    history = []
    rejected_total = 0
    for gen in range(cfg.generations):
        fresh = [e for e in population if e.costs is None and not e.rejected]
        evaluate(population, graph, extrema, weights, cfg)
        for entry in fresh:
            if entry.costs is not None:
                widen(entry.costs.raw)
        rejected_total += sum(1 for e in population if e.rejected)
        front = pareto_front(population)
        history.append(min(e.c_sv + e.c_mv for e in front))

        if gen == cfg.generations - 1:
            break
        nxt = list(front)
        slot = 0
        while len(nxt) < cfg.pop_size:
            child_rng = random.Random(f"{cfg.rng_seed}:{gen}:{slot}")
            pa, pb = select_parents(front, cfg, child_rng)
            o1, o2 = crossover(pa.solution, pb.solution, cfg, child_rng, graph)
            nxt.append(CostedSolution(perturb(o1, cfg, child_rng)))
            if len(nxt) < cfg.pop_size:
                nxt.append(CostedSolution(perturb(o2, cfg, child_rng)))
            slot += 1
        population = nxt

    store.merge(case_id, observed)

    front = pareto_front(population)
    front.sort(key=lambda e: (e.c_mv, e.c_sv))
    deduped: list[CostedSolution] = []
    for entry in front:
        decoded = entry.solution.decode(graph, cfg.samples)
        if not any(
            _dedup_key_equal(decoded, kept.solution.decode(graph, cfg.samples))
            for kept in deduped
        ):
            deduped.append(entry)
    return OptimizeResult(
        front=deduped,
        extrema=extrema,
        best_aggregate_history=history,
        generations_run=cfg.generations,
        rejected_total=rejected_total,
    )


def naive_assignment(graph: MvGraph, seeds: list[Palette], samples: int = DEFAULT_SAMPLES) -> dict[str, Colormap]:
    """Shared-palette baseline: the first seed palette cycled over every
    top-level group, with hierarchy children copying the parent color."""
    first = seeds[0].colors
    group_maps: dict[str, Colormap] = {}
    for group in graph.coloring_order():
        link = graph.parent_link(group.id)
        if link is None:
            if group.kind == "categorical":
                colors = tuple(first[i % len(first)] for i in range(len(group.domain)))
                group_maps[group.id] = Colormap("discrete", group.domain, colors)
            else:
                group_maps[group.id] = Colormap(
                    "continuous",
                    _sample_keys(group.domain[0], samples),
                    (first[0],) * samples,
                )
        else:
            parent_color = group_maps[link.parent_group].color_for(link.parent_key)
            if group.kind == "categorical":
                group_maps[group.id] = Colormap(
                    "discrete", group.domain, (parent_color,) * len(group.domain)
                )
            else:
                group_maps[group.id] = Colormap(
                    "continuous",
                    _sample_keys(link.parent_key, samples),
                    (parent_color,) * samples,
                )

    views: dict[str, Colormap] = {}
    for vid in graph.view_order:
        view = graph.views[vid]
        gm = group_maps[graph.group_of(vid).id]
        if view.colormap_kind == "discrete" and graph.group_of(vid).kind == "categorical":
            keys = view.domain_keys
            views[vid] = Colormap("discrete", keys, tuple(gm.color_for(k) for k in keys))
        else:
            views[vid] = gm
    return views
