"""Multi-view specification parsing and the derived view/data graph.

A specification lists views (bounding box, color-encoded field, domain).
From it we infer pairwise data relations (full/partial/no redundancy,
hierarchy), view adjacency from layout, color groups (views that must
share one entity-keyed colormap), hierarchy links between groups, and
shortest-path hop distances used for spatial weighting.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class GraphError(Exception):
    """Base class for specification/graph construction errors."""


class AmbiguousRelation(GraphError):
    """A view pair matches conflicting relation patterns; declare explicitly."""


class CyclicHierarchy(GraphError):
    """Hierarchy links between color groups form a cycle."""


class RelationKind(str, Enum):
    FULL_REDUNDANCY = "full"
    PARTIAL_REDUNDANCY = "partial"
    NON_REDUNDANCY = "none"
    HIERARCHY = "hierarchy"


@dataclass(frozen=True)
class Relation:
    """A typed data relation; hierarchy is directional (parent -> child)."""

    kind: RelationKind
    parent: Optional[str] = None
    child: Optional[str] = None


@dataclass(frozen=True)
class ViewSpec:
    """One view of the multi-view layout and its color-encoded field."""

    id: str
    bbox: tuple[float, float, float, float]  # x, y, width, height
    color_field: str
    field_kind: str  # "categorical" | "sequential"
    domain: tuple  # entity keys, or (min, max) for sequential
    chart_kind: str = "chart"
    colormap_kind: str = ""  # defaults from field_kind
    embedded_chart_doc: Optional[dict] = None
    parent_path: Optional[tuple[str, str]] = None  # (parent view id, entity key)
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.bbox[2] <= 0 or self.bbox[3] <= 0:
            raise ValueError(f"view {self.id!r}: bbox width/height must be positive")
        if self.field_kind not in ("categorical", "sequential"):
            raise ValueError(f"view {self.id!r}: bad field_kind {self.field_kind!r}")
        if not self.colormap_kind:
            object.__setattr__(
                self,
                "colormap_kind",
                "discrete" if self.field_kind == "categorical" else "continuous",
            )
        if self.colormap_kind not in ("discrete", "continuous"):
            raise ValueError(f"view {self.id!r}: bad colormap_kind {self.colormap_kind!r}")
        if self.colormap_kind == "continuous" and self.field_kind != "sequential":
            raise ValueError(f"view {self.id!r}: continuous colormaps require a sequential field")
        if len(self.domain) == 0:
            raise ValueError(f"view {self.id!r}: domain is empty")
        if self.field_kind == "categorical":
            keys = tuple(str(k) for k in self.domain)
            if len(set(keys)) != len(keys):
                raise ValueError(f"view {self.id!r}: duplicate domain keys")
            object.__setattr__(self, "domain", keys)
        else:
            lo, hi = float(self.domain[0]), float(self.domain[1])
            object.__setattr__(self, "domain", (lo, hi))

    @property
    def domain_keys(self) -> tuple[str, ...]:
        if self.field_kind != "categorical":
            raise ValueError(f"view {self.id!r} has no categorical domain")
        return self.domain


@dataclass
class MvSpec:
    """Parsed multi-view specification document."""

    views: list[ViewSpec]
    canvas: Optional[tuple[float, float]] = None
    declared: dict = field(default_factory=dict)  # (a, b) sorted -> Relation
    weights: dict = field(default_factory=dict)
    ga: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


def parse_mvspec(doc: dict) -> MvSpec:
    """Parse the JSON interchange document; unknown fields are preserved."""
    known_view = {
        "id", "bbox", "chart_kind", "color_field", "field_kind",
        "domain", "colormap_kind", "embedded_chart_doc", "parent_path",
    }
    views = []
    for v in doc.get("views", []):
        bbox = v["bbox"]
        if isinstance(bbox, dict):
            bbox = (bbox["x"], bbox["y"], bbox["width"], bbox["height"])
        pp = v.get("parent_path")
        if pp is not None:
            pp = (str(pp["view"]), str(pp["key"]))
        views.append(
            ViewSpec(
                id=str(v["id"]),
                bbox=tuple(float(x) for x in bbox),
                chart_kind=v.get("chart_kind", "chart"),
                color_field=str(v["color_field"]),
                field_kind=v["field_kind"],
                domain=tuple(v["domain"]),
                colormap_kind=v.get("colormap_kind", ""),
                embedded_chart_doc=v.get("embedded_chart_doc"),
                parent_path=pp,
                extra={k: v[k] for k in v if k not in known_view},
            )
        )
    if not views:
        raise ValueError("specification has no views")
    ids = [v.id for v in views]
    if len(set(ids)) != len(ids):
        raise ValueError("view ids are not unique")

    canvas = None
    if "canvas" in doc:
        canvas = (float(doc["canvas"]["width"]), float(doc["canvas"]["height"]))

    declared = {}
    kind_alias = {
        "full": RelationKind.FULL_REDUNDANCY,
        "partial": RelationKind.PARTIAL_REDUNDANCY,
        "none": RelationKind.NON_REDUNDANCY,
        "hierarchy": RelationKind.HIERARCHY,
    }
    for rel in doc.get("relations", []) or []:
        a, b = str(rel["a"]), str(rel["b"])
        kind = kind_alias[rel["kind"]]
        parent = rel.get("parent")
        if kind is RelationKind.HIERARCHY:
            parent = str(parent) if parent is not None else a
            child = b if parent == a else a
            declared[_pair(a, b)] = Relation(kind, parent=parent, child=child)
        else:
            declared[_pair(a, b)] = Relation(kind)

    known_top = {"canvas", "views", "relations", "weights", "ga"}
    return MvSpec(
        views=views,
        canvas=canvas,
        declared=declared,
        weights=dict(doc.get("weights") or {}),
        ga=dict(doc.get("ga") or {}),
        extra={k: doc[k] for k in doc if k not in known_top},
    )


def load_mvspec(path) -> MvSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_mvspec(json.load(fh))


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def _hierarchy_pattern(parent: ViewSpec, child: ViewSpec) -> bool:
    """True when ``child`` looks subordinate to ``parent``."""
    if child.parent_path is not None:
        return child.parent_path[0] == parent.id
    return (
        parent.field_kind == "categorical"
        and child.color_field in parent.domain_keys
    )


def infer_relation(a: ViewSpec, b: ViewSpec, declared: Optional[Relation] = None) -> Relation:
    """Resolve the data relation between two views.

    A declared relation always wins.  Otherwise: identical entity sets
    give full redundancy, overlapping ones partial, disjoint ones none,
    and a child whose field names one of the parent's entities (or that
    declares a parent path) gives a hierarchy relation.
    """
    if declared is not None:
        return declared

    hier_ab = _hierarchy_pattern(a, b)
    hier_ba = _hierarchy_pattern(b, a)

    if a.field_kind == "categorical" and b.field_kind == "categorical":
        sa, sb = set(a.domain_keys), set(b.domain_keys)
        if a.color_field == b.color_field and sa == sb:
            redundancy = Relation(RelationKind.FULL_REDUNDANCY)
        elif sa & sb:
            redundancy = Relation(RelationKind.PARTIAL_REDUNDANCY)
        else:
            redundancy = None
        if redundancy is not None and (hier_ab or hier_ba):
            raise AmbiguousRelation(
                f"views {a.id!r} and {b.id!r} match both a redundancy and a "
                "hierarchy pattern; declare the relation explicitly"
            )
        if redundancy is not None:
            return redundancy
    elif a.field_kind == "sequential" and b.field_kind == "sequential":
        # Sequential domains participate by field name only.
        if a.color_field == b.color_field:
            if hier_ab or hier_ba:
                raise AmbiguousRelation(
                    f"views {a.id!r} and {b.id!r}: same sequential field but "
                    "also a hierarchy pattern; declare the relation explicitly"
                )
            return Relation(RelationKind.FULL_REDUNDANCY)

    if hier_ab and hier_ba:
        raise AmbiguousRelation(
            f"views {a.id!r} and {b.id!r} each look like the other's parent; "
            "declare the relation explicitly"
        )
    if hier_ab:
        return Relation(RelationKind.HIERARCHY, parent=a.id, child=b.id)
    if hier_ba:
        return Relation(RelationKind.HIERARCHY, parent=b.id, child=a.id)
    return Relation(RelationKind.NON_REDUNDANCY)


@dataclass(frozen=True)
class ColorGroup:
    """Views sharing one entity-keyed colormap."""

    id: str
    view_ids: tuple[str, ...]
    kind: str  # "categorical" | "sequential"
    domain: tuple[str, ...]  # entity keys; single field key for sequential


@dataclass(frozen=True)
class HierarchyLink:
    parent_group: str
    parent_key: str
    child_group: str


# Bounding boxes expanded by this fraction of the canvas diagonal count
# as adjacent when they intersect.
ADJACENCY_MARGIN = 0.05


class MvGraph:
    """Immutable graph of views, data relations, groups, and layout."""

    def __init__(self, spec: MvSpec, adjacency_margin: float = ADJACENCY_MARGIN):
        self.spec = spec
        self.views: dict[str, ViewSpec] = {v.id: v for v in spec.views}
        self.view_order: list[str] = [v.id for v in spec.views]
        self.warnings: list[str] = []
        self._relations: dict[tuple[str, str], Relation] = {}
        self._resolve_relations()
        self.adjacency_edges: list[tuple[str, str]] = self._compute_adjacency(adjacency_margin)
        self.groups: list[ColorGroup] = []
        self._group_of: dict[str, str] = {}
        self.hierarchy_links: list[HierarchyLink] = []
        self._build_groups()
        self._hop: dict[tuple[str, str], Optional[int]] = self._hop_distances()
        self._max_hop = max((d for d in self._hop.values() if d), default=1)
        if any(d is None for d in self._hop.values()):
            self.warnings.append(
                "layout is disconnected; spatial proximity for unreachable "
                f"pairs falls back to 1/{self._max_hop + 1}"
            )

    # -- relations ---------------------------------------------------

    def _resolve_relations(self):
        order = self.view_order
        for i, ai in enumerate(order):
            for bi in order[i + 1 :]:
                a, b = self.views[ai], self.views[bi]
                self._relations[_pair(ai, bi)] = infer_relation(
                    a, b, self.spec.declared.get(_pair(ai, bi))
                )

    def relation(self, a: str, b: str) -> Relation:
        return self._relations[_pair(a, b)]

    @property
    def data_edges(self) -> list[tuple[str, str, Relation]]:
        return [(a, b, r) for (a, b), r in self._relations.items()]

    # -- layout ------------------------------------------------------

    def _canvas(self) -> tuple[float, float]:
        if self.spec.canvas:
            return self.spec.canvas
        w = max(v.bbox[0] + v.bbox[2] for v in self.views.values())
        h = max(v.bbox[1] + v.bbox[3] for v in self.views.values())
        return w, h

    def _compute_adjacency(self, margin: float) -> list[tuple[str, str]]:
        # Expansion is circular (Minkowski), i.e. the Euclidean gap between
        # the two boxes is compared against the combined padding; plain
        # rectangle expansion could never separate a grid's diagonal pairs
        # from its side pairs.
        cw, ch = self._canvas()
        pad = margin * (cw**2 + ch**2) ** 0.5
        edges = []
        order = self.view_order
        for i, ai in enumerate(order):
            for bi in order[i + 1 :]:
                ax, ay, aw, ah = self.views[ai].bbox
                bx, by, bw, bh = self.views[bi].bbox
                dx = max(0.0, bx - (ax + aw), ax - (bx + bw))
                dy = max(0.0, by - (ay + ah), ay - (by + bh))
                if (dx**2 + dy**2) ** 0.5 <= 2.0 * pad:
                    edges.append((ai, bi))
        return edges

    # -- groups and hierarchy ----------------------------------------

    def _build_groups(self):
        order = self.view_order
        parent = {v: v for v in order}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                # Root with the earlier spec position wins (determinism).
                if order.index(rx) < order.index(ry):
                    parent[ry] = rx
                else:
                    parent[rx] = ry

        for (a, b), rel in self._relations.items():
            if rel.kind in (RelationKind.FULL_REDUNDANCY, RelationKind.PARTIAL_REDUNDANCY):
                if self.views[a].field_kind != self.views[b].field_kind:
                    raise AmbiguousRelation(
                        f"views {a!r} and {b!r} share a redundancy relation but "
                        "have different field kinds"
                    )
                union(a, b)

        members: dict[str, list[str]] = {}
        for v in order:
            members.setdefault(find(v), []).append(v)

        for idx, root in enumerate(sorted(members, key=order.index)):
            vs = members[root]
            kinds = {self.views[v].field_kind for v in vs}
            kind = "sequential" if kinds == {"sequential"} else "categorical"
            if kind == "categorical":
                domain: list[str] = []
                for v in vs:
                    for k in self.views[v].domain_keys:
                        if k not in domain:
                            domain.append(k)
            else:
                domain = [self.views[vs[0]].color_field]
            gid = f"g{idx}"
            self.groups.append(ColorGroup(gid, tuple(vs), kind, tuple(domain)))
            for v in vs:
                self._group_of[v] = gid

        self._groups_by_id = {g.id: g for g in self.groups}

        links: dict[str, HierarchyLink] = {}
        for (a, b), rel in self._relations.items():
            if rel.kind is not RelationKind.HIERARCHY:
                continue
            pv, cv = rel.parent, rel.child
            pg, cg = self._group_of[pv], self._group_of[cv]
            if pg == cg:
                raise CyclicHierarchy(
                    f"hierarchy between {pv!r} and {cv!r} stays inside one color group"
                )
            key = self._resolve_parent_key(pv, cv)
            link = HierarchyLink(pg, key, cg)
            existing = links.get(cg)
            if existing is not None and existing != link:
                raise AmbiguousRelation(
                    f"group {cg!r} would inherit from both "
                    f"({existing.parent_group!r}, {existing.parent_key!r}) and "
                    f"({pg!r}, {key!r})"
                )
            links[cg] = link
        self.hierarchy_links = [links[cg] for cg in sorted(links, key=self._group_index)]
        self._check_acyclic()

    def _resolve_parent_key(self, parent_view: str, child_view: str) -> str:
        cv = self.views[child_view]
        pg = self._groups_by_id[self._group_of[parent_view]]
        if cv.parent_path is not None:
            key = cv.parent_path[1]
        elif cv.color_field in pg.domain:
            key = cv.color_field
        elif len(pg.domain) == 1:
            key = pg.domain[0]
        else:
            raise AmbiguousRelation(
                f"cannot resolve which entity of {parent_view!r} the child "
                f"{child_view!r} derives from; set parent_path.key"
            )
        if key not in pg.domain:
            raise AmbiguousRelation(
                f"parent key {key!r} of child {child_view!r} is not in the "
                f"domain of group {pg.id!r}"
            )
        return key

    def _group_index(self, gid: str) -> int:
        return int(gid[1:])

    def _check_acyclic(self):
        parent_of = {l.child_group: l.parent_group for l in self.hierarchy_links}
        for start in parent_of:
            seen = {start}
            cur = start
            while cur in parent_of:
                cur = parent_of[cur]
                if cur in seen:
                    raise CyclicHierarchy(f"hierarchy links form a cycle through {cur!r}")
                seen.add(cur)

    def group_of(self, view_id: str) -> ColorGroup:
        return self._groups_by_id[self._group_of[view_id]]

    def group(self, gid: str) -> ColorGroup:
        return self._groups_by_id[gid]

    def parent_link(self, gid: str) -> Optional[HierarchyLink]:
        for l in self.hierarchy_links:
            if l.child_group == gid:
                return l
        return None

    def children_of(self, gid: str) -> list[HierarchyLink]:
        return [l for l in self.hierarchy_links if l.parent_group == gid]

    def descendant_groups(self, gid: str) -> list[str]:
        out, todo = [], deque([gid])
        while todo:
            cur = todo.popleft()
            for l in self.children_of(cur):
                out.append(l.child_group)
                todo.append(l.child_group)
        return out

    def hierarchy_related(self, view_a: str, view_b: str) -> bool:
        """True when one view's group is an ancestor of the other's."""
        ga, gb = self._group_of[view_a], self._group_of[view_b]
        if ga == gb:
            return False
        return gb in self.descendant_groups(ga) or ga in self.descendant_groups(gb)

    def hierarchy_link_between(self, view_a: str, view_b: str) -> Optional[HierarchyLink]:
        """Direct parent/child link between the two views' groups, if any."""
        ga, gb = self._group_of[view_a], self._group_of[view_b]
        for l in self.hierarchy_links:
            if (l.parent_group, l.child_group) in ((ga, gb), (gb, ga)):
                return l
        return None

    # -- distances ---------------------------------------------------

    def _hop_distances(self) -> dict[tuple[str, str], Optional[int]]:
        adj: dict[str, list[str]] = {v: [] for v in self.view_order}
        for a, b in self.adjacency_edges:
            adj[a].append(b)
            adj[b].append(a)
        hops: dict[tuple[str, str], Optional[int]] = {}
        for src in self.view_order:
            dist = {src: 0}
            q = deque([src])
            while q:
                cur = q.popleft()
                for nxt in adj[cur]:
                    if nxt not in dist:
                        dist[nxt] = dist[cur] + 1
                        q.append(nxt)
            for dst in self.view_order:
                if src < dst:
                    hops[_pair(src, dst)] = dist.get(dst)
        return hops

    def hop_distance(self, a: str, b: str) -> Optional[int]:
        if a == b:
            return 0
        return self._hop[_pair(a, b)]

    def spatial_proximity(self, a: str, b: str) -> float:
        """Inverse hop distance; disconnected pairs fall back gracefully."""
        if a == b:
            raise ValueError("spatial proximity is defined for distinct views")
        d = self.hop_distance(a, b)
        if d is None:
            return 1.0 / (self._max_hop + 1)
        return 1.0 / d

    # -- ordering ----------------------------------------------------

    def coloring_order(self) -> list[ColorGroup]:
        """Groups in dependency order: every parent before its children."""
        indeg = {g.id: 0 for g in self.groups}
        for l in self.hierarchy_links:
            indeg[l.child_group] += 1
        ready = sorted((g for g in indeg if indeg[g] == 0), key=self._group_index)
        out: list[str] = []
        while ready:
            cur = ready.pop(0)
            out.append(cur)
            changed = False
            for l in self.children_of(cur):
                indeg[l.child_group] -= 1
                if indeg[l.child_group] == 0:
                    ready.append(l.child_group)
                    changed = True
            if changed:
                ready.sort(key=self._group_index)
        if len(out) != len(self.groups):
            raise CyclicHierarchy("hierarchy links form a cycle")
        return [self._groups_by_id[g] for g in out]

    def level1_groups(self) -> list[ColorGroup]:
        children = {l.child_group for l in self.hierarchy_links}
        return [g for g in self.groups if g.id not in children]


def build_graph(spec: MvSpec, adjacency_margin: float = ADJACENCY_MARGIN) -> MvGraph:
    """Construct the full graph for a parsed specification."""
    return MvGraph(spec, adjacency_margin)
