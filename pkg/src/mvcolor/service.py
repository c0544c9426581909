"""HTTP API for interactive colormap refinement.

Sessions wrap a parsed spec and its optimization state.  Edits to a
color propagate through the group structure (shared entities update in
every linked view, hierarchy children re-derive) without re-running the
optimizer; the selected front member itself stays immutable so a user
can re-select or undo.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .color import Color
from .evaluator import assignment_to_doc, score_assignment
from .graph import GraphError, build_graph, parse_mvspec
from .metrics import ParamsStore, Weights, cost_vector
from .optimizer import (
    AllRejected,
    CostedSolution,
    GaConfig,
    ParentsTooClose,
    Solution,
    optimize,
)
from .palettes import load_palettes
from .report import result_document

MAX_SESSIONS = 32
HISTORY_LIMIT = 50


class ServiceError(Exception):
    def __init__(self, status: int, code: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail


@dataclass
class WorkingState:
    solution: Solution
    colormaps: dict
    costs: object
    scores: object


@dataclass
class Session:
    id: str
    spec: object
    graph: object
    case_id: str
    store: ParamsStore = field(default_factory=ParamsStore)
    weights: Weights = field(default_factory=Weights)
    cfg: GaConfig = field(default_factory=GaConfig)
    front: list = field(default_factory=list)
    extrema: dict = field(default_factory=dict)
    selected: int = 0
    working: Optional[WorkingState] = None
    history: deque = field(default_factory=lambda: deque(maxlen=HISTORY_LIMIT))
    lock: threading.RLock = field(default_factory=threading.RLock)
    busy: bool = False
    ga_runs: int = 0


class SessionStore:
    def __init__(self, capacity: int = MAX_SESSIONS):
        self.capacity = capacity
        self._sessions: OrderedDict[str, Session] = OrderedDict()
        self._lock = threading.Lock()

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session
            while len(self._sessions) > self.capacity:
                self._sessions.popitem(last=False)

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
            if session is None:
                raise ServiceError(404, "unknown_session", f"no session {sid!r}")
            self._sessions.move_to_end(sid)
            return session


# -- edit propagation -------------------------------------------------------


def propagate_edit(session: Session, view_id: str, entity_key: str, new_color: Color) -> dict:
    """Replace one entity's color and ripple it through the graph.

    The entity's group colormap is updated, so every redundancy-linked
    view shows the new color; hierarchy children of that entity re-derive
    from it with unchanged parameters.  Costs and scores are recomputed
    directly; the optimizer is never invoked.
    """
    graph = session.graph
    if view_id not in graph.views:
        raise ServiceError(404, "unknown_view", f"no view {view_id!r}")
    if session.working is None:
        raise ServiceError(409, "no_solution", "run optimize and select a solution first")
    group = graph.group_of(view_id)
    if graph.parent_link(group.id) is not None:
        raise ServiceError(
            422,
            "derived_colormap",
            f"view {view_id!r} derives its colors from group "
            f"{graph.parent_link(group.id).parent_group!r}; edit the parent entity instead",
        )
    if entity_key not in group.domain:
        raise ServiceError(
            422, "unknown_entity", f"entity {entity_key!r} is not in view {view_id!r}'s group"
        )

    old = session.working
    roots = dict(old.solution.roots)
    colors = list(roots[group.id])
    colors[group.domain.index(entity_key)] = new_color
    roots[group.id] = tuple(colors)
    solution = Solution(roots, dict(old.solution.child_params))

    try:
        colormaps = solution.decode(graph, session.cfg.samples)
    except ParentsTooClose as exc:
        # leave the working solution untouched; the edit is not applicable
        raise ServiceError(422, "parents_too_close", str(exc))
    costs = cost_vector(colormaps, graph, session.extrema, session.weights)
    scores = score_assignment(colormaps, graph)
    session.history.append(old)
    session.working = WorkingState(solution, colormaps, costs, scores)

    gamut_warnings = [
        {"view": vid, "key": k}
        for vid in graph.view_order
        for k, c in colormaps[vid].items()
        if c.clipped
    ]
    return {
        "assignment": assignment_to_doc(colormaps, graph),
        "costs": costs.to_dict(),
        "scores": scores.to_dict(),
        "gamut_warnings": gamut_warnings,
    }


# -- request bodies ---------------------------------------------------------


class CreateSessionBody(BaseModel):
    spec: dict


class OptimizeBody(BaseModel):
    pop_size: Optional[int] = None
    generations: Optional[int] = None
    n_best: Optional[int] = None
    step: Optional[float] = None
    seed: Optional[int] = None
    weights: Optional[dict] = None


class SelectBody(BaseModel):
    index: int


class EditBody(BaseModel):
    view: str
    key: str
    color: str


# -- app --------------------------------------------------------------------


def _front_summary(session: Session) -> dict:
    members = []
    for entry in session.front:
        colormaps = entry.solution.decode(session.graph, session.cfg.samples)
        members.append(
            {
                "c_sv": entry.c_sv,
                "c_mv": entry.c_mv,
                "assignment": assignment_to_doc(colormaps, session.graph),
            }
        )
    return {"members": members, "selected": session.selected}


def _graph_summary(session: Session) -> dict:
    graph = session.graph
    return {
        "views": [
            {
                "id": v.id,
                "bbox": list(v.bbox),
                "chart_kind": v.chart_kind,
                "color_field": v.color_field,
                "field_kind": v.field_kind,
                "domain": list(v.domain),
                "group": graph.group_of(v.id).id,
            }
            for v in graph.spec.views
        ],
        "groups": [
            {"id": g.id, "views": list(g.view_ids), "kind": g.kind, "domain": list(g.domain)}
            for g in graph.groups
        ],
        "relations": [
            {"a": a, "b": b, "kind": rel.kind.value, "parent": rel.parent}
            for a, b, rel in graph.data_edges
        ],
        "hierarchy": [
            {"parent_group": l.parent_group, "parent_key": l.parent_key, "child_group": l.child_group}
            for l in graph.hierarchy_links
        ],
    }


def create_app(
    palettes_path=None,
    session_capacity: int = MAX_SESSIONS,
    static_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="mvcolor service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions = SessionStore(session_capacity)
    palettes = load_palettes(palettes_path)
    app.state.sessions = sessions

    @app.exception_handler(ServiceError)
    async def _service_error(_req: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "detail": exc.detail}
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"code": "malformed_body", "detail": str(exc)}
        )

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        try:
            spec = parse_mvspec(body.spec)
            graph = build_graph(spec)
        except GraphError as exc:
            raise ServiceError(422, "graph_error", str(exc))
        except (KeyError, ValueError, TypeError) as exc:
            raise ServiceError(400, "malformed_spec", str(exc))
        digest = hashlib.sha256(
            json.dumps(body.spec, sort_keys=True).encode()
        ).hexdigest()[:12]
        session = Session(
            id=uuid.uuid4().hex,
            spec=spec,
            graph=graph,
            case_id=f"session-{digest}",
            weights=Weights.from_mapping(spec.weights),
            cfg=GaConfig.from_mapping(spec.ga),
        )
        sessions.add(session)
        return {"session_id": session.id, "graph": _graph_summary(session)}

    @app.post("/sessions/{sid}/optimize")
    def run_optimize(sid: str, body: OptimizeBody):
        session = sessions.get(sid)
        if not session.lock.acquire(blocking=False):
            raise ServiceError(409, "busy", "session is busy")
        try:
            if session.busy:
                raise ServiceError(409, "busy", "optimization already running")
            session.busy = True
            try:
                overrides = {
                    k: v
                    for k, v in body.model_dump().items()
                    if v is not None and k != "weights"
                }
                base = {
                    "pop_size": session.cfg.pop_size,
                    "generations": session.cfg.generations,
                    "n_best": session.cfg.n_best,
                    "step": session.cfg.step,
                    "seed": session.cfg.rng_seed,
                }
                base.update(overrides)
                session.cfg = GaConfig.from_mapping(base)
                if body.weights:
                    session.weights = Weights.from_mapping(body.weights)
                try:
                    result = optimize(
                        session.graph,
                        palettes,
                        session.store,
                        session.weights,
                        session.cfg,
                        session.case_id,
                    )
                except AllRejected as exc:
                    raise ServiceError(422, "infeasible", str(exc))
                session.ga_runs += 1
                session.front = result.front
                session.extrema = result.extrema
                session.selected = 0
                session.history.clear()
                _select(session, 0)
            finally:
                session.busy = False
        finally:
            session.lock.release()
        return _front_summary(session)

    def _select(session: Session, index: int) -> None:
        if not session.front:
            raise ServiceError(409, "no_front", "run optimize first")
        if not 0 <= index < len(session.front):
            raise ServiceError(
                404, "index_out_of_range", f"front has {len(session.front)} member(s)"
            )
        entry: CostedSolution = session.front[index]
        solution = entry.solution.copy()
        colormaps = solution.decode(session.graph, session.cfg.samples)
        scores = score_assignment(colormaps, session.graph)
        session.selected = index
        session.working = WorkingState(solution, colormaps, entry.costs, scores)

    @app.get("/sessions/{sid}/front")
    def get_front(sid: str):
        return _front_summary(sessions.get(sid))

    @app.post("/sessions/{sid}/select")
    def select(sid: str, body: SelectBody):
        session = sessions.get(sid)
        with session.lock:
            if session.busy:
                raise ServiceError(409, "busy", "optimization running")
            _select(session, body.index)
            w = session.working
            return {
                "selected": session.selected,
                "assignment": assignment_to_doc(w.colormaps, session.graph),
                "costs": w.costs.to_dict() if w.costs else None,
                "scores": w.scores.to_dict(),
            }

    @app.post("/sessions/{sid}/edit")
    def edit(sid: str, body: EditBody):
        session = sessions.get(sid)
        with session.lock:
            if session.busy:
                raise ServiceError(409, "busy", "optimization running")
            try:
                color = Color.from_hex(body.color)
            except ValueError as exc:
                raise ServiceError(400, "bad_color", str(exc))
            return propagate_edit(session, body.view, body.key, color)

    @app.get("/palettes")
    def get_palettes():
        return {
            "palettes": [
                {"name": p.name, "colors": [c.hex for c in p.colors]} for p in palettes
            ]
        }

    @app.get("/sessions/{sid}/export")
    def export(sid: str):
        session = sessions.get(sid)
        with session.lock:
            if not session.front:
                raise ServiceError(409, "no_front", "run optimize first")
            decoded = [
                (m, m.solution.decode(session.graph, session.cfg.samples))
                for m in session.front
            ]
            config_echo = {
                "weights": vars(session.weights),
                "ga": {
                    "pop_size": session.cfg.pop_size,
                    "generations": session.cfg.generations,
                    "n_best": session.cfg.n_best,
                    "crossover_rate": session.cfg.crossover_rate,
                    "step": session.cfg.step,
                    "hard_floor_delta_e": session.cfg.hard_floor_delta_e,
                    "samples": session.cfg.samples,
                },
            }
            doc = result_document(
                session.graph,
                decoded,
                session.case_id,
                session.cfg.rng_seed,
                config_echo,
                session.graph.warnings,
            )
            if session.working is not None:
                w = session.working
                doc["selected"] = {
                    "index": session.selected,
                    "assignment": assignment_to_doc(w.colormaps, session.graph),
                    "costs": w.costs.to_dict() if w.costs else None,
                    "scores": w.scores.to_dict(),
                }
            return doc

    if static_dir is None:
        static_dir = os.environ.get("MVCOLOR_UI", os.path.join("frontend", "dist"))
    if os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
