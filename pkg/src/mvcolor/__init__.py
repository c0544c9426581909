"""Colormap generation, optimization, and refinement for multiple-view
visualizations."""

from .color import Color, ciede2000, circular_hue_distance
from .graph import (
    AmbiguousRelation,
    CyclicHierarchy,
    GraphError,
    MvGraph,
    MvSpec,
    Relation,
    RelationKind,
    ViewSpec,
    build_graph,
    infer_relation,
    load_mvspec,
    parse_mvspec,
)
from .metrics import (
    Colormap,
    CostVector,
    ParamsStore,
    Weights,
    continuity,
    cost_vector,
    global_discriminability,
    hue_uniformity,
    local_discriminability,
    normalize,
    penalize,
)
from .optimizer import (
    AllRejected,
    ChildParams,
    CostedSolution,
    GaConfig,
    ParentsTooClose,
    Solution,
    crossover,
    inherit_categorical,
    inherit_sequential,
    init_population,
    naive_assignment,
    optimize,
    pareto_front,
    perturb,
    select_parents,
)
from .evaluator import EvalReport, SchemaMismatch, hqs, overall_wcd, prs, wcd
from .evaluator import report as evaluation_report
from .palettes import Palette, extend_palette, load_palettes

__version__ = "0.1.0"
