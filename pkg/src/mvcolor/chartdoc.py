"""Patching color scales into embedded declarative chart documents.

Views may carry an opaque chart document; the engine only touches one
configurable dotted path inside it, replacing that node's scale with
the chosen colormap's domain and range.
"""

from __future__ import annotations

import copy

from .graph import ViewSpec
from .metrics import Colormap, entity_of

DEFAULT_SCALE_PATH = "encoding.color.scale"


def patch_color_scale(
    doc: dict,
    view: ViewSpec,
    colormap: Colormap,
    scale_path: str = DEFAULT_SCALE_PATH,
) -> dict:
    """Return a copy of ``doc`` with the scale at ``scale_path`` replaced.

    Categorical views get the entity keys as the domain; sequential
    views get evenly spaced numeric stops over their value range.
    """
    patched = copy.deepcopy(doc)
    node = patched
    parts = scale_path.split(".")
    for part in parts[:-1]:
        nxt = node.get(part)
        if not isinstance(nxt, dict):
            nxt = {}
            node[part] = nxt
        node = nxt
    if colormap.kind == "discrete":
        domain = [entity_of(k) for k in colormap.keys]
    else:
        lo, hi = view.domain
        n = len(colormap)
        domain = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    node[parts[-1]] = {
        "domain": domain,
        "range": [c.hex for c in colormap.colors],
    }
    return patched
