from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from mvcolor.graph import build_graph, load_mvspec
from mvcolor.palettes import load_palettes

DATA = Path(__file__).parent / "data"
CASES = Path(__file__).parents[1] / "src" / "mvcolor" / "data" / "cases"

CASE_NAMES = [
    "partial_overlap",
    "pet_hierarchy",
    "three_groups",
    "two_groups",
    "vertical_hierarchy",
]


@pytest.fixture(scope="session")
def ciede2000_pairs():
    with open(DATA / "ciede2000_pairs.json", encoding="utf-8") as fh:
        return json.load(fh)["pairs"]


@pytest.fixture(scope="session")
def palettes():
    return load_palettes()


@pytest.fixture(scope="session")
def case_paths():
    return {name: CASES / f"{name}.json" for name in CASE_NAMES}


@pytest.fixture(scope="session")
def case_graphs(case_paths):
    out = {}
    for name, path in case_paths.items():
        spec = load_mvspec(path)
        out[name] = (build_graph(spec), spec)
    return out


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def make_view(vid, domain, *, field="kind", bbox=(0, 0, 100, 100), field_kind="categorical", **kw):
    """Terse ViewSpec factory for unit tests."""
    from mvcolor.graph import ViewSpec

    return ViewSpec(
        id=vid,
        bbox=bbox,
        color_field=field,
        field_kind=field_kind,
        domain=tuple(domain),
        **kw,
    )
