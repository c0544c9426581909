"""Seed palette library and procedural palette extension.

The bundled library collects well-known categorical palettes (3 to 12
colors each).  When a color group needs more colors than any seed
offers, extra colors are generated by stepping the hue by the golden
angle at fixed chroma and luminance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .color import Color, ciede2000, hcl_to_srgb

GOLDEN_ANGLE = 137.50776405003785
GENERATED_CHROMA = 50.0
GENERATED_LUMINANCE = 60.0


@dataclass(frozen=True)
class Palette:
    name: str
    colors: tuple[Color, ...]

    def __len__(self) -> int:
        return len(self.colors)


def parse_palettes(doc: list[dict]) -> list[Palette]:
    palettes = []
    for entry in doc:
        colors = tuple(Color.from_hex(h) for h in entry["colors"])
        if not 3 <= len(colors) <= 12:
            raise ValueError(
                f"palette {entry.get('name')!r}: expected 3-12 colors, got {len(colors)}"
            )
        palettes.append(Palette(str(entry["name"]), colors))
    if not palettes:
        raise ValueError("palette library is empty")
    return palettes


def load_palettes(path=None) -> list[Palette]:
    """Load a palette library file, or the bundled defaults."""
    if path is None:
        text = resources.files("mvcolor.data").joinpath("palettes.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_palettes(json.loads(text))


def extend_palette(colors: list[Color], target: int, floor: float = 10.0) -> list[Color]:
    """Append golden-angle generated colors until ``target`` is reached.

    Candidates closer than ``floor`` (Delta E 2000) to any color already
    chosen are skipped; if a full revolution finds none, the best
    candidate seen is taken so the function always terminates.
    """
    out = list(colors)
    hue = out[-1].hcl[0] if out else 0.0
    while len(out) < target:
        best, best_d = None, -1.0
        picked = None
        for _ in range(64):
            hue = (hue + GOLDEN_ANGLE) % 360.0
            cand = hcl_to_srgb(hue, GENERATED_CHROMA, GENERATED_LUMINANCE)
            d = min((ciede2000(cand, c) for c in out), default=floor)
            if d >= floor:
                picked = cand
                break
            if d > best_d:
                best, best_d = cand, d
        out.append(picked if picked is not None else best)
    return out
