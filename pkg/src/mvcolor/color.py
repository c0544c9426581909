"""Color values, color-space conversions, and perceptual difference.

The canonical representation is sRGB with components in [0, 1]; CIELAB,
HCL (cylindrical CIELAB), HSL hue, and HSV are computed views.  CIELAB
uses the D65 white point derived from the sRGB matrix itself, so that
white maps to exactly (100, 0, 0) and round-trips are tight.

Every operation here is pure; ``Color`` is immutable and hashable.
"""

from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass, field
from functools import lru_cache

ACHROMATIC_CHROMA = 1e-6
_GAMUT_EPS = 1e-9

# sRGB (IEC 61966-2-1) linear RGB -> XYZ, D65, 2 degree observer.
_RGB_TO_XYZ = (
    (0.4124564, 0.3575761, 0.1804375),
    (0.2126729, 0.7151522, 0.0721750),
    (0.0193339, 0.1191920, 0.9503041),
)


def _invert3(m):
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return (
        ((e * i - f * h) / det, (c * h - b * i) / det, (b * f - c * e) / det),
        ((f * g - d * i) / det, (a * i - c * g) / det, (c * d - a * f) / det),
        ((d * h - e * g) / det, (b * g - a * h) / det, (a * e - b * d) / det),
    )


# Exact float inverse keeps srgb -> lab -> srgb round-trips below 1e-9.
_XYZ_TO_RGB = _invert3(_RGB_TO_XYZ)

# White point of the matrix (linear RGB = (1,1,1)), not the rounded D65
# tabulation: this makes L(white) = 100 and a = b = 0 identically.
_WHITE = tuple(sum(row) for row in _RGB_TO_XYZ)

_LAB_DELTA = 6.0 / 29.0


def _srgb_to_linear(c: float) -> float:
    if c <= 0.04045:
        return c / 12.92
    return ((c + 0.055) / 1.055) ** 2.4


def _linear_to_srgb(c: float) -> float:
    if c <= 0.0031308:
        return c * 12.92
    return 1.055 * c ** (1.0 / 2.4) - 0.055


def _lab_f(t: float) -> float:
    if t > _LAB_DELTA**3:
        return t ** (1.0 / 3.0)
    return t / (3.0 * _LAB_DELTA**2) + 4.0 / 29.0


def _lab_f_inv(t: float) -> float:
    if t > _LAB_DELTA:
        return t**3
    return 3.0 * _LAB_DELTA**2 * (t - 4.0 / 29.0)


def srgb_to_lab(r: float, g: float, b: float) -> tuple[float, float, float]:
    """Convert sRGB components in [0, 1] to CIELAB (L, a, b)."""
    rl, gl, bl = _srgb_to_linear(r), _srgb_to_linear(g), _srgb_to_linear(b)
    xyz = tuple(
        m[0] * rl + m[1] * gl + m[2] * bl for m in _RGB_TO_XYZ
    )
    fx = _lab_f(xyz[0] / _WHITE[0])
    fy = _lab_f(xyz[1] / _WHITE[1])
    fz = _lab_f(xyz[2] / _WHITE[2])
    return 116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)


def lab_to_srgb(L: float, a: float, b: float) -> tuple[float, float, float]:
    """Convert CIELAB to sRGB components; result may fall outside [0, 1]."""
    fy = (L + 16.0) / 116.0
    fx = fy + a / 500.0
    fz = fy - b / 200.0
    x = _lab_f_inv(fx) * _WHITE[0]
    y = _lab_f_inv(fy) * _WHITE[1]
    z = _lab_f_inv(fz) * _WHITE[2]
    return tuple(
        _linear_to_srgb(m[0] * x + m[1] * y + m[2] * z) for m in _XYZ_TO_RGB
    )


def circular_hue_distance(h1: float, h2: float) -> float:
    """Shorter arc between two hue angles, in degrees within [0, 180]."""
    d = abs(h1 - h2) % 360.0
    return min(d, 360.0 - d)


@dataclass(frozen=True)
class Color:
    """An sRGB color with lossless access to its derived representations.

    ``clipped`` records that the constructor had to gamut-map (it is
    excluded from equality so derived colors compare by value).
    """

    r: float
    g: float
    b: float
    clipped: bool = field(default=False, compare=False)

    @classmethod
    def from_srgb(cls, r: float, g: float, b: float) -> "Color":
        """Build from sRGB components, clamping out-of-range values."""
        clipped = any(c < -_GAMUT_EPS or c > 1.0 + _GAMUT_EPS for c in (r, g, b))
        cl = lambda c: min(1.0, max(0.0, c))
        return cls(cl(r), cl(g), cl(b), clipped)

    @classmethod
    def from_hex(cls, text: str) -> "Color":
        """Parse a "#RRGGBB" string (case-insensitive)."""
        s = text.strip().lstrip("#")
        if len(s) != 6:
            raise ValueError(f"expected #RRGGBB, got {text!r}")
        r, g, b = (int(s[i : i + 2], 16) / 255.0 for i in (0, 2, 4))
        return cls(r, g, b)

    @classmethod
    def from_lab(cls, L: float, a: float, b: float) -> "Color":
        return cls.from_srgb(*lab_to_srgb(L, a, b))

    @classmethod
    def from_hcl(cls, h: float, c: float, l: float) -> "Color":
        return hcl_to_srgb(h, c, l)

    @classmethod
    def from_hsv(cls, h: float, s: float, v: float) -> "Color":
        """Build from HSV fractions in [0, 1] (hue wraps)."""
        return cls.from_srgb(*colorsys.hsv_to_rgb(h % 1.0, s, v))

    @property
    def hex(self) -> str:
        return "#%02x%02x%02x" % tuple(
            int(round(c * 255.0)) for c in (self.r, self.g, self.b)
        )

    @property
    def lab(self) -> tuple[float, float, float]:
        return srgb_to_lab(self.r, self.g, self.b)

    @property
    def lightness(self) -> float:
        return self.lab[0]

    @property
    def hcl(self) -> tuple[float, float, float]:
        """Hue (degrees in [0, 360)), chroma, luminance of cylindrical Lab."""
        L, a, b = self.lab
        c = math.hypot(a, b)
        if c < ACHROMATIC_CHROMA:
            return 0.0, c, L
        h = math.degrees(math.atan2(b, a)) % 360.0
        return h, c, L

    @property
    def hue_hsl(self) -> float:
        """HSL hue in degrees; 0 for achromatic colors by convention."""
        if self.hcl[1] < ACHROMATIC_CHROMA:
            return 0.0
        h, _, _ = colorsys.rgb_to_hls(self.r, self.g, self.b)
        return (h * 360.0) % 360.0

    @property
    def hsv(self) -> tuple[float, float, float]:
        return colorsys.rgb_to_hsv(self.r, self.g, self.b)

    @property
    def is_achromatic(self) -> bool:
        return self.hcl[1] < ACHROMATIC_CHROMA

    def __repr__(self) -> str:  # compact; hex is the interchange form
        return f"Color({self.hex})"


def hcl_to_srgb(h: float, c: float, l: float) -> Color:
    """Realize an HCL request as an sRGB color.

    Out-of-gamut requests are mapped back by reducing chroma at constant
    hue and luminance (bisection); the result carries ``clipped=True``.
    """
    hr = math.radians(h % 360.0)
    ca, sa = math.cos(hr), math.sin(hr)

    def attempt(chroma: float) -> tuple[float, float, float]:
        return lab_to_srgb(l, chroma * ca, chroma * sa)

    rgb = attempt(c)
    if all(-_GAMUT_EPS <= v <= 1.0 + _GAMUT_EPS for v in rgb):
        return Color.from_srgb(*rgb)
    lo, hi = 0.0, c
    for _ in range(48):
        mid = (lo + hi) / 2.0
        if all(-_GAMUT_EPS <= v <= 1.0 + _GAMUT_EPS for v in attempt(mid)):
            lo = mid
        else:
            hi = mid
    r, g, b = attempt(lo)
    cl = lambda v: min(1.0, max(0.0, v))
    return Color(cl(r), cl(g), cl(b), clipped=True)


@lru_cache(maxsize=1 << 18)
def _ciede2000_lab(lab1: tuple[float, float, float], lab2: tuple[float, float, float]) -> float:
    L1, a1, b1 = lab1
    L2, a2, b2 = lab2

    C1 = math.hypot(a1, b1)
    C2 = math.hypot(a2, b2)
    C_bar = (C1 + C2) / 2.0
    c7 = C_bar**7
    G = 0.5 * (1.0 - math.sqrt(c7 / (c7 + 25.0**7)))

    a1p = (1.0 + G) * a1
    a2p = (1.0 + G) * a2
    C1p = math.hypot(a1p, b1)
    C2p = math.hypot(a2p, b2)

    h1p = 0.0 if (a1p == 0.0 and b1 == 0.0) else math.degrees(math.atan2(b1, a1p)) % 360.0
    h2p = 0.0 if (a2p == 0.0 and b2 == 0.0) else math.degrees(math.atan2(b2, a2p)) % 360.0

    dLp = L2 - L1
    dCp = C2p - C1p

    if C1p * C2p == 0.0:
        dhp = 0.0
    else:
        dhp = h2p - h1p
        if dhp > 180.0:
            dhp -= 360.0
        elif dhp < -180.0:
            dhp += 360.0
    dHp = 2.0 * math.sqrt(C1p * C2p) * math.sin(math.radians(dhp) / 2.0)

    Lp_bar = (L1 + L2) / 2.0
    Cp_bar = (C1p + C2p) / 2.0

    if C1p * C2p == 0.0:
        hp_bar = h1p + h2p
    else:
        hsum = h1p + h2p
        if abs(h1p - h2p) <= 180.0:
            hp_bar = hsum / 2.0
        elif hsum < 360.0:
            hp_bar = (hsum + 360.0) / 2.0
        else:
            hp_bar = (hsum - 360.0) / 2.0

    T = (
        1.0
        - 0.17 * math.cos(math.radians(hp_bar - 30.0))
        + 0.24 * math.cos(math.radians(2.0 * hp_bar))
        + 0.32 * math.cos(math.radians(3.0 * hp_bar + 6.0))
        - 0.20 * math.cos(math.radians(4.0 * hp_bar - 63.0))
    )
    d_theta = 30.0 * math.exp(-(((hp_bar - 275.0) / 25.0) ** 2))
    cp7 = Cp_bar**7
    R_C = 2.0 * math.sqrt(cp7 / (cp7 + 25.0**7))
    S_L = 1.0 + 0.015 * (Lp_bar - 50.0) ** 2 / math.sqrt(20.0 + (Lp_bar - 50.0) ** 2)
    S_C = 1.0 + 0.045 * Cp_bar
    S_H = 1.0 + 0.015 * Cp_bar * T
    R_T = -math.sin(math.radians(2.0 * d_theta)) * R_C

    # Parametric factors kL = kC = kH = 1.
    fL = dLp / S_L
    fC = dCp / S_C
    fH = dHp / S_H
    return math.sqrt(fL * fL + fC * fC + fH * fH + R_T * fC * fH)


def ciede2000(a: Color, b: Color) -> float:
    """Perceptual difference between two colors (Delta E 2000)."""
    la, lb = a.lab, b.lab
    if lb < la:  # symmetric: normalize argument order for the cache
        la, lb = lb, la
    return _ciede2000_lab(la, lb)


def ciede2000_lab(lab1: tuple[float, float, float], lab2: tuple[float, float, float]) -> float:
    """Delta E 2000 directly on CIELAB triples (used by fixtures)."""
    return _ciede2000_lab(tuple(lab1), tuple(lab2))
