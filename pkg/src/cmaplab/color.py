"""Color spaces, conversions, and perceptual difference metrics.

All conversions assume the D65 white point and the 2-degree standard
observer. The sRGB <-> XYZ matrices are derived at import time from the
sRGB chromaticity coordinates so that white maps to the white point
exactly (no rounded-matrix residue in L*, a*, b*).
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

__all__ = [
    "Space",
    "Color",
    "DifferenceMetric",
    "convert",
    "delta_e",
    "delta_e_pairs",
    "srgb_to_xyz",
    "xyz_to_srgb",
    "xyz_to_lab",
    "lab_to_xyz",
    "lab_to_din99",
    "din99_to_lab",
    "to_space",
    "BLACK_LAB",
    "WHITE_LAB",
]


class Space(enum.Enum):
    SRGB = "srgb"
    XYZ = "xyz"
    LAB = "lab"
    DIN99 = "din99"


class DifferenceMetric(enum.Enum):
    LAB_EUCLIDEAN = "lab"
    DIN99_EUCLIDEAN = "din99"
    DE94 = "de94"
    CIEDE2000 = "ciede2000"


# sRGB primaries and D65 white (IEC 61966-2-1 chromaticities).
_PRIMARIES = np.array([[0.64, 0.33], [0.30, 0.60], [0.15, 0.06]])
_WHITE_XY = (0.3127, 0.3290)


def _rgb_matrix() -> np.ndarray:
    xy = _PRIMARIES
    xyz = np.stack([xy[:, 0], xy[:, 1], 1.0 - xy[:, 0] - xy[:, 1]], axis=0) / xy[:, 1]
    wx, wy = _WHITE_XY
    white = np.array([wx / wy, 1.0, (1.0 - wx - wy) / wy])
    scale = np.linalg.solve(xyz, white)
    return xyz * scale


_M_RGB2XYZ = _rgb_matrix()
_M_XYZ2RGB = np.linalg.inv(_M_RGB2XYZ)
_WHITE_XYZ = _M_RGB2XYZ @ np.ones(3)

# CIE L*a*b* threshold constants, exact rational form.
_LAB_DELTA = 6.0 / 29.0
_LAB_DELTA3 = _LAB_DELTA**3

# DIN99 (DIN 6176) with k_E = k_CH = 1.
_DIN_COS16 = math.cos(math.radians(16.0))
_DIN_SIN16 = math.sin(math.radians(16.0))

# DE94 graphic-arts weighting (textiles would use kL=2, K1=0.048, K2=0.014).
DE94_KL = 1.0
DE94_K1 = 0.045
DE94_K2 = 0.015


@dataclasses.dataclass(frozen=True)
class Color:
    """A color triplet tagged with its space.

    sRGB components are clamped into [0, 1] on construction unless the
    instance is explicitly flagged out-of-gamut (conversions flag instead
    of clamping so that difference math sees true distances).
    """

    space: Space
    c1: float
    c2: float
    c3: float
    out_of_gamut: bool = dataclasses.field(default=False, compare=False)

    def __post_init__(self) -> None:
        comps = (self.c1, self.c2, self.c3)
        if not all(math.isfinite(c) for c in comps):
            raise ValueError(f"non-finite color components: {comps}")
        if self.space is Space.SRGB and not self.out_of_gamut:
            for name, c in zip(("c1", "c2", "c3"), comps):
                object.__setattr__(self, name, min(1.0, max(0.0, c)))

    @property
    def components(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=np.float64)


BLACK_LAB = Color(Space.LAB, 0.0, 0.0, 0.0)
WHITE_LAB = Color(Space.LAB, 100.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# Array converters. All accept and return float arrays of shape (..., 3).

def srgb_to_xyz(rgb: np.ndarray) -> np.ndarray:
    rgb = np.asarray(rgb, dtype=np.float64)
    linear = np.where(rgb > 0.04045, ((rgb + 0.055) / 1.055) ** 2.4, rgb / 12.92)
    return linear @ _M_RGB2XYZ.T


def xyz_to_srgb(xyz: np.ndarray) -> np.ndarray:
    xyz = np.asarray(xyz, dtype=np.float64)
    linear = xyz @ _M_XYZ2RGB.T
    mag = np.abs(linear)
    out = np.sign(linear) * np.where(
        mag > 0.0031308, 1.055 * mag ** (1.0 / 2.4) - 0.055, 12.92 * mag
    )
    return out


def xyz_to_lab(xyz: np.ndarray) -> np.ndarray:
    xyz = np.asarray(xyz, dtype=np.float64)
    t = xyz / _WHITE_XYZ
    f = np.where(t > _LAB_DELTA3, np.cbrt(t), t / (3.0 * _LAB_DELTA**2) + 4.0 / 29.0)
    lab = np.empty_like(f)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


def lab_to_xyz(lab: np.ndarray) -> np.ndarray:
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    f = np.stack([fx, fy, fz], axis=-1)
    t = np.where(f > _LAB_DELTA, f**3, 3.0 * _LAB_DELTA**2 * (f - 4.0 / 29.0))
    return t * _WHITE_XYZ


def lab_to_din99(lab: np.ndarray) -> np.ndarray:
    lab = np.asarray(lab, dtype=np.float64)
    light, a, b = lab[..., 0], lab[..., 1], lab[..., 2]
    l99 = 105.51 * np.log1p(0.0158 * light)
    e = a * _DIN_COS16 + b * _DIN_SIN16
    f = 0.7 * (-a * _DIN_SIN16 + b * _DIN_COS16)
    g = np.hypot(e, f)
    c99 = np.log1p(0.045 * g) / 0.045
    h99 = np.arctan2(f, e)
    return np.stack([l99, c99 * np.cos(h99), c99 * np.sin(h99)], axis=-1)


def din99_to_lab(din: np.ndarray) -> np.ndarray:
    din = np.asarray(din, dtype=np.float64)
    l99, a99, b99 = din[..., 0], din[..., 1], din[..., 2]
    c99 = np.hypot(a99, b99)
    h99 = np.arctan2(b99, a99)
    g = np.expm1(0.045 * c99) / 0.045
    e = g * np.cos(h99)
    f = g * np.sin(h99)
    a = e * _DIN_COS16 - (f / 0.7) * _DIN_SIN16
    b = e * _DIN_SIN16 + (f / 0.7) * _DIN_COS16
    light = np.expm1(l99 / 105.51) / 0.0158
    return np.stack([light, a, b], axis=-1)


_STEPS_TO_XYZ = {
    Space.SRGB: (srgb_to_xyz,),
    Space.XYZ: (),
    Space.LAB: (lab_to_xyz,),
    Space.DIN99: (din99_to_lab, lab_to_xyz),
}
_STEPS_FROM_XYZ = {
    Space.SRGB: (xyz_to_srgb,),
    Space.XYZ: (),
    Space.LAB: (xyz_to_lab,),
    Space.DIN99: (xyz_to_lab, lab_to_din99),
}


def to_space(values: np.ndarray, source: Space, target: Space) -> np.ndarray:
    """Convert an (..., 3) array between spaces; identity when equal."""
    if source is target:
        return np.asarray(values, dtype=np.float64)
    # Short-circuit the common LAB<->DIN99 hop to avoid an XYZ round trip.
    if source is Space.LAB and target is Space.DIN99:
        return lab_to_din99(values)
    if source is Space.DIN99 and target is Space.LAB:
        return din99_to_lab(values)
    out = np.asarray(values, dtype=np.float64)
    for step in _STEPS_TO_XYZ[source]:
        out = step(out)
    for step in _STEPS_FROM_XYZ[target]:
        out = step(out)
    return out


_GAMUT_EPS = 1e-9


def convert(color: Color, target: Space) -> Color:
    """Convert a color to the target space.

    sRGB results falling outside [0, 1] are returned unclamped with
    ``out_of_gamut`` set; everything else is in-gamut by definition.
    """
    if color.space is target:
        return color
    out = to_space(color.as_array(), color.space, target)
    oog = False
    if target is Space.SRGB:
        oog = bool(np.any(out < -_GAMUT_EPS) or np.any(out > 1.0 + _GAMUT_EPS))
    return Color(target, float(out[0]), float(out[1]), float(out[2]), out_of_gamut=oog)


# ---------------------------------------------------------------------------
# Difference metrics.

def _lab_euclidean(lab1: np.ndarray, lab2: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum((lab1 - lab2) ** 2, axis=-1))


def _de94(lab1: np.ndarray, lab2: np.ndarray,
          kl: float = DE94_KL, k1: float = DE94_K1, k2: float = DE94_K2) -> np.ndarray:
    """CIE94 with lab1 as the reference operand (the metric is asymmetric)."""
    dl = lab1[..., 0] - lab2[..., 0]
    c1 = np.hypot(lab1[..., 1], lab1[..., 2])
    c2 = np.hypot(lab2[..., 1], lab2[..., 2])
    dc = c1 - c2
    da = lab1[..., 1] - lab2[..., 1]
    db = lab1[..., 2] - lab2[..., 2]
    dh2 = np.maximum(da**2 + db**2 - dc**2, 0.0)
    sc = 1.0 + k1 * c1
    sh = 1.0 + k2 * c1
    return np.sqrt((dl / kl) ** 2 + (dc / sc) ** 2 + dh2 / sh**2)


def _ciede2000(lab1: np.ndarray, lab2: np.ndarray) -> np.ndarray:
    """CIEDE2000 per the CIE formulation with all hue-case handling."""
    l1, a1, b1 = lab1[..., 0], lab1[..., 1], lab1[..., 2]
    l2, a2, b2 = lab2[..., 0], lab2[..., 1], lab2[..., 2]

    c1 = np.hypot(a1, b1)
    c2 = np.hypot(a2, b2)
    c_bar = 0.5 * (c1 + c2)
    c7 = c_bar**7
    g = 0.5 * (1.0 - np.sqrt(c7 / (c7 + 25.0**7)))
    a1p = (1.0 + g) * a1
    a2p = (1.0 + g) * a2
    c1p = np.hypot(a1p, b1)
    c2p = np.hypot(a2p, b2)

    h1p = np.degrees(np.arctan2(b1, a1p)) % 360.0
    h2p = np.degrees(np.arctan2(b2, a2p)) % 360.0
    h1p = np.where((b1 == 0) & (a1p == 0), 0.0, h1p)
    h2p = np.where((b2 == 0) & (a2p == 0), 0.0, h2p)

    dlp = l2 - l1
    dcp = c2p - c1p

    zero_chroma = (c1p * c2p) == 0.0
    dh = h2p - h1p
    dh = np.where(dh > 180.0, dh - 360.0, dh)
    dh = np.where(dh < -180.0, dh + 360.0, dh)
    dh = np.where(zero_chroma, 0.0, dh)
    dhp = 2.0 * np.sqrt(c1p * c2p) * np.sin(np.radians(dh) / 2.0)

    lbp = 0.5 * (l1 + l2)
    cbp = 0.5 * (c1p + c2p)

    hsum = h1p + h2p
    habs = np.abs(h1p - h2p)
    hbp = np.where(
        habs <= 180.0,
        0.5 * hsum,
        np.where(hsum < 360.0, 0.5 * (hsum + 360.0), 0.5 * (hsum - 360.0)),
    )
    hbp = np.where(zero_chroma, hsum, hbp)

    t = (
        1.0
        - 0.17 * np.cos(np.radians(hbp - 30.0))
        + 0.24 * np.cos(np.radians(2.0 * hbp))
        + 0.32 * np.cos(np.radians(3.0 * hbp + 6.0))
        - 0.20 * np.cos(np.radians(4.0 * hbp - 63.0))
    )
    dtheta = 30.0 * np.exp(-(((hbp - 275.0) / 25.0) ** 2))
    cb7 = cbp**7
    rc = 2.0 * np.sqrt(cb7 / (cb7 + 25.0**7))
    lm50 = (lbp - 50.0) ** 2
    sl = 1.0 + 0.015 * lm50 / np.sqrt(20.0 + lm50)
    sc = 1.0 + 0.045 * cbp
    sh = 1.0 + 0.015 * cbp * t
    rt = -np.sin(np.radians(2.0 * dtheta)) * rc

    fl = dlp / sl
    fc = dcp / sc
    fh = dhp / sh
    return np.sqrt(fl**2 + fc**2 + fh**2 + rt * fc * fh)


def metric_space(metric: DifferenceMetric) -> Space:
    """The space whose coordinates the metric consumes."""
    return Space.DIN99 if metric is DifferenceMetric.DIN99_EUCLIDEAN else Space.LAB


def delta_e_pairs(metric: DifferenceMetric, coords1: np.ndarray, coords2: np.ndarray) -> np.ndarray:
    """Vectorized difference between (..., 3) coordinate arrays.

    Inputs must already be in ``metric_space(metric)``; the first operand
    is the reference for the asymmetric DE94.
    """
    coords1 = np.asarray(coords1, dtype=np.float64)
    coords2 = np.asarray(coords2, dtype=np.float64)
    if metric in (DifferenceMetric.LAB_EUCLIDEAN, DifferenceMetric.DIN99_EUCLIDEAN):
        return _lab_euclidean(coords1, coords2)
    if metric is DifferenceMetric.DE94:
        return _de94(coords1, coords2)
    return _ciede2000(coords1, coords2)


def delta_e(metric: DifferenceMetric, a: Color, b: Color) -> float:
    """Perceptual difference between two colors under the chosen metric."""
    space = metric_space(metric)
    ca = to_space(a.as_array(), a.space, space)
    cb = to_space(b.as_array(), b.space, space)
    return float(delta_e_pairs(metric, ca, cb))


def black_white_distance(metric: DifferenceMetric) -> float:
    """The metric's black-to-white distance (normalization reference)."""
    return delta_e(metric, BLACK_LAB, WHITE_LAB)
