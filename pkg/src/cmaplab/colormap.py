"""Continuous colormap model: ordered keys, twin-key discontinuities, sampling.

A colormap is a list of position-ordered keys over a data range. Each key
carries a left and a right color; when they differ the key is a "twin key"
and the map jumps at that position (sampling is right-continuous there).
Between keys, colors are interpolated component-wise in the configured
interpolation space.
"""

from __future__ import annotations

import dataclasses
import json
import math
import warnings

import numpy as np

from .color import Color, Space, convert, to_space

__all__ = [
    "ColormapKey",
    "ColormapSpec",
    "ColormapError",
    "sample",
    "sample_array",
    "parse_spec",
    "serialize_spec",
    "grayscale_spec",
    "diverging_spec",
]

INTERPOLATION_SPACES = (Space.LAB, Space.DIN99, Space.SRGB)

DEFAULT_NAN_COLOR = Color(Space.SRGB, 0.5, 0.5, 0.5)


class ColormapError(ValueError):
    """Raised for invalid colormap specifications or documents."""


@dataclasses.dataclass(frozen=True)
class ColormapKey:
    position: float
    left_color: Color
    right_color: Color

    def __post_init__(self) -> None:
        if not math.isfinite(self.position):
            raise ColormapError(f"key position must be finite, got {self.position}")

    @property
    def twin(self) -> bool:
        return self.left_color != self.right_color


@dataclasses.dataclass(frozen=True)
class ColormapSpec:
    keys: tuple[ColormapKey, ...]
    interpolation_space: Space = Space.LAB
    nan_color: Color = DEFAULT_NAN_COLOR

    def __post_init__(self) -> None:
        keys = tuple(self.keys)
        object.__setattr__(self, "keys", keys)
        if len(keys) < 2:
            raise ColormapError("a colormap needs at least 2 keys")
        positions = [k.position for k in keys]
        for a, b in zip(positions, positions[1:]):
            if a == b:
                raise ColormapError(f"duplicate key position {a}")
            if a > b:
                raise ColormapError("key positions must be strictly increasing")
        if self.interpolation_space not in INTERPOLATION_SPACES:
            raise ColormapError(f"unsupported interpolation space {self.interpolation_space}")

    @property
    def range(self) -> tuple[float, float]:
        """Data interval covered by the keys (first/last key positions)."""
        return (self.keys[0].position, self.keys[-1].position)

    def positions(self) -> np.ndarray:
        return np.array([k.position for k in self.keys], dtype=np.float64)


def _key_coords(spec: ColormapSpec) -> tuple[np.ndarray, np.ndarray]:
    """Left/right key colors as (n, 3) arrays in the interpolation space."""
    space = spec.interpolation_space
    left = np.array(
        [to_space(k.left_color.as_array(), k.left_color.space, space) for k in spec.keys]
    )
    right = np.array(
        [to_space(k.right_color.as_array(), k.right_color.space, space) for k in spec.keys]
    )
    return left, right


def sample_array(spec: ColormapSpec, values: np.ndarray) -> np.ndarray:
    """Sample the colormap at an array of data values.

    Returns an (..., 3) array in the interpolation space. NaNs map to the
    nan color; out-of-range values clamp to the end keys. Exactly at a key
    position the right color wins (right-continuity at twin keys).
    """
    v = np.asarray(values, dtype=np.float64)
    positions = spec.positions()
    left, right = _key_coords(spec)

    flat = v.reshape(-1)
    nan_mask = np.isnan(flat)
    filled = np.where(nan_mask, positions[0], flat)

    # side='right' puts an exact key hit into the segment that starts there,
    # which is what makes twin keys right-continuous.
    seg = np.searchsorted(positions, filled, side="right") - 1
    seg = np.clip(seg, 0, len(positions) - 2)

    p0 = positions[seg]
    p1 = positions[seg + 1]
    t = (filled - p0) / (p1 - p0)
    t = np.clip(t, 0.0, 1.0)

    start = right[seg]
    end = left[seg + 1]
    out = start + t[:, None] * (end - start)

    # Values at/after the last key clamp to its right color.
    at_end = filled >= positions[-1]
    out[at_end] = right[-1]
    below = filled <= positions[0]
    out[below] = right[0]

    if nan_mask.any():
        nan_rgb = to_space(spec.nan_color.as_array(), spec.nan_color.space, spec.interpolation_space)
        out[nan_mask] = nan_rgb

    return out.reshape(v.shape + (3,))


def sample(spec: ColormapSpec, value: float) -> Color:
    """Sample one data value; returns a color in the interpolation space."""
    coords = sample_array(spec, np.array([value]))[0]
    return Color(spec.interpolation_space, *map(float, coords))


# ---------------------------------------------------------------------------
# Serialized form: a UTF-8 JSON document.
#
#   {
#     "range": [min, max],
#     "interpolation_space": "lab" | "din99" | "srgb",
#     "nan_color": [r, g, b],
#     "keys": [{"position": p, "left_rgb": [r,g,b], "right_rgb": [r,g,b]}, ...]
#   }
#
# All rgb components are sRGB in [0, 1].

_KNOWN_TOP_LEVEL = {"range", "interpolation_space", "nan_color", "keys"}


def _rgb_triplet(value, what: str) -> Color:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ColormapError(f"{what} must be an [r, g, b] triplet, got {value!r}")
    try:
        r, g, b = (float(x) for x in value)
    except (TypeError, ValueError) as exc:
        raise ColormapError(f"{what} has non-numeric components: {value!r}") from exc
    if not all(math.isfinite(x) and 0.0 <= x <= 1.0 for x in (r, g, b)):
        raise ColormapError(f"{what} components must be finite and in [0, 1]: {value!r}")
    return Color(Space.SRGB, r, g, b)


def parse_spec(text: bytes | str) -> ColormapSpec:
    """Parse a colormap document; raises ColormapError with the defect named."""
    try:
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        doc = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ColormapError(f"not a valid UTF-8 JSON document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ColormapError("document root must be a JSON object")

    unknown = sorted(set(doc) - _KNOWN_TOP_LEVEL)
    if unknown:
        warnings.warn(f"ignoring unknown colormap fields: {', '.join(unknown)}", stacklevel=2)

    for field in ("range", "keys"):
        if field not in doc:
            raise ColormapError(f"missing required field '{field}'")

    rng = doc["range"]
    if not isinstance(rng, (list, tuple)) or len(rng) != 2:
        raise ColormapError(f"'range' must be [min, max], got {rng!r}")
    lo, hi = float(rng[0]), float(rng[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ColormapError(f"'range' must satisfy min < max, got [{lo}, {hi}]")

    space_tag = doc.get("interpolation_space", "lab")
    try:
        space = Space(str(space_tag).lower())
    except ValueError:
        raise ColormapError(f"unknown interpolation space tag {space_tag!r}") from None
    if space not in INTERPOLATION_SPACES:
        raise ColormapError(f"unknown interpolation space tag {space_tag!r}")

    nan_color = DEFAULT_NAN_COLOR
    if "nan_color" in doc:
        nan_color = _rgb_triplet(doc["nan_color"], "nan_color")

    raw_keys = doc["keys"]
    if not isinstance(raw_keys, list) or len(raw_keys) < 2:
        raise ColormapError("'keys' must be a list of at least 2 keys")
    keys = []
    seen = set()
    for i, rk in enumerate(raw_keys):
        if not isinstance(rk, dict) or "position" not in rk:
            raise ColormapError(f"key {i} must be an object with a 'position'")
        pos = float(rk["position"])
        if pos in seen:
            raise ColormapError(f"duplicate key position {pos}")
        seen.add(pos)
        if "left_rgb" not in rk or "right_rgb" not in rk:
            raise ColormapError(f"key {i} needs 'left_rgb' and 'right_rgb'")
        keys.append(
            ColormapKey(
                pos,
                _rgb_triplet(rk["left_rgb"], f"key {i} left_rgb"),
                _rgb_triplet(rk["right_rgb"], f"key {i} right_rgb"),
            )
        )
    for a, b in zip(keys, keys[1:]):
        if a.position > b.position:
            raise ColormapError("key positions must be strictly increasing")

    if keys[0].position != lo or keys[-1].position != hi:
        raise ColormapError(
            f"first/last key positions ({keys[0].position}, {keys[-1].position}) "
            f"must equal the range endpoints ({lo}, {hi})"
        )
    return ColormapSpec(tuple(keys), interpolation_space=space, nan_color=nan_color)


def _srgb_components(color: Color) -> list[float]:
    rgb = convert(color, Space.SRGB)
    # The document schema stores [0,1] sRGB; clamp out-of-gamut values here,
    # at encoding time, never during evaluation math.
    return [min(1.0, max(0.0, c)) for c in rgb.components]


def serialize_spec(spec: ColormapSpec) -> bytes:
    lo, hi = spec.range
    doc = {
        "range": [lo, hi],
        "interpolation_space": spec.interpolation_space.value,
        "nan_color": _srgb_components(spec.nan_color),
        "keys": [
            {
                "position": k.position,
                "left_rgb": _srgb_components(k.left_color),
                "right_rgb": _srgb_components(k.right_color),
            }
            for k in spec.keys
        ],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Stock specs used by the analysis pipeline and tests.

def grayscale_spec(lo: float, hi: float) -> ColormapSpec:
    """Perceptually uniform gray ramp: L* linear in value from 0 to 100."""
    return ColormapSpec(
        (
            ColormapKey(lo, Color(Space.LAB, 0.0, 0.0, 0.0), Color(Space.LAB, 0.0, 0.0, 0.0)),
            ColormapKey(hi, Color(Space.LAB, 100.0, 0.0, 0.0), Color(Space.LAB, 100.0, 0.0, 0.0)),
        ),
        interpolation_space=Space.LAB,
    )


def diverging_spec(lo: float, hi: float, negative: Color, positive: Color) -> ColormapSpec:
    """Three-key diverging map through white at the midpoint of [lo, hi]."""
    mid = 0.5 * (lo + hi)
    white = Color(Space.SRGB, 1.0, 1.0, 1.0)
    return ColormapSpec(
        (
            ColormapKey(lo, negative, negative),
            ColormapKey(mid, white, white),
            ColormapKey(hi, positive, positive),
        ),
        interpolation_space=Space.LAB,
    )
