"""Neighbor-difference analysis of a colormapped field.

For every pixel, the absolute value differences and the perceptual color
differences to its 3-8 grid neighbors are collected, normalized, and
subtracted. A zero subtraction entry means the mapping is locally uniform:
the colormap spends color distance exactly proportionally to the data
distance.
"""

from __future__ import annotations

import dataclasses
import enum

import numpy as np

from .color import DifferenceMetric, black_white_distance, delta_e_pairs, metric_space, to_space
from .colormap import ColormapSpec, sample_array
from .errors import ParameterError
from .field import ScalarField
from .testfields import TestSpec

__all__ = [
    "OFFSETS",
    "FieldKind",
    "Aggregation",
    "NormalizationMode",
    "Normalization",
    "NeighborDifferenceField",
    "EvaluationBundle",
    "value_difference_field",
    "color_difference_field",
    "subtraction_field",
    "aggregate",
    "field_statistics",
    "pixel_observer",
    "evaluate",
]

# The 8-neighborhood in fixed (dx, dy) order.
OFFSETS: tuple[tuple[int, int], ...] = (
    (-1, -1), (0, -1), (1, -1),
    (-1, 0), (1, 0),
    (-1, 1), (0, 1), (1, 1),
)
# Each unordered pair is computed once for these four offsets and mirrored
# into the opposite slot; the "from" pixel is the earlier one in row-major
# order, which also fixes the reference operand for asymmetric metrics.
_FORWARD = ((1, 0), (-1, 1), (0, 1), (1, 1))
_OPPOSITE = {off: OFFSETS.index((-off[0], -off[1])) for off in OFFSETS}


class FieldKind(enum.Enum):
    VALUE = "value"
    COLOR = "color"
    SUBTRACTION = "subtraction"


class Aggregation(enum.Enum):
    MAX = "max"
    AVERAGE = "avg"
    MEDIAN = "median"


class NormalizationMode(enum.Enum):
    MINMAX = "minmax"
    BLACK_WHITE = "blackwhite"
    CUSTOM = "custom"


@dataclasses.dataclass(frozen=True)
class Normalization:
    mode: NormalizationMode = NormalizationMode.MINMAX
    custom_max: float | None = None

    def __post_init__(self) -> None:
        if self.mode is NormalizationMode.CUSTOM:
            if self.custom_max is None or not self.custom_max > 0:
                raise ParameterError(f"custom normalization needs a maximum > 0, got {self.custom_max}")

    @classmethod
    def parse(cls, text: str) -> "Normalization":
        """Accepts 'minmax', 'blackwhite', or 'custom:<max>'."""
        text = text.strip().lower()
        if text.startswith("custom:"):
            try:
                return cls(NormalizationMode.CUSTOM, float(text.split(":", 1)[1]))
            except ValueError as exc:
                raise ParameterError(f"bad custom normalization {text!r}: {exc}") from exc
        try:
            return cls(NormalizationMode(text))
        except ValueError:
            raise ParameterError(
                f"unknown normalization {text!r} (use minmax, blackwhite, or custom:<max>)"
            ) from None

    def describe(self) -> str:
        if self.mode is NormalizationMode.CUSTOM:
            return f"custom:{self.custom_max}"
        return self.mode.value


@dataclasses.dataclass(frozen=True)
class NeighborDifferenceField:
    """Per-pixel neighbor differences, raw and normalized.

    ``raw`` and ``normalized`` are (8, height, width) arrays indexed by
    OFFSETS; entries toward a neighbor outside the grid are NaN. The entry
    stored at p toward q always equals the one stored at q toward p.
    """

    kind: FieldKind
    raw: np.ndarray
    normalized: np.ndarray
    domain: tuple[tuple[float, float], tuple[float, float]]
    normalization: Normalization | None
    bounds: tuple[float, float]  # the (lo, hi) actually used to normalize
    metric: DifferenceMetric | None = None
    degenerate: bool = False

    @property
    def height(self) -> int:
        return self.raw.shape[1]

    @property
    def width(self) -> int:
        return self.raw.shape[2]

    def neighbor_count(self, i: int, j: int) -> int:
        return int(np.sum(~np.isnan(self.raw[:, j, i])))


def _pair_slices(width: int, height: int, dx: int, dy: int):
    """Index slices of the from-region and to-region for one offset."""
    x_lo, x_hi = max(0, -dx), width - max(0, dx)
    y_lo, y_hi = max(0, -dy), height - max(0, dy)
    src = (slice(y_lo, y_hi), slice(x_lo, x_hi))
    dst = (slice(y_lo + dy, y_hi + dy), slice(x_lo + dx, x_hi + dx))
    return src, dst


def _collect_pairs(width: int, height: int, pair_fn) -> np.ndarray:
    """Fill the (8, H, W) raw array from pair_fn(src_idx, dst_idx) values."""
    raw = np.full((len(OFFSETS), height, width), np.nan)
    for dx, dy in _FORWARD:
        src, dst = _pair_slices(width, height, dx, dy)
        d = pair_fn(src, dst)
        raw[OFFSETS.index((dx, dy))][src] = d
        raw[_OPPOSITE[(dx, dy)]][dst] = d
    return raw


def _normalize(raw: np.ndarray, norm: Normalization, metric: DifferenceMetric | None):
    valid = ~np.isnan(raw)
    if norm.mode is NormalizationMode.MINMAX:
        lo = float(np.nanmin(raw))
        hi = float(np.nanmax(raw))
        if hi == lo == 0.0:
            # Constant field: nothing to normalize against.
            normalized = np.where(valid, 0.0, np.nan)
            return normalized, (lo, hi), True
        if hi == lo:
            # All differences equal and nonzero: everything is the maximum.
            return np.where(valid, 1.0, np.nan), (0.0, hi), False
        normalized = (raw - lo) / (hi - lo)
        return normalized, (lo, hi), False
    if norm.mode is NormalizationMode.BLACK_WHITE:
        hi = black_white_distance(metric)
    else:
        hi = float(norm.custom_max)
    # Fixed-reference scales can exceed 1 when a color jump is larger than
    # the reference distance; clamp so entries stay in [0, 1].
    normalized = np.clip(raw / hi, 0.0, 1.0)
    normalized = np.where(valid, normalized, np.nan)
    return normalized, (0.0, hi), False


def value_difference_field(field: ScalarField) -> NeighborDifferenceField:
    """Absolute value differences to each neighbor, min-max normalized."""
    values = field.values
    if np.isnan(values).any():
        raise ParameterError("value differences need a NaN-free field")
    raw = _collect_pairs(
        field.width, field.height, lambda src, dst: np.abs(values[src] - values[dst])
    )
    norm = Normalization(NormalizationMode.MINMAX)
    normalized, bounds, degenerate = _normalize(raw, norm, None)
    return NeighborDifferenceField(
        FieldKind.VALUE, raw, normalized, field.domain, norm, bounds, None, degenerate
    )


def color_difference_field(
    field: ScalarField,
    cmap: ColormapSpec,
    metric: DifferenceMetric,
    norm: Normalization = Normalization(),
) -> NeighborDifferenceField:
    """Perceptual differences between the mapped colors of neighbors."""
    coords = sample_array(cmap, field.values)
    coords = to_space(coords, cmap.interpolation_space, metric_space(metric))
    raw = _collect_pairs(
        field.width,
        field.height,
        lambda src, dst: delta_e_pairs(metric, coords[src], coords[dst]),
    )
    normalized, bounds, degenerate = _normalize(raw, norm, metric)
    return NeighborDifferenceField(
        FieldKind.COLOR, raw, normalized, field.domain, norm, bounds, metric, degenerate
    )


def subtraction_field(
    value_f: NeighborDifferenceField, color_f: NeighborDifferenceField
) -> NeighborDifferenceField:
    """Normalized value minus normalized color differences, in [-1, 1]."""
    if value_f.raw.shape != color_f.raw.shape:
        raise ParameterError(
            f"field dimensions differ: {value_f.raw.shape[1:]} vs {color_f.raw.shape[1:]}"
        )
    diff = value_f.normalized - color_f.normalized
    return NeighborDifferenceField(
        FieldKind.SUBTRACTION,
        diff,
        diff,
        value_f.domain,
        None,
        (-1.0, 1.0),
        color_f.metric,
        value_f.degenerate or color_f.degenerate,
    )


def aggregate(f: NeighborDifferenceField, how: Aggregation) -> ScalarField:
    """Reduce each pixel's neighbor entries to one scalar.

    For the subtraction field, MAX picks the entry of largest magnitude and
    keeps its sign.
    """
    entries = f.normalized
    if how is Aggregation.MAX:
        if f.kind is FieldKind.SUBTRACTION:
            filled = np.where(np.isnan(entries), -np.inf, np.abs(entries))
            pick = np.argmax(filled, axis=0)
            out = np.take_along_axis(entries, pick[None], axis=0)[0]
        else:
            out = np.nanmax(entries, axis=0)
    elif how is Aggregation.AVERAGE:
        out = np.nanmean(entries, axis=0)
    else:
        out = np.nanmedian(entries, axis=0)
    return ScalarField(out, f.domain)


@dataclasses.dataclass(frozen=True)
class FieldStatistics:
    min: float
    max: float
    mean: float
    median: float
    stddev: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def field_statistics(f: NeighborDifferenceField) -> FieldStatistics:
    """Summary over all normalized entries (population stddev)."""
    vals = f.normalized[~np.isnan(f.normalized)]
    return FieldStatistics(
        min=float(vals.min()),
        max=float(vals.max()),
        mean=float(vals.mean()),
        median=float(np.median(vals)),
        stddev=float(vals.std()),
    )


@dataclasses.dataclass(frozen=True)
class EvaluationBundle:
    """Everything one analysis run produced, plus its provenance."""

    source_field: ScalarField
    colormap: ColormapSpec
    metric: DifferenceMetric
    normalization: Normalization
    aggregation: Aggregation
    value_field: NeighborDifferenceField
    color_field: NeighborDifferenceField
    subtraction_field: NeighborDifferenceField
    test_spec: TestSpec | None = None

    @property
    def degenerate(self) -> bool:
        return self.value_field.degenerate or self.color_field.degenerate

    def statistics(self) -> dict[str, FieldStatistics]:
        return {
            "value": field_statistics(self.value_field),
            "color": field_statistics(self.color_field),
            "subtraction": field_statistics(self.subtraction_field),
        }


def evaluate(
    field: ScalarField,
    cmap: ColormapSpec,
    metric: DifferenceMetric = DifferenceMetric.CIEDE2000,
    normalization: Normalization = Normalization(),
    aggregation: Aggregation = Aggregation.MAX,
    test_spec: TestSpec | None = None,
) -> EvaluationBundle:
    """Run the full pipeline: value, color, and subtraction fields."""
    value_f = value_difference_field(field)
    color_f = color_difference_field(field, cmap, metric, normalization)
    sub_f = subtraction_field(value_f, color_f)
    return EvaluationBundle(
        source_field=field,
        colormap=cmap,
        metric=metric,
        normalization=normalization,
        aggregation=aggregation,
        value_field=value_f,
        color_field=color_f,
        subtraction_field=sub_f,
        test_spec=test_spec,
    )


@dataclasses.dataclass(frozen=True)
class ObserverRow:
    offset: tuple[int, int]
    neighbor: tuple[int, int]
    neighbor_value: float
    value_raw: float
    value_normalized: float
    color_raw: float
    color_normalized: float
    subtraction: float

    def to_dict(self) -> dict:
        return {
            "offset": list(self.offset),
            "neighbor": list(self.neighbor),
            "neighbor_value": self.neighbor_value,
            "value_raw": self.value_raw,
            "value_normalized": self.value_normalized,
            "color_raw": self.color_raw,
            "color_normalized": self.color_normalized,
            "subtraction": self.subtraction,
        }


@dataclasses.dataclass(frozen=True)
class ObserverReport:
    pixel: tuple[int, int]
    value: float
    rows: tuple[ObserverRow, ...]

    def to_dict(self) -> dict:
        return {
            "pixel": list(self.pixel),
            "value": self.value,
            "rows": [r.to_dict() for r in self.rows],
        }


def pixel_observer(bundle: EvaluationBundle, i: int, j: int) -> ObserverReport:
    """Raw and normalized neighborhood entries of all three fields at (i, j)."""
    field = bundle.source_field
    if not (0 <= i < field.width and 0 <= j < field.height):
        raise IndexError(f"pixel ({i}, {j}) outside {field.width}x{field.height} grid")
    rows = []
    for k, (dx, dy) in enumerate(OFFSETS):
        ni, nj = i + dx, j + dy
        if not (0 <= ni < field.width and 0 <= nj < field.height):
            continue
        rows.append(
            ObserverRow(
                offset=(dx, dy),
                neighbor=(ni, nj),
                neighbor_value=float(field.values[nj, ni]),
                value_raw=float(bundle.value_field.raw[k, j, i]),
                value_normalized=float(bundle.value_field.normalized[k, j, i]),
                color_raw=float(bundle.color_field.raw[k, j, i]),
                color_normalized=float(bundle.color_field.normalized[k, j, i]),
                subtraction=float(bundle.subtraction_field.normalized[k, j, i]),
            )
        )
    return ObserverReport(pixel=(i, j), value=float(field.values[j, i]), rows=tuple(rows))
