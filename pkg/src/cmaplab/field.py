"""Rectangular scalar grids with physical-domain metadata.

The grid is sampled at pixel centers: pixel (i, j) sits at
x = x0 + (i + 0.5) * (x1 - x0) / width and the same along y. Row j = 0 is
the y0 edge of the domain.
"""

from __future__ import annotations

import dataclasses

import numpy as np

__all__ = ["ScalarField", "FieldError"]

Domain = tuple[tuple[float, float], tuple[float, float]]


class FieldError(ValueError):
    """Raised for malformed grids or domains."""


@dataclasses.dataclass(frozen=True)
class ScalarField:
    values: np.ndarray
    domain: Domain
    value_range_hint: tuple[float, float] | None = None
    allow_nan: bool = dataclasses.field(default=False, compare=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.size == 0:
            raise FieldError(f"values must be a non-empty 2-D grid, got shape {values.shape}")
        values = np.ascontiguousarray(values)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        (x0, x1), (y0, y1) = self.domain
        if x0 == x1 or y0 == y1:
            raise FieldError(f"degenerate domain {self.domain}")
        object.__setattr__(self, "domain", ((float(x0), float(x1)), (float(y0), float(y1))))
        if np.isinf(values).any():
            raise FieldError("grid contains infinite values")
        if not self.allow_nan and np.isnan(values).any():
            raise FieldError("grid contains NaN values")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarField):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.value_range_hint == other.value_range_hint
            and self.values.shape == other.values.shape
            and np.array_equal(self.values, other.values, equal_nan=True)
        )

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    def pixel_xs(self) -> np.ndarray:
        (x0, x1), _ = self.domain
        return x0 + (np.arange(self.width) + 0.5) * (x1 - x0) / self.width

    def pixel_ys(self) -> np.ndarray:
        _, (y0, y1) = self.domain
        return y0 + (np.arange(self.height) + 0.5) * (y1 - y0) / self.height

    def value_range(self) -> tuple[float, float]:
        """The hinted range, or the grid extremes when no hint is set."""
        if self.value_range_hint is not None:
            return self.value_range_hint
        return (float(np.nanmin(self.values)), float(np.nanmax(self.values)))


def pixel_centers(lo: float, hi: float, n: int) -> np.ndarray:
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def center_grid(domain: Domain, width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    """Meshgrid of pixel-center coordinates, shape (height, width) each."""
    (x0, x1), (y0, y1) = domain
    xs = pixel_centers(x0, x1, width)
    ys = pixel_centers(y0, y1, height)
    return np.meshgrid(xs, ys)
