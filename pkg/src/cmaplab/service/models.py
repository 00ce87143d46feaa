"""Pydantic request/response models for the HTTP facade.

Colormap payloads mirror the on-disk document schema; semantic validation
(ordering, ranges, gamut) stays in the colormap module so the service and
the file parser reject documents identically.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

RGB = list[float]


class ColormapKeyModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    position: float
    left_rgb: RGB = Field(min_length=3, max_length=3)
    right_rgb: RGB = Field(min_length=3, max_length=3)


class ColormapModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    range: list[float] = Field(min_length=2, max_length=2)
    interpolation_space: str = "lab"
    nan_color: Optional[RGB] = Field(default=None, min_length=3, max_length=3)
    keys: list[ColormapKeyModel] = Field(min_length=2)

    def to_document(self) -> dict:
        doc = {
            "range": self.range,
            "interpolation_space": self.interpolation_space,
            "keys": [k.model_dump() for k in self.keys],
        }
        if self.nan_color is not None:
            doc["nan_color"] = self.nan_color
        return doc


class ColormapCreate(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(min_length=1, max_length=128)
    spec: ColormapModel


class NoiseModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: str
    amplitude: Optional[float] = None
    replacement_range: Optional[list[float]] = Field(default=None, min_length=2, max_length=2)
    clipping: bool = False
    proportion: float = 1.0
    distribution: str = "uniform"
    source: str = "random"
    seed: int = 0
    perlin_scale: float = 8.0


class TestSpecModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    function: str
    params: dict = Field(default_factory=dict)
    resolution: list[int] = Field(min_length=2, max_length=2)
    seed: int = 0
    noise: Optional[NoiseModel] = None

    def to_document(self) -> dict:
        return {
            "function": self.function,
            "params": self.params,
            "resolution": self.resolution,
            "seed": self.seed,
            "noise": self.noise.model_dump() if self.noise else None,
        }


class EvaluateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    test: TestSpecModel
    colormap: str
    metric: str = "ciede2000"
    normalization: str = "minmax"
    aggregation: str = "max"


class StatisticsModel(BaseModel):
    min: float
    max: float
    mean: float
    median: float
    stddev: float


class EvaluateResponse(BaseModel):
    bundle_id: str
    statistics: dict[str, StatisticsModel]
    degenerate: bool
    cached: bool
    field: dict


class ColormapSaved(BaseModel):
    name: str
    sha256: str
