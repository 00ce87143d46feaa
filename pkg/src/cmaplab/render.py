"""Rasterize fields and evaluation panels to 8-bit sRGB images.

The PNG encoder is self-contained (zlib + fixed filter) so identical
inputs always produce identical bytes; PPM (binary P6) is the
dependency-free fallback format.
"""

from __future__ import annotations

import dataclasses
import enum
import struct
import zlib

import numpy as np

from .color import Color, Space, to_space
from .colormap import ColormapKey, ColormapSpec, grayscale_spec, sample_array
from .errors import ParameterError
from .evaluation import Aggregation, EvaluationBundle, aggregate
from .field import ScalarField
from .fileio import atomic_write_bytes

__all__ = [
    "Image",
    "ImageFormat",
    "render_field",
    "render_scalar_unit",
    "render_evaluation",
    "PANEL_NAMES",
    "encode_ppm",
    "encode_png",
    "write_image",
]


class ImageFormat(enum.Enum):
    PNG = "png"
    PPM = "ppm"


@dataclasses.dataclass(frozen=True)
class Image:
    """8-bit sRGB pixel grid, shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 3 or px.shape[2] != 3 or px.shape[0] == 0 or px.shape[1] == 0:
            raise ParameterError(f"image pixels must be (h, w, 3) and non-empty, got {px.shape}")
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def _encode_srgb(coords: np.ndarray, space: Space) -> np.ndarray:
    rgb = to_space(coords, space, Space.SRGB)
    return (np.clip(rgb, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def render_field(field: ScalarField, cmap: ColormapSpec) -> Image:
    """Map every pixel value through the colormap; nearest-neighbor, no
    smoothing."""
    coords = sample_array(cmap, field.values)
    return Image(_encode_srgb(coords, cmap.interpolation_space))


def _unit_ramp_white_to_black() -> ColormapSpec:
    white = Color(Space.LAB, 100.0, 0.0, 0.0)
    black = Color(Space.LAB, 0.0, 0.0, 0.0)
    return ColormapSpec(
        (ColormapKey(0.0, white, white), ColormapKey(1.0, black, black)),
        interpolation_space=Space.LAB,
    )


def _diverging_red_white_blue() -> ColormapSpec:
    # Negative = red: the colormap over-spends color distance there (the
    # discontinuity marker); positive = blue: data gradients the map
    # under-represents.
    red = Color(Space.SRGB, 0.706, 0.016, 0.150)
    blue = Color(Space.SRGB, 0.230, 0.299, 0.754)
    white = Color(Space.SRGB, 1.0, 1.0, 1.0)
    return ColormapSpec(
        (
            ColormapKey(-1.0, red, red),
            ColormapKey(0.0, white, white),
            ColormapKey(1.0, blue, blue),
        ),
        interpolation_space=Space.LAB,
    )


def render_scalar_unit(field: ScalarField, kind: str) -> Image:
    """Render an aggregated difference field: 'ramp' expects [0, 1] and maps
    white (0) to black (1); 'diverging' expects [-1, 1] centered at white."""
    spec = _unit_ramp_white_to_black() if kind == "ramp" else _diverging_red_white_blue()
    return render_field(field, spec)


PANEL_NAMES = ("grayscale", "mapped", "value", "color", "subtraction")


def render_evaluation(
    bundle: EvaluationBundle, aggregation: Aggregation | None = None
) -> dict[str, Image]:
    """The five panels: grayscale reference, mapped field, and the three
    aggregated difference fields."""
    how = aggregation or bundle.aggregation
    field = bundle.source_field
    lo, hi = field.value_range()
    if hi == lo:
        hi = lo + 1.0  # constant field still renders (single gray level)
    panels = {
        "grayscale": render_field(field, grayscale_spec(lo, hi)),
        "mapped": render_field(field, bundle.colormap),
        "value": render_scalar_unit(aggregate(bundle.value_field, how), "ramp"),
        "color": render_scalar_unit(aggregate(bundle.color_field, how), "ramp"),
        "subtraction": render_scalar_unit(aggregate(bundle.subtraction_field, how), "diverging"),
    }
    return panels


# ---------------------------------------------------------------------------
# Encoders.

def encode_ppm(img: Image) -> bytes:
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(payload, zlib.crc32(tag)))
    )


def encode_png(img: Image) -> bytes:
    ihdr = struct.pack(">IIBBBBB", img.width, img.height, 8, 2, 0, 0, 0)
    stride = img.width * 3
    flat = img.pixels.tobytes()
    filtered = b"".join(b"\x00" + flat[y * stride : (y + 1) * stride] for y in range(img.height))
    idat = zlib.compress(filtered, 6)
    return (
        b"\x89PNG\r\n\x1a\n"
        + _png_chunk(b"IHDR", ihdr)
        + _png_chunk(b"IDAT", idat)
        + _png_chunk(b"IEND", b"")
    )


def encode_image(img: Image, fmt: ImageFormat) -> bytes:
    return encode_png(img) if fmt is ImageFormat.PNG else encode_ppm(img)


def write_image(img: Image, path, fmt: ImageFormat | None = None) -> None:
    """Encode and write atomically; format inferred from the suffix when
    not given."""
    if fmt is None:
        suffix = str(path).rsplit(".", 1)[-1].lower()
        try:
            fmt = ImageFormat(suffix)
        except ValueError:
            raise ParameterError(f"cannot infer image format from {path!r} (use .png or .ppm)") from None
    atomic_write_bytes(path, encode_image(img, fmt))
