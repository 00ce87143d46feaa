"""Analytic test-field generators.

Every generator is a closed-form function rasterized at pixel centers, so
fields are resolution-independent: refining the grid and sampling the old
centers reproduces the old values bit for bit. The ``*_value`` functions
expose the underlying formulas for direct evaluation; the ``gen_*``
functions rasterize them into ScalarFields.
"""

from __future__ import annotations

import dataclasses
import enum
import warnings
from typing import Callable, Sequence

import numpy as np

from . import benchmarks
from .errors import ParameterError
from .field import ScalarField, center_grid
from .noise import NoiseOptions, apply_noise

__all__ = [
    "Shape",
    "ThresholdKind",
    "AliasingWarning",
    "gen_step",
    "gen_gradient",
    "gen_min_max_saddle",
    "gen_ridge_valley",
    "gen_frequency",
    "gen_threshold",
    "gen_little_bit",
    "gen_collection",
    "ParamSpec",
    "FunctionDef",
    "FUNCTIONS",
    "TestSpec",
]

Resolution = tuple[int, int]


class Shape(enum.Enum):
    LINEAR = "linear"
    CONCAVE = "concave"
    CONVEX = "convex"


class ThresholdKind(enum.Enum):
    LINEAR = "linear"
    FLAT = "flat"
    STEEP = "steep"


class AliasingWarning(UserWarning):
    """The grid underresolves the highest requested frequency."""


def _check_resolution(resolution: Resolution) -> tuple[int, int]:
    w, h = resolution
    if w < 1 or h < 1:
        raise ParameterError(f"resolution must be positive, got {resolution}")
    return int(w), int(h)


def _check_exponent(b: int) -> int:
    if int(b) != b or b < 1:
        raise ParameterError(f"exponent b must be an integer >= 1, got {b}")
    return int(b)


def _profile(s: np.ndarray, b: int, shape: Shape) -> np.ndarray:
    """Interpolation weight on [0, 1]: linear ramp, or the concave/convex
    polynomial of order b."""
    if shape is Shape.LINEAR or b == 1:
        return np.asarray(s, dtype=np.float64)
    if shape is Shape.CONCAVE:
        return 1.0 - (1.0 - s) ** b
    return np.asarray(s, dtype=np.float64) ** b


def _g(y: np.ndarray, r: float, R: float, b: int, ty: Shape) -> np.ndarray:
    """Edge profile: runs from r at y=0 to R at y=1."""
    return (R - r) * _profile(y, b, ty) + r


# ---------------------------------------------------------------------------
# Step function.

def step_value(x, y, a: Sequence[float]) -> np.ndarray:
    """Checker of constant columns: even floor(x) columns carry a[floor(x)/2],
    odd columns run through all of a as y increases."""
    a = np.asarray(a, dtype=np.float64)
    xi = np.floor(x).astype(np.int64)
    yi = np.floor(y).astype(np.int64)
    return np.where(xi % 2 == 0, a[xi // 2], a[yi])


def _check_step_values(a: Sequence[float]) -> np.ndarray:
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ParameterError("step needs at least two test values")
    if not np.all(np.diff(arr) > 0):
        raise ParameterError("step test values must be strictly increasing")
    return arr


def gen_step(a: Sequence[float], resolution: Resolution) -> ScalarField:
    arr = _check_step_values(a)
    n = arr.size
    w, h = _check_resolution(resolution)
    domain = ((0.0, 2.0 * n), (0.0, float(n)))
    xx, yy = center_grid(domain, w, h)
    values = step_value(xx, yy, arr)
    return ScalarField(values, domain, value_range_hint=(float(arr[0]), float(arr[-1])))


# ---------------------------------------------------------------------------
# Gradient variation.

def gradient_value(x, y, r: float, R: float, b: int, tx: Shape, ty: Shape) -> np.ndarray:
    gy = _g(np.asarray(y, dtype=np.float64), r, R, b, ty)
    return (gy - r) * _profile(np.asarray(x, dtype=np.float64), b, tx) + r


def gen_gradient(
    r: float, R: float, b: int, tx: Shape, ty: Shape, resolution: Resolution
) -> ScalarField:
    if r == R:
        raise ParameterError("gradient requires r != R")
    b = _check_exponent(b)
    w, h = _check_resolution(resolution)
    domain = ((0.0, 1.0), (0.0, 1.0))
    xx, yy = center_grid(domain, w, h)
    values = gradient_value(xx, yy, r, R, b, tx, ty)
    return ScalarField(values, domain, value_range_hint=(min(r, R), max(r, R)))


# ---------------------------------------------------------------------------
# Local topology: minimum / maximum / saddle.

def min_max_saddle_value(x, y, o: float, p: float, m: float) -> np.ndarray:
    return o * np.asarray(x, dtype=np.float64) ** 2 + p * np.asarray(y, dtype=np.float64) ** 2 + m


def gen_min_max_saddle(
    o: float, p: float, m: float, resolution: Resolution,
    domain: tuple[tuple[float, float], tuple[float, float]] = ((-1.0, 1.0), (-1.0, 1.0)),
) -> ScalarField:
    if o == 0 or p == 0:
        raise ParameterError("o and p must be nonzero (degenerate critical point)")
    w, h = _check_resolution(resolution)
    xx, yy = center_grid(domain, w, h)
    return ScalarField(min_max_saddle_value(xx, yy, o, p, m), domain)


# ---------------------------------------------------------------------------
# Ridge / valley lines.

def ridge_valley_value(
    x, y, r: float, R: float, b: int, tx: Shape, ty: Shape, g_b: int | None = None
) -> np.ndarray:
    gy = _g(np.asarray(y, dtype=np.float64), r, R, b if g_b is None else g_b, ty)
    ax = np.abs(np.asarray(x, dtype=np.float64))
    if tx is Shape.LINEAR or b == 1:
        slope = ax
    elif tx is Shape.CONCAVE:
        slope = ax**b
    else:
        slope = 1.0 - (1.0 - ax) ** b
    return (r - gy) * slope + gy


def gen_ridge_valley(
    r: float, R: float, b: int, tx: Shape, ty: Shape, resolution: Resolution,
    g_b: int | None = None,
) -> ScalarField:
    if r == R:
        raise ParameterError("ridge/valley requires r != R")
    b = _check_exponent(b)
    if g_b is not None:
        g_b = _check_exponent(g_b)
    w, h = _check_resolution(resolution)
    domain = ((-1.0, 1.0), (0.0, 1.0))
    xx, yy = center_grid(domain, w, h)
    values = ridge_valley_value(xx, yy, r, R, b, tx, ty, g_b)
    return ScalarField(values, domain, value_range_hint=(min(r, R), max(r, R)))


# ---------------------------------------------------------------------------
# Frequency variation.

def frequency_segments(d: int) -> np.ndarray:
    """Segment boundaries x_0..x_{D+1}: x_j is the j-th harmonic number."""
    return np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, d + 2))])


def frequency_value(x, y, d: int, w_amp: float, u: float) -> np.ndarray:
    bounds = frequency_segments(d)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    seg = np.clip(np.searchsorted(bounds, x, side="right") - 1, 0, d)
    j = seg + 1
    return w_amp * (1.0 - y) * np.sin(2.0 * np.pi * j * (x - bounds[j])) + u


def gen_frequency(d: int, w_amp: float, u: float, resolution: Resolution) -> ScalarField:
    if int(d) != d or d < 0:
        raise ParameterError(f"frequency count D must be an integer >= 0, got {d}")
    if w_amp <= 0:
        raise ParameterError(f"amplitude W must be positive, got {w_amp}")
    d = int(d)
    w, h = _check_resolution(resolution)
    bounds = frequency_segments(d)
    domain = ((0.0, float(bounds[-1])), (0.0, 1.0))
    dx = bounds[-1] / w
    pixels_per_period = (1.0 / (d + 1)) / dx
    if pixels_per_period < 8.0:
        warnings.warn(
            f"only {pixels_per_period:.1f} pixels per period at the highest frequency; "
            "expect aliasing (>= 8 recommended)",
            AliasingWarning,
            stacklevel=2,
        )
    xx, yy = center_grid(domain, w, h)
    values = frequency_value(xx, yy, d, w_amp, u)
    return ScalarField(values, domain, value_range_hint=(u - w_amp, u + w_amp))


# ---------------------------------------------------------------------------
# Threshold variation.

def threshold_edge_high(y, m: float, M: float, t: float) -> np.ndarray:
    """Value on the x = +1 edge: runs from M at y=-1 to t at y=1."""
    y = np.asarray(y, dtype=np.float64)
    return (M + t) / 2.0 - (M - t) / 2.0 * y


def threshold_edge_low(y, m: float, M: float, t: float) -> np.ndarray:
    """Value on the x = -1 edge: runs from m at y=-1 to t at y=1."""
    y = np.asarray(y, dtype=np.float64)
    return (t + m) / 2.0 + (t - m) / 2.0 * y


def threshold_value(x, y, m: float, M: float, t: float, kind: ThresholdKind, b: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    edge = np.where(x <= 0, threshold_edge_low(y, m, M, t), threshold_edge_high(y, m, M, t))
    ax = np.abs(x)
    if kind is ThresholdKind.LINEAR or b == 1:
        slope = ax
    elif kind is ThresholdKind.FLAT:
        slope = ax**b
    else:
        slope = 1.0 - (1.0 - ax) ** b
    return (edge - t) * slope + t


def gen_threshold(
    m: float, M: float, t: float, kind: ThresholdKind, b: int, resolution: Resolution
) -> ScalarField:
    if not m < t < M:
        raise ParameterError(f"threshold needs m < t < M, got m={m}, t={t}, M={M}")
    b = _check_exponent(b)
    w, h = _check_resolution(resolution)
    domain = ((-1.0, 1.0), (-1.0, 1.0))
    xx, yy = center_grid(domain, w, h)
    values = threshold_value(xx, yy, m, M, t, kind, b)
    return ScalarField(values, domain, value_range_hint=(m, M))


# ---------------------------------------------------------------------------
# Little-bit variation: a linear ramp with n shallow grooves.

def little_bit_amplitude(x, g_m: float, g_M: float, grooves: int) -> np.ndarray:
    """Groove depth: interpolates g_m (first groove) to g_M (last).

    With a single groove the interpolation is degenerate and the depth is
    g_m.
    """
    if grooves == 1:
        return np.full_like(np.asarray(x, dtype=np.float64), g_m)
    xi = np.floor(x)
    return g_m + (xi - 1.0) / (2.0 * grooves - 2.0) * (g_M - g_m)


def little_bit_value(x, y, m: float, M: float, g_m: float, g_M: float, grooves: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    background = m + (M - m) * y
    groove = little_bit_amplitude(x, g_m, g_M, grooves) * np.sin(np.pi * (x - np.floor(x)))
    return background - np.where(np.floor(x).astype(np.int64) % 2 == 0, 0.0, groove)


def gen_little_bit(
    m: float, M: float, g_m: float, g_M: float, grooves: int, resolution: Resolution
) -> ScalarField:
    if not m < M:
        raise ParameterError(f"little_bit needs m < M, got m={m}, M={M}")
    if not 0 < g_m <= g_M:
        raise ParameterError(f"little_bit needs 0 < g_m <= g_M, got g_m={g_m}, g_M={g_M}")
    if int(grooves) != grooves or grooves < 1:
        raise ParameterError(f"groove count must be an integer >= 1, got {grooves}")
    grooves = int(grooves)
    w, h = _check_resolution(resolution)
    domain = ((0.0, 2.0 * grooves + 1.0), (0.0, 1.0))
    xx, yy = center_grid(domain, w, h)
    values = little_bit_value(xx, yy, m, M, g_m, g_M, grooves)
    return ScalarField(values, domain, value_range_hint=(m - g_M, M))


# ---------------------------------------------------------------------------
# Benchmark collection.

def gen_collection(
    function_id: str,
    resolution: Resolution,
    rescale: tuple[float, float] | None = None,
    max_iter: int = 100,
) -> ScalarField:
    try:
        bench = benchmarks.BENCHMARKS[function_id]
    except KeyError:
        known = ", ".join(sorted(benchmarks.BENCHMARKS))
        raise ParameterError(f"unknown collection function {function_id!r} (known: {known})") from None
    w, h = _check_resolution(resolution)
    xx, yy = center_grid(bench.domain, w, h)
    if bench.has_max_iter:
        if int(max_iter) != max_iter or max_iter < 1:
            raise ParameterError(f"max_iter must be an integer >= 1, got {max_iter}")
        values = bench.fn(xx, yy, int(max_iter))
    else:
        values = bench.fn(xx, yy)
    hint = None
    if rescale is not None:
        lo, hi = rescale
        if not lo < hi:
            raise ParameterError(f"rescale needs lo < hi, got ({lo}, {hi})")
        vmin, vmax = float(values.min()), float(values.max())
        if vmin == vmax:
            raise ParameterError("cannot rescale a constant field")
        values = lo + (values - vmin) * (hi - lo) / (vmax - vmin)
        hint = (lo, hi)
    return ScalarField(values, bench.domain, value_range_hint=hint)


# ---------------------------------------------------------------------------
# Registry: every generator with its parameter schema.

@dataclasses.dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str  # float | int | enum | floats
    default: object = None
    choices: tuple[str, ...] = ()
    doc: str = ""
    required: bool = False

    def parse(self, raw: object):
        """Coerce a CLI/JSON value; raises ParameterError on mismatch."""
        try:
            if self.kind == "float":
                return float(raw)
            if self.kind == "int":
                f = float(raw)
                if int(f) != f:
                    raise ValueError(f"{raw!r} is not an integer")
                return int(f)
            if self.kind == "enum":
                val = str(raw).lower()
                if val not in self.choices:
                    raise ValueError(f"{raw!r} not one of {self.choices}")
                return val
            if self.kind == "floats":
                if isinstance(raw, str):
                    parts = [p for p in raw.split(",") if p.strip()]
                else:
                    parts = list(raw)
                return [float(p) for p in parts]
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"parameter '{self.name}': {exc}") from exc
        raise ParameterError(f"parameter '{self.name}' has unknown kind {self.kind}")

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "default": self.default,
            "choices": list(self.choices) or None,
            "doc": self.doc,
            "required": self.required,
        }


@dataclasses.dataclass(frozen=True)
class FunctionDef:
    id: str
    summary: str
    params: tuple[ParamSpec, ...]
    build: Callable[[dict, Resolution], ScalarField]
    domain_doc: str

    def resolve_params(self, raw: dict) -> dict:
        known = {p.name: p for p in self.params}
        unknown = sorted(set(raw) - set(known))
        if unknown:
            raise ParameterError(
                f"unknown parameter(s) for {self.id}: {', '.join(unknown)}; "
                f"expected {', '.join(known)}"
            )
        out = {}
        for p in self.params:
            if p.name in raw:
                out[p.name] = p.parse(raw[p.name])
            elif p.required:
                raise ParameterError(f"{self.id} requires parameter '{p.name}'")
            else:
                out[p.name] = p.default
        return out

    def describe(self) -> dict:
        return {
            "id": self.id,
            "summary": self.summary,
            "domain": self.domain_doc,
            "params": [p.describe() for p in self.params],
        }


_SHAPES = ("linear", "concave", "convex")


def _shape(v: str) -> Shape:
    return Shape(v)


def _build_step(p: dict, res: Resolution) -> ScalarField:
    return gen_step(p["A"], res)


def _build_gradient(p: dict, res: Resolution) -> ScalarField:
    return gen_gradient(p["r"], p["R"], p["b"], _shape(p["T_x"]), _shape(p["T_y"]), res)


def _build_mms(p: dict, res: Resolution) -> ScalarField:
    return gen_min_max_saddle(p["o"], p["p"], p["m"], res)


def _build_ridge_valley(p: dict, res: Resolution) -> ScalarField:
    return gen_ridge_valley(
        p["r"], p["R"], p["b"], _shape(p["T_x"]), _shape(p["T_y"]), res, g_b=p["g_b"]
    )


def _build_frequency(p: dict, res: Resolution) -> ScalarField:
    return gen_frequency(p["D"], p["W"], p["u"], res)


def _build_threshold(p: dict, res: Resolution) -> ScalarField:
    return gen_threshold(p["m"], p["M"], p["t"], ThresholdKind(p["T"]), p["b"], res)


def _build_little_bit(p: dict, res: Resolution) -> ScalarField:
    return gen_little_bit(p["m"], p["M"], p["g_m"], p["g_M"], p["groove_count"], res)


def _bench_builder(fid: str):
    def build(p: dict, res: Resolution) -> ScalarField:
        lo, hi = p.get("rescale_lo"), p.get("rescale_hi")
        if (lo is None) != (hi is None):
            raise ParameterError("rescale_lo and rescale_hi must be given together")
        rescale = (lo, hi) if lo is not None else None
        return gen_collection(fid, res, rescale=rescale, max_iter=p.get("max_iter", 100))

    return build


def _registry() -> dict[str, FunctionDef]:
    shape_doc = "edge profile: linear, concave, or convex"
    defs = [
        FunctionDef(
            "step",
            "piecewise-constant columns stepping through a value list",
            (
                ParamSpec("A", "floats", required=True,
                          doc="strictly increasing test values, e.g. 0,0.25,0.75,1"),
            ),
            _build_step,
            "[0, 2n) x [0, n) for n values",
        ),
        FunctionDef(
            "gradient",
            "separable ramp from r toward R with optional curvature",
            (
                ParamSpec("r", "float", 0.0, doc="value at the low corner"),
                ParamSpec("R", "float", 1.0, doc="value at the high corner"),
                ParamSpec("b", "int", 1, doc="polynomial order of the curvature"),
                ParamSpec("T_x", "enum", "linear", _SHAPES, shape_doc),
                ParamSpec("T_y", "enum", "linear", _SHAPES, shape_doc),
            ),
            _build_gradient,
            "[0, 1] x [0, 1]",
        ),
        FunctionDef(
            "min_max_saddle",
            "quadratic critical point: minimum, maximum, or saddle at the origin",
            (
                ParamSpec("o", "float", required=True, doc="x^2 coefficient (nonzero)"),
                ParamSpec("p", "float", required=True, doc="y^2 coefficient (nonzero)"),
                ParamSpec("m", "float", 0.0, doc="value at the critical point"),
            ),
            _build_mms,
            "[-1, 1] x [-1, 1]",
        ),
        FunctionDef(
            "ridge_valley",
            "vertical ridge (R > r) or valley (R < r) along x = 0",
            (
                ParamSpec("r", "float", 0.0, doc="value at the x = +-1 edges"),
                ParamSpec("R", "float", 1.0, doc="crest value at y = 1"),
                ParamSpec("b", "int", 1, doc="polynomial order of the cross profile"),
                ParamSpec("T_x", "enum", "linear", _SHAPES, shape_doc),
                ParamSpec("T_y", "enum", "linear", _SHAPES, shape_doc),
                ParamSpec("g_b", "int", doc="separate crest exponent (defaults to b)"),
            ),
            _build_ridge_valley,
            "[-1, 1] x [0, 1]",
        ),
        FunctionDef(
            "frequency",
            "sine waves of harmonically increasing frequency, amplitude fading with y",
            (
                ParamSpec("D", "int", 0, doc="number of frequency increases"),
                ParamSpec("W", "float", required=True, doc="wave amplitude at y = 0"),
                ParamSpec("u", "float", required=True, doc="median value the waves swing around"),
            ),
            _build_frequency,
            "[0, H_{D+1}] x [0, 1] (harmonic-number width)",
        ),
        FunctionDef(
            "threshold",
            "monotone crossing of a threshold value t along x = 0",
            (
                ParamSpec("m", "float", required=True, doc="minimum value (left edge, y = -1)"),
                ParamSpec("M", "float", required=True, doc="maximum value (right edge, y = -1)"),
                ParamSpec("t", "float", required=True, doc="threshold value on the x = 0 line"),
                ParamSpec("T", "enum", "linear", ("linear", "flat", "steep"),
                          "gradient behavior at the threshold"),
                ParamSpec("b", "int", 1, doc="polynomial order (1 = linear)"),
            ),
            _build_threshold,
            "[-1, 1] x [-1, 1]",
        ),
        FunctionDef(
            "little_bit",
            "linear ramp with n shallow grooves of growing depth",
            (
                ParamSpec("m", "float", required=True, doc="ramp value at y = 0"),
                ParamSpec("M", "float", required=True, doc="ramp value at y = 1"),
                ParamSpec("g_m", "float", required=True, doc="depth of the first groove"),
                ParamSpec("g_M", "float", required=True, doc="depth of the last groove"),
                ParamSpec("groove_count", "int", 5, doc="number of grooves"),
            ),
            _build_little_bit,
            "[0, 2n+1] x [0, 1] for n grooves",
        ),
    ]
    for fid, bench in benchmarks.BENCHMARKS.items():
        params = [
            ParamSpec("rescale_lo", "float", doc="low end of optional affine rescale"),
            ParamSpec("rescale_hi", "float", doc="high end of optional affine rescale"),
        ]
        if bench.has_max_iter:
            params.append(ParamSpec("max_iter", "int", 100, doc="escape-iteration cap"))
        defs.append(
            FunctionDef(
                fid,
                bench.summary,
                tuple(params),
                _bench_builder(fid),
                f"x in [{bench.domain[0][0]}, {bench.domain[0][1]}], "
                f"y in [{bench.domain[1][0]}, {bench.domain[1][1]}]",
            )
        )
    return {d.id: d for d in defs}


FUNCTIONS: dict[str, FunctionDef] = _registry()


def catalog() -> list[dict]:
    """Machine-readable description of every function and its parameters."""
    return [fd.describe() for fd in FUNCTIONS.values()]


@dataclasses.dataclass(frozen=True)
class TestSpec:
    """A reproducible test-field request: function, parameters, grid, seed."""

    __test__ = False  # not a pytest class, despite the name

    function_id: str
    params: dict
    resolution: Resolution
    seed: int = 0
    noise: NoiseOptions | None = None

    def build(self, threads: int = 1) -> ScalarField:
        try:
            fdef = FUNCTIONS[self.function_id]
        except KeyError:
            known = ", ".join(FUNCTIONS)
            raise ParameterError(
                f"unknown function {self.function_id!r} (known: {known})"
            ) from None
        resolved = fdef.resolve_params(self.params)
        field = fdef.build(resolved, self.resolution)
        if self.noise is not None:
            noise = self.noise
            if noise.seed == 0 and self.seed:
                noise = dataclasses.replace(noise, seed=self.seed)
            field = apply_noise(field, field.value_range(), noise, threads=threads)
        return field

    def to_dict(self) -> dict:
        return {
            "function": self.function_id,
            "params": dict(self.params),
            "resolution": list(self.resolution),
            "seed": self.seed,
            "noise": self.noise.to_dict() if self.noise else None,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TestSpec":
        try:
            res = doc["resolution"]
            noise = doc.get("noise")
            return cls(
                function_id=str(doc["function"]),
                params=dict(doc.get("params", {})),
                resolution=(int(res[0]), int(res[1])),
                seed=int(doc.get("seed", 0)),
                noise=NoiseOptions.from_dict(noise) if noise else None,
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"bad test spec: {exc}") from exc
