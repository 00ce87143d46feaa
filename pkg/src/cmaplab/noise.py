"""Deterministic noise sources and the four field-perturbation modes.

All randomness is counter-based: every draw is a pure hash of
(seed, stream, pixel index), never a stateful generator. That makes noisy
fields bit-reproducible regardless of evaluation order or thread count.
"""

from __future__ import annotations

import dataclasses
import enum
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import ParameterError
from .field import ScalarField

__all__ = [
    "NoiseMode",
    "Distribution",
    "NoiseSource",
    "NoiseOptions",
    "perlin2",
    "sample_distribution",
    "apply_noise",
    "beta_transform",
    "beta_left_transform",
    "beta_right_transform",
]


class NoiseMode(enum.Enum):
    MAX_SCALED = "max_scaled"
    MIN_SCALED = "min_scaled"
    RANGE_SCALED = "range_scaled"
    REPLACEMENT = "replacement"


class Distribution(enum.Enum):
    UNIFORM = "uniform"
    NORMAL = "normal"
    BETA = "beta"
    BETA_LEFT = "beta_left"
    BETA_RIGHT = "beta_right"


class NoiseSource(enum.Enum):
    RANDOM = "random"
    PERLIN = "perlin"


# ---------------------------------------------------------------------------
# Counter-based hashing (splitmix64 finalizer), vectorized over uint64 arrays.

_U64 = np.uint64
_MASK64 = (1 << 64) - 1
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_PX = _U64(0xD6E8FEB86659FD93)
_PY = _U64(0xC2B2AE3D27D4EB4F)

# Streams keep independent draws from colliding for one pixel.
_STREAM_SELECT = 0
_STREAM_U1 = 1
_STREAM_U2 = 2


def _mix64_int(h: int) -> int:
    """splitmix64 finalizer on plain ints (numpy uint64 scalars warn on wrap)."""
    h &= _MASK64
    h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & _MASK64
    return h ^ (h >> 31)


def _mix64(h: np.ndarray) -> np.ndarray:
    h = (h ^ (h >> _U64(30))) * _MIX1
    h = (h ^ (h >> _U64(27))) * _MIX2
    return h ^ (h >> _U64(31))


def _hash_counter(seed: int, stream: int, index: np.ndarray) -> np.ndarray:
    idx = np.asarray(index).astype(np.uint64, copy=False)
    base = _mix64_int((seed & _MASK64) + 0x9E3779B97F4A7C15 * (stream + 1))
    return _mix64(_U64(base) ^ (idx * _PX + _GOLDEN))


def _unit(seed: int, stream: int, index: np.ndarray) -> np.ndarray:
    """Uniform draw in the open interval (0, 1)."""
    h = _hash_counter(seed, stream, index)
    return ((h >> _U64(11)).astype(np.float64) + 0.5) * 2.0**-53


# ---------------------------------------------------------------------------
# Gradient (Perlin-style improved) noise.

_SQ = np.sqrt(0.5)
_GRADS = np.array(
    [
        (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0),
        (_SQ, _SQ), (-_SQ, _SQ), (_SQ, -_SQ), (-_SQ, -_SQ),
    ]
)
# Max |value| of 2-D gradient noise with unit gradients is sqrt(2)/2; this
# rescales the bound to exactly 1.
_PERLIN_NORM = np.sqrt(2.0)


def _corner_gradient(xi: np.ndarray, yi: np.ndarray, seed: int) -> np.ndarray:
    ux = xi.astype(np.int64).astype(np.uint64)
    uy = yi.astype(np.int64).astype(np.uint64)
    base = _mix64_int((seed & _MASK64) + 0x9E3779B97F4A7C15)
    h = _mix64(_U64(base) ^ (ux * _PX) ^ (uy * _PY))
    return (h & _U64(7)).astype(np.intp)


def _fade(t: np.ndarray) -> np.ndarray:
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def perlin2(x, y, seed: int):
    """Gradient noise in [-1, 1]: zero at integer lattice points, smooth,
    and a pure function of (x, y, seed)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ParameterError("perlin2 requires finite coordinates")
    scalar = x.ndim == 0 and y.ndim == 0
    x, y = np.broadcast_arrays(np.atleast_1d(x), np.atleast_1d(y))

    x0 = np.floor(x)
    y0 = np.floor(y)
    tx = x - x0
    ty = y - y0

    total = np.zeros(x.shape)
    u = _fade(tx)
    v = _fade(ty)
    for dx, dy, wx, wy in ((0, 0, 1 - u, 1 - v), (1, 0, u, 1 - v), (0, 1, 1 - u, v), (1, 1, u, v)):
        gi = _corner_gradient(x0 + dx, y0 + dy, seed)
        g = _GRADS[gi]
        dot = g[..., 0] * (tx - dx) + g[..., 1] * (ty - dy)
        total += wx * wy * dot
    out = total * _PERLIN_NORM
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Distributions. All are driven by hashed uniforms.

def beta_transform(u):
    """Arcsine-law (Beta(0.5, 0.5)) transform of a uniform draw."""
    return np.sin(np.asarray(u) * (np.pi / 2.0)) ** 2


def beta_left_transform(u):
    """One-sided variant: mass piled at 0, full [0, 1] support."""
    folded = 1.0 - np.abs(2.0 * np.asarray(u) - 1.0)
    return 2.0 * np.sin(folded * (np.pi / 4.0)) ** 2


def beta_right_transform(u):
    """Mirror of the left-sided variant: mass piled at 1."""
    return 1.0 - beta_left_transform(u)


def sample_distribution(dist: Distribution, seed: int, pixel_index) -> np.ndarray | float:
    """Counter-based draw for a pixel (or an array of pixel indices).

    UNIFORM lies in [0, 1]; NORMAL is standard normal via Box-Muller on two
    hashed uniforms (the sine partner of the pair is discarded); the beta
    family lies in [0, 1].
    """
    idx = np.asarray(pixel_index)
    scalar = idx.ndim == 0
    idx = np.atleast_1d(idx)
    u1 = _unit(seed, _STREAM_U1, idx)
    if dist is Distribution.UNIFORM:
        out = u1
    elif dist is Distribution.NORMAL:
        u2 = _unit(seed, _STREAM_U2, idx)
        out = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
    elif dist is Distribution.BETA:
        out = beta_transform(u1)
    elif dist is Distribution.BETA_LEFT:
        out = beta_left_transform(u1)
    elif dist is Distribution.BETA_RIGHT:
        out = beta_right_transform(u1)
    else:
        raise ParameterError(f"unknown distribution {dist!r}")
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class NoiseOptions:
    """How noise is drawn and folded into a field.

    ``amplitude`` bounds the scaled-mode noise value in [-amplitude,
    amplitude]; ``replacement_range`` is the value interval used by the
    replacement mode; ``proportion`` is the fraction of pixels touched.
    """

    mode: NoiseMode
    amplitude: float | None = None
    replacement_range: tuple[float, float] | None = None
    clipping: bool = False
    proportion: float = 1.0
    distribution: Distribution = Distribution.UNIFORM
    source: NoiseSource = NoiseSource.RANDOM
    seed: int = 0
    perlin_scale: float = 8.0

    def __post_init__(self) -> None:
        if self.mode is NoiseMode.REPLACEMENT:
            if self.replacement_range is None:
                raise ParameterError("replacement mode requires replacement_range=[n_m, n_M]")
            n_m, n_M = self.replacement_range
            if not n_m < n_M:
                raise ParameterError(f"replacement_range must satisfy n_m < n_M, got {self.replacement_range}")
        else:
            if self.amplitude is None:
                raise ParameterError(f"{self.mode.value} mode requires an amplitude")
            if not 0.0 < self.amplitude <= 1.0:
                raise ParameterError(f"amplitude must lie in (0, 1], got {self.amplitude}")
        if not 0.0 <= self.proportion <= 1.0:
            raise ParameterError(f"proportion must lie in [0, 1], got {self.proportion}")
        if self.seed < 0:
            raise ParameterError("seed must be a non-negative integer")
        if self.perlin_scale <= 0:
            raise ParameterError("perlin_scale must be positive")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "amplitude": self.amplitude,
            "replacement_range": list(self.replacement_range) if self.replacement_range else None,
            "clipping": self.clipping,
            "proportion": self.proportion,
            "distribution": self.distribution.value,
            "source": self.source.value,
            "seed": self.seed,
            "perlin_scale": self.perlin_scale,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "NoiseOptions":
        try:
            return cls(
                mode=NoiseMode(doc["mode"]),
                amplitude=doc.get("amplitude"),
                replacement_range=tuple(doc["replacement_range"]) if doc.get("replacement_range") else None,
                clipping=bool(doc.get("clipping", False)),
                proportion=float(doc.get("proportion", 1.0)),
                distribution=Distribution(doc.get("distribution", "uniform")),
                source=NoiseSource(doc.get("source", "random")),
                seed=int(doc.get("seed", 0)),
                perlin_scale=float(doc.get("perlin_scale", 8.0)),
            )
        except (KeyError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"bad noise options: {exc}") from exc


def _row_blocks(height: int, threads: int):
    block = max(1, -(-height // max(threads, 1)))
    return [(lo, min(lo + block, height)) for lo in range(0, height, block)]


def _compute_rows(height: int, threads: int, fn) -> np.ndarray:
    """Evaluate fn(row_lo, row_hi) per block and stack; the split never
    changes values, only the schedule."""
    blocks = _row_blocks(height, threads)
    if threads <= 1 or len(blocks) == 1:
        parts = [fn(lo, hi) for lo, hi in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: fn(*b), blocks))
    return np.vstack(parts)


def _unit_for_replacement(opts: NoiseOptions, idx: np.ndarray) -> np.ndarray:
    """Unit-interval draw whose shape matches the distribution's intent."""
    if opts.distribution is Distribution.NORMAL:
        z = sample_distribution(Distribution.NORMAL, opts.seed, idx)
        # Squash +-3 sigma onto the range so replacement values focus on the
        # median of the configured interval.
        return np.clip(0.5 + z / 6.0, 0.0, 1.0)
    return sample_distribution(opts.distribution, opts.seed, idx)


def _signed_for_scaled(opts: NoiseOptions, idx: np.ndarray) -> np.ndarray:
    """Draw in [-1, 1] for the scaled modes."""
    if opts.distribution is Distribution.NORMAL:
        z = sample_distribution(Distribution.NORMAL, opts.seed, idx)
        return np.clip(z / 3.0, -1.0, 1.0)
    u = sample_distribution(opts.distribution, opts.seed, idx)
    return 2.0 * u - 1.0


def apply_noise(
    field: ScalarField,
    field_range: tuple[float, float],
    opts: NoiseOptions,
    threads: int = 1,
) -> ScalarField:
    """Perturb a field with seeded noise.

    The scaled modes add noise weighted by where the value sits in
    [m, M]; replacement substitutes a fresh draw from the replacement
    range. Only a ``proportion`` fraction of pixels (chosen by seeded
    hash) is touched. With clipping, scaled results stay inside [m, M].
    """
    m, M = field_range
    if not m < M:
        raise ParameterError(f"field range must satisfy m < M, got ({m}, {M})")
    height, width = field.values.shape
    values = field.values

    def noise_rows(lo: int, hi: int) -> np.ndarray:
        rows = np.arange(lo, hi, dtype=np.uint64)[:, None]
        idx = rows * _U64(width) + np.arange(width, dtype=np.uint64)[None, :]
        if opts.source is NoiseSource.PERLIN:
            scale = opts.perlin_scale / max(width, height)
            px = (np.arange(width, dtype=np.float64)[None, :] + 0.5) * scale
            py = (np.arange(lo, hi, dtype=np.float64)[:, None] + 0.5) * scale
            raw = perlin2(*np.broadcast_arrays(px, py), opts.seed)
        elif opts.mode is NoiseMode.REPLACEMENT:
            raw = _unit_for_replacement(opts, idx.ravel()).reshape(idx.shape)
        else:
            raw = _signed_for_scaled(opts, idx.ravel()).reshape(idx.shape)
        return raw

    raw = _compute_rows(height, threads, noise_rows)

    if opts.source is NoiseSource.PERLIN:
        peak = np.abs(raw).max()
        if peak > 0:
            raw = raw / peak
        if opts.mode is NoiseMode.REPLACEMENT:
            unit_or_signed = 0.5 * (raw + 1.0)
        else:
            unit_or_signed = raw
    else:
        unit_or_signed = raw

    if opts.mode is NoiseMode.REPLACEMENT:
        n_m, n_M = opts.replacement_range
        perturbed = n_m + unit_or_signed * (n_M - n_m)
    else:
        noise_value = opts.amplitude * unit_or_signed
        if opts.mode is NoiseMode.MAX_SCALED:
            perturbed = values + noise_value * (values - m) / (M - m)
        elif opts.mode is NoiseMode.MIN_SCALED:
            perturbed = values + noise_value * (M - values) / (M - m)
        else:
            perturbed = values + noise_value * (M - m)
        if opts.clipping:
            perturbed = np.clip(perturbed, m, M)

    if opts.proportion >= 1.0:
        out = perturbed
    elif opts.proportion <= 0.0:
        out = values.copy()
    else:
        def select_rows(lo: int, hi: int) -> np.ndarray:
            rows = np.arange(lo, hi, dtype=np.uint64)[:, None]
            idx = rows * _U64(width) + np.arange(width, dtype=np.uint64)[None, :]
            return _unit(opts.seed, _STREAM_SELECT, idx.ravel()).reshape(idx.shape) < opts.proportion

        mask = _compute_rows(height, threads, select_rows)
        out = np.where(mask, perturbed, values)

    return ScalarField(out, field.domain, value_range_hint=field.value_range_hint)
