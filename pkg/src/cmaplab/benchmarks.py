"""Optimization-literature benchmark functions used as colormap stress tests.

Formulas and standard evaluation domains follow Molga & Smutnicki,
"Test functions for optimization needs" (2005) and Jamil & Yang, "A
literature survey of benchmark functions for global optimization problems"
(2013). Each entry documents its domain and known global minimum.
"""

from __future__ import annotations

import numpy as np

__all__ = ["BENCHMARKS", "BenchmarkDef"]


def bukin6(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Bukin N.6: many tiny local minima along the parabola y = x^2/100.

    Domain [-15, -5] x [-3, 3]; global minimum 0 at (-10, 1). Written with
    divisions by 100 instead of 0.01 factors so the minimum is exactly 0
    in floating point.
    """
    return 100.0 * np.sqrt(np.abs(y - x * x / 100.0)) + np.abs(x + 10.0) / 100.0


_LANGERMANN_A = np.array([3.0, 5.0, 2.0, 1.0, 7.0])
_LANGERMANN_B = np.array([5.0, 2.0, 1.0, 4.0, 9.0])
_LANGERMANN_C = np.array([1.0, 2.0, 5.0, 2.0, 3.0])


def langermann(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Langermann: oscillating wells of unequal depth around five centers.

    Domain [0, 10]^2; global minimum about -5.1621 near (2.003, 1.006).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros(np.broadcast(x, y).shape)
    for a, b, c in zip(_LANGERMANN_A, _LANGERMANN_B, _LANGERMANN_C):
        d2 = (x - a) ** 2 + (y - b) ** 2
        out += -c * np.cos(np.pi * d2) * np.exp(-d2 / np.pi)
    return out


def cross_in_tray(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Cross-in-tray: four symmetric minima separated by cross-shaped ridges.

    Domain [-10, 10]^2; global minimum -2.06261 at (+-1.3491, +-1.3491).
    """
    inner = np.abs(np.sin(x) * np.sin(y) * np.exp(np.abs(100.0 - np.hypot(x, y) / np.pi)))
    return -0.0001 * (inner + 1.0) ** 0.1


def levy13(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Levy N.13: high-frequency sinusoidal texture over a bowl.

    Domain [-10, 10]^2; global minimum 0 at (1, 1).
    """
    return (
        np.sin(3.0 * np.pi * x) ** 2
        + (x - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * y) ** 2)
        + (y - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * y) ** 2)
    )


def schwefel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Schwefel: deep deceptive wells far from the origin.

    Domain [-500, 500]^2; global minimum about 0 at (420.9687, 420.9687).
    """
    return 418.9829 * 2.0 - (
        x * np.sin(np.sqrt(np.abs(x))) + y * np.sin(np.sqrt(np.abs(y)))
    )


def six_hump_camel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Six-hump camel: two global and four local minima in a shallow basin.

    Domain [-3, 3] x [-2, 2]; global minimum -1.0316 at
    (0.0898, -0.7126) and (-0.0898, 0.7126).
    """
    return (4.0 - 2.1 * x**2 + x**4 / 3.0) * x**2 + x * y + (-4.0 + 4.0 * y**2) * y**2


def mandelbrot(x: np.ndarray, y: np.ndarray, max_iter: int = 100) -> np.ndarray:
    """Mandelbrot escape time for c = x + iy, capped at max_iter.

    Window [-2, 1] x [-1.5, 1.5]; interior points (bounded orbits) hold the
    max_iter cap.
    """
    c = np.asarray(x, dtype=np.float64) + 1j * np.asarray(y, dtype=np.float64)
    c = np.atleast_1d(c)
    z = np.zeros_like(c)
    counts = np.full(c.shape, max_iter, dtype=np.float64)
    alive = np.ones(c.shape, dtype=bool)
    for i in range(max_iter):
        z[alive] = z[alive] * z[alive] + c[alive]
        escaped = alive & (z.real * z.real + z.imag * z.imag > 4.0)
        counts[escaped] = i
        alive &= ~escaped
        if not alive.any():
            break
    return counts.reshape(np.shape(x)) if np.shape(x) else counts[0]


class BenchmarkDef:
    def __init__(self, fn, domain, summary: str, has_max_iter: bool = False):
        self.fn = fn
        self.domain = domain
        self.summary = summary
        self.has_max_iter = has_max_iter


BENCHMARKS: dict[str, BenchmarkDef] = {
    "bukin6": BenchmarkDef(bukin6, ((-15.0, -5.0), (-3.0, 3.0)), "Bukin N.6 valley of micro-minima"),
    "langermann": BenchmarkDef(langermann, ((0.0, 10.0), (0.0, 10.0)), "Langermann oscillating wells"),
    "cross_in_tray": BenchmarkDef(
        cross_in_tray, ((-10.0, 10.0), (-10.0, 10.0)), "Cross-in-tray four-minimum plate"
    ),
    "levy13": BenchmarkDef(levy13, ((-10.0, 10.0), (-10.0, 10.0)), "Levy N.13 sinusoidal bowl"),
    "schwefel": BenchmarkDef(schwefel, ((-500.0, 500.0), (-500.0, 500.0)), "Schwefel deceptive wells"),
    "six_hump_camel": BenchmarkDef(
        six_hump_camel, ((-3.0, 3.0), (-2.0, 2.0)), "Six-hump camel basin"
    ),
    "mandelbrot": BenchmarkDef(
        mandelbrot, ((-2.0, 1.0), (-1.5, 1.5)), "Mandelbrot escape-time fractal", has_max_iter=True
    ),
}
