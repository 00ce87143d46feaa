import numpy as np
import pytest

from cmaplab.benchmarks import (
    BENCHMARKS,
    bukin6,
    cross_in_tray,
    langermann,
    levy13,
    mandelbrot,
    schwefel,
    six_hump_camel,
)
from cmaplab.errors import ParameterError
from cmaplab.field import pixel_centers
from cmaplab.testfields import gen_collection


def brute_force_min(fn, xdom, ydom, n=2001):
    """Independent oracle: dense pixel-center grid search."""
    xs = pixel_centers(*xdom, n)
    ys = pixel_centers(*ydom, n)
    xx, yy = np.meshgrid(xs, ys)
    vals = fn(xx, yy)
    k = np.unravel_index(np.argmin(vals), vals.shape)
    return float(vals[k]), (float(xx[k]), float(yy[k]))


class TestKnownOptima:
    def test_bukin6_minimum_is_exactly_zero(self):
        assert bukin6(-10.0, 1.0) == 0.0

    def test_six_hump_camel_center(self):
        assert six_hump_camel(0.0, 0.0) == 0.0

    def test_six_hump_camel_grid_minimum(self):
        lo, loc = brute_force_min(six_hump_camel, (-2, 2), (-1, 1))
        assert lo == pytest.approx(-1.0316, abs=1e-3)
        assert abs(loc[0]) == pytest.approx(0.0898, abs=2e-3)
        assert abs(loc[1]) == pytest.approx(0.7126, abs=2e-3)

    def test_cross_in_tray_grid_minimum(self):
        lo, loc = brute_force_min(cross_in_tray, (-10, 10), (-10, 10))
        assert lo == pytest.approx(-2.0626, abs=1e-3)
        assert abs(loc[0]) == pytest.approx(1.3491, abs=0.02)

    def test_levy13_minimum(self):
        assert levy13(1.0, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_schwefel_near_zero_at_known_optimum(self):
        assert schwefel(420.9687, 420.9687) == pytest.approx(0.0, abs=1e-3)

    def test_langermann_grid_minimum_matches_literature(self):
        lo, loc = brute_force_min(langermann, (0, 10), (0, 10))
        assert lo == pytest.approx(-5.1621, abs=1e-3)
        assert loc[0] == pytest.approx(2.003, abs=0.01)
        assert loc[1] == pytest.approx(1.006, abs=0.01)

    def test_mandelbrot_interior_hits_cap(self):
        assert mandelbrot(0.0, 0.0, max_iter=64) == 64
        assert mandelbrot(2.0, 2.0, max_iter=64) == 0


class TestCollectionGeneration:
    def test_unknown_id_rejected(self):
        with pytest.raises(ParameterError, match="unknown collection function"):
            gen_collection("rosenbrock", (8, 8))

    def test_field_minimum_matches_oracle(self):
        f = gen_collection("six_hump_camel", (2001, 2001))
        assert float(f.values.min()) == pytest.approx(-1.0316, abs=1e-3)

    def test_rescale_maps_to_requested_interval(self):
        f = gen_collection("schwefel", (128, 128), rescale=(0.0, 1.0))
        assert f.values.min() == pytest.approx(0.0, abs=1e-12)
        assert f.values.max() == pytest.approx(1.0, abs=1e-12)
        assert f.value_range_hint == (0.0, 1.0)

    def test_rescale_validation(self):
        with pytest.raises(ParameterError):
            gen_collection("levy13", (16, 16), rescale=(1.0, 1.0))

    def test_every_benchmark_generates_finite_grid(self):
        for fid in BENCHMARKS:
            f = gen_collection(fid, (32, 32))
            assert np.isfinite(f.values).all()

    def test_mandelbrot_grid_contains_interior_cap(self):
        f = gen_collection("mandelbrot", (128, 128), max_iter=50)
        assert f.values.max() == 50
