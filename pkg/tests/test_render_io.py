import io
import json
import pathlib

import numpy as np
import pytest
from PIL import Image as PILImage

from cmaplab.color import DifferenceMetric
from cmaplab.colormap import grayscale_spec, parse_spec
from cmaplab.errors import ParameterError
from cmaplab.evaluation import Aggregation, Normalization, evaluate
from cmaplab.field import ScalarField
from cmaplab.fileio import (
    FieldFormat,
    FileFormatError,
    field_from_cmtf,
    field_to_cmtf,
    load_field,
    save_field,
)
from cmaplab.render import (
    Image,
    ImageFormat,
    encode_png,
    encode_ppm,
    render_evaluation,
    render_field,
    write_image,
)
from cmaplab.report import export_report
from cmaplab.testfields import Shape, gen_gradient

UNIT = ((0.0, 1.0), (0.0, 1.0))


class TestRenderField:
    def test_constant_field_renders_uniform(self):
        f = ScalarField(np.full((8, 8), 0.25), UNIT)
        img = render_field(f, grayscale_spec(0.0, 1.0))
        assert len(np.unique(img.pixels.reshape(-1, 3), axis=0)) == 1

    def test_gradient_rows_monotone_gray(self):
        f = gen_gradient(0, 1, 1, Shape.LINEAR, Shape.LINEAR, (64, 4))
        img = render_field(f, grayscale_spec(0.0, 1.0))
        row = img.pixels[2, :, 0].astype(int)
        assert np.all(np.diff(row) >= 0)
        assert row[-1] > row[0]

    def test_deterministic_bytes(self):
        f = gen_gradient(0, 1, 2, Shape.CONVEX, Shape.LINEAR, (32, 32))
        a = encode_png(render_field(f, grayscale_spec(0.0, 1.0)))
        b = encode_png(render_field(f, grayscale_spec(0.0, 1.0)))
        assert a == b


class TestPanels:
    def test_uniform_bundle_subtraction_panel_white(self):
        f = gen_gradient(0, 1, 1, Shape.LINEAR, Shape.LINEAR, (64, 64))
        bundle = evaluate(f, grayscale_spec(0.0, 1.0), DifferenceMetric.LAB_EUCLIDEAN)
        panels = render_evaluation(bundle)
        sub = panels["subtraction"].pixels.astype(int)
        assert np.abs(sub - 255).max() <= 1

    def test_zero_value_field_panel_is_white(self):
        f = ScalarField(np.full((8, 8), 3.0), UNIT)
        bundle = evaluate(f, grayscale_spec(0.0, 1.0), DifferenceMetric.LAB_EUCLIDEAN)
        panels = render_evaluation(bundle)
        assert np.all(panels["value"].pixels == 255)

    def test_five_panels_present_and_sized(self):
        f = gen_gradient(0, 1, 1, Shape.LINEAR, Shape.LINEAR, (16, 12))
        bundle = evaluate(f, grayscale_spec(0.0, 1.0))
        panels = render_evaluation(bundle)
        assert sorted(panels) == ["color", "grayscale", "mapped", "subtraction", "value"]
        for img in panels.values():
            assert (img.width, img.height) == (16, 12)

    def test_rendering_twice_is_byte_identical(self):
        f = gen_gradient(0, 1, 2, Shape.CONCAVE, Shape.LINEAR, (24, 24))
        bundle = evaluate(f, grayscale_spec(0.0, 1.0))
        one = {k: encode_png(v) for k, v in render_evaluation(bundle).items()}
        two = {k: encode_png(v) for k, v in render_evaluation(bundle).items()}
        assert one == two


class TestImageEncoding:
    def test_ppm_byte_spec(self):
        img = Image(np.full((1, 1, 3), 255, dtype=np.uint8))
        assert encode_ppm(img) == b"P6\n1 1\n255\n\xff\xff\xff"

    def test_png_decodes_to_identical_pixels(self):
        rng = np.random.default_rng(1)
        px = rng.integers(0, 256, (21, 13, 3), dtype=np.uint8)
        back = np.asarray(PILImage.open(io.BytesIO(encode_png(Image(px)))).convert("RGB"))
        assert np.array_equal(back, px)

    def test_zero_dimension_rejected(self):
        with pytest.raises(ParameterError):
            Image(np.zeros((0, 4, 3), dtype=np.uint8))

    def test_write_image_infers_format(self, tmp_path):
        img = Image(np.zeros((2, 2, 3), dtype=np.uint8))
        write_image(img, tmp_path / "x.ppm")
        assert (tmp_path / "x.ppm").read_bytes().startswith(b"P6")
        write_image(img, tmp_path / "x.png")
        assert (tmp_path / "x.png").read_bytes().startswith(b"\x89PNG")
        with pytest.raises(ParameterError):
            write_image(img, tmp_path / "x.gif")


class TestFieldFormats:
    def make_field(self):
        return gen_gradient(0.0, 417.3, 2, Shape.CONVEX, Shape.LINEAR, (19, 11))

    def test_csv_round_trip_within_tolerance(self, tmp_path):
        f = self.make_field()
        save_field(f, tmp_path / "f.csv")
        g = load_field(tmp_path / "f.csv")
        assert g.domain == f.domain
        assert np.abs(g.values - f.values).max() < 1e-6

    def test_cmtf_round_trip_bit_exact(self, tmp_path):
        f = self.make_field()
        save_field(f, tmp_path / "f.cmtf")
        g = load_field(tmp_path / "f.cmtf")
        assert np.array_equal(g.values, f.values.astype("<f4").astype(np.float64))
        save_field(g, tmp_path / "g.cmtf")
        assert (tmp_path / "f.cmtf").read_bytes() == (tmp_path / "g.cmtf").read_bytes()

    def test_truncated_cmtf_names_lengths(self):
        f = self.make_field()
        payload = field_to_cmtf(f)[:-7]
        with pytest.raises(FileFormatError, match="expected .* bytes, got"):
            field_from_cmtf(payload)

    def test_bad_magic_rejected(self):
        with pytest.raises(FileFormatError, match="magic"):
            field_from_cmtf(b"NOPE" + b"\x00" * 60)

    def test_pgm_8bit(self, tmp_path):
        raster = np.arange(6, dtype="u1").reshape(2, 3) * 51
        (tmp_path / "t.pgm").write_bytes(b"P5\n3 2\n255\n" + raster.tobytes())
        f = load_field(tmp_path / "t.pgm")
        assert f.domain == ((0.0, 3.0), (0.0, 2.0))
        assert f.values.max() == pytest.approx(255 / 255 * 5 * 51 / 255)

    def test_pgm_16bit_max_normalizes_to_one(self, tmp_path):
        raster = np.array([[0, 65535]], dtype=">u2")
        (tmp_path / "t.pgm").write_bytes(b"P5\n# c\n2 1\n65535\n" + raster.tobytes())
        f = load_field(tmp_path / "t.pgm")
        assert f.values[0, 1] == 1.0
        assert f.values[0, 0] == 0.0

    def test_truncated_pgm_rejected(self, tmp_path):
        (tmp_path / "t.pgm").write_bytes(b"P5\n4 4\n255\n\x00\x00")
        with pytest.raises(FileFormatError, match="truncated"):
            load_field(tmp_path / "t.pgm")

    def test_csv_shape_mismatch_rejected(self, tmp_path):
        (tmp_path / "bad.csv").write_text("2,2,0,1,0,1\n0.0,1.0\n")
        with pytest.raises(FileFormatError, match="rows"):
            load_field(tmp_path / "bad.csv")

    def test_unknown_suffix_rejected(self, tmp_path):
        with pytest.raises(FileFormatError, match="infer"):
            load_field(tmp_path / "field.xyz")


class TestReportExport:
    def test_report_directory_contents(self, tmp_path):
        f = gen_gradient(0, 1, 1, Shape.LINEAR, Shape.LINEAR, (32, 32))
        bundle = evaluate(
            f, grayscale_spec(0.0, 1.0), DifferenceMetric.LAB_EUCLIDEAN,
            Normalization(), Aggregation.MAX,
        )
        stats = export_report(bundle, tmp_path / "rep")
        names = {p.name for p in (tmp_path / "rep").iterdir()}
        assert {"value.csv", "color.csv", "subtraction.csv", "grayscale.png", "mapped.png",
                "value.png", "color.png", "subtraction.png", "statistics.json",
                "colormap.json"} <= names
        doc = json.loads((tmp_path / "rep" / "statistics.json").read_text())
        assert doc == stats
        assert doc["statistics"]["subtraction"]["max"] == pytest.approx(0.0, abs=1e-9)
        assert doc["provenance"]["colormap_sha256"]
        # The exported colormap parses back.
        parse_spec((tmp_path / "rep" / "colormap.json").read_bytes())
        # Aggregated fields load back.
        v = load_field(tmp_path / "rep" / "value.csv")
        assert (v.width, v.height) == (32, 32)
