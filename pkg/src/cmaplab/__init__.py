"""Test-field generation and perceptual difference analysis for continuous
colormaps."""

from .color import Color, DifferenceMetric, Space, convert, delta_e
from .colormap import (
    ColormapKey,
    ColormapSpec,
    grayscale_spec,
    parse_spec,
    sample,
    sample_array,
    serialize_spec,
)
from .evaluation import (
    Aggregation,
    EvaluationBundle,
    Normalization,
    aggregate,
    evaluate,
    pixel_observer,
)
from .field import ScalarField
from .fileio import FieldFormat, load_field, save_field
from .noise import Distribution, NoiseMode, NoiseOptions, NoiseSource, apply_noise, perlin2
from .render import Image, render_evaluation, render_field, write_image
from .report import export_report
from .testfields import FUNCTIONS, TestSpec, catalog

__version__ = "0.1.0"
