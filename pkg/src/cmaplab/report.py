"""Evaluation report export: aggregated fields, panels, statistics,
provenance."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .colormap import serialize_spec
from .evaluation import EvaluationBundle, aggregate
from .fileio import FieldFormat, atomic_write_bytes, save_field, write_json
from .render import encode_png, render_evaluation

__all__ = ["export_report"]


def _sha256(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def export_report(bundle: EvaluationBundle, outdir) -> dict:
    """Write a report directory and return its statistics document.

    Layout: the three aggregated difference fields as CSV, the five panels
    as PNG, and statistics.json carrying summary statistics plus hashes of
    the inputs for reproducibility.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    how = bundle.aggregation
    for name, ndf in (
        ("value", bundle.value_field),
        ("color", bundle.color_field),
        ("subtraction", bundle.subtraction_field),
    ):
        save_field(aggregate(ndf, how), outdir / f"{name}.csv", FieldFormat.CSV)

    for name, img in render_evaluation(bundle).items():
        atomic_write_bytes(outdir / f"{name}.png", encode_png(img))

    cmap_doc = serialize_spec(bundle.colormap)
    atomic_write_bytes(outdir / "colormap.json", cmap_doc)
    spec_doc = None
    if bundle.test_spec is not None:
        spec_doc = (json.dumps(bundle.test_spec.to_dict(), indent=2) + "\n").encode("utf-8")
        atomic_write_bytes(outdir / "testspec.json", spec_doc)

    stats = {
        "statistics": {name: s.to_dict() for name, s in bundle.statistics().items()},
        "metric": bundle.metric.value,
        "normalization": bundle.normalization.describe(),
        "aggregation": bundle.aggregation.value,
        "degenerate": bundle.degenerate,
        "field": {
            "width": bundle.source_field.width,
            "height": bundle.source_field.height,
            "domain": [list(bundle.source_field.domain[0]), list(bundle.source_field.domain[1])],
        },
        "provenance": {
            "colormap_sha256": _sha256(cmap_doc),
            "testspec_sha256": _sha256(spec_doc) if spec_doc else None,
        },
    }
    write_json(outdir / "statistics.json", stats)
    return stats
