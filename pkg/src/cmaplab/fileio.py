"""Field serialization (CSV, CMTF binary, PGM ingestion) and report export.

CSV: one header line ``width,height,x0,x1,y0,y1`` followed by the grid
values row-major, one grid row per line, C-locale decimal points.

CMTF: a 32-byte little-endian header (magic ``CMTF``, version, width,
height, four float32 domain bounds) followed by width*height float32
values, row-major.
"""

from __future__ import annotations

import enum
import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .field import ScalarField

__all__ = [
    "FieldFormat",
    "FileFormatError",
    "save_field",
    "load_field",
    "atomic_write_bytes",
]


class FileFormatError(ValueError):
    """A file does not match its declared on-disk format."""


class FieldFormat(enum.Enum):
    CSV = "csv"
    CMTF = "cmtf"
    PGM = "pgm"


_CMTF_MAGIC = b"CMTF"
_CMTF_VERSION = 1
_CMTF_HEADER = struct.Struct("<4sIII4f")  # magic, version, w, h, x0, x1, y0, y1
assert _CMTF_HEADER.size == 32


def atomic_write_bytes(path, payload: bytes) -> None:
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def field_to_csv(field: ScalarField) -> bytes:
    (x0, x1), (y0, y1) = field.domain
    lines = [f"{field.width},{field.height},{x0:.17g},{x1:.17g},{y0:.17g},{y1:.17g}"]
    for row in field.values:
        lines.append(",".join(f"{v:.10g}" for v in row))
    return ("\n".join(lines) + "\n").encode("ascii")


def field_from_csv(payload: bytes) -> ScalarField:
    try:
        text = payload.decode("ascii")
    except UnicodeDecodeError as exc:
        raise FileFormatError(f"CSV field must be ASCII: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FileFormatError("empty CSV field file")
    head = lines[0].split(",")
    if len(head) != 6:
        raise FileFormatError(
            f"CSV header must be 'width,height,x0,x1,y0,y1' (6 values), got {len(head)}"
        )
    try:
        width, height = int(head[0]), int(head[1])
        x0, x1, y0, y1 = (float(v) for v in head[2:])
    except ValueError as exc:
        raise FileFormatError(f"bad CSV header: {exc}") from exc
    if len(lines) - 1 != height:
        raise FileFormatError(f"expected {height} value rows, found {len(lines) - 1}")
    try:
        values = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    except ValueError as exc:
        raise FileFormatError(f"bad CSV value: {exc}") from exc
    if values.shape != (height, width):
        raise FileFormatError(f"value grid is {values.shape}, header says {(height, width)}")
    return ScalarField(values, ((x0, x1), (y0, y1)), allow_nan=True)


def field_to_cmtf(field: ScalarField) -> bytes:
    (x0, x1), (y0, y1) = field.domain
    header = _CMTF_HEADER.pack(
        _CMTF_MAGIC, _CMTF_VERSION, field.width, field.height, x0, x1, y0, y1
    )
    return header + field.values.astype("<f4").tobytes()


def field_from_cmtf(payload: bytes) -> ScalarField:
    if len(payload) < _CMTF_HEADER.size:
        raise FileFormatError(
            f"truncated CMTF header: expected {_CMTF_HEADER.size} bytes, got {len(payload)}"
        )
    magic, version, width, height, x0, x1, y0, y1 = _CMTF_HEADER.unpack_from(payload)
    if magic != _CMTF_MAGIC:
        raise FileFormatError(f"not a CMTF file (magic {magic!r})")
    if version != _CMTF_VERSION:
        raise FileFormatError(f"unsupported CMTF version {version}")
    expected = _CMTF_HEADER.size + width * height * 4
    if len(payload) != expected:
        raise FileFormatError(f"truncated CMTF data: expected {expected} bytes, got {len(payload)}")
    values = np.frombuffer(payload, dtype="<f4", offset=_CMTF_HEADER.size).reshape(height, width)
    return ScalarField(values.astype(np.float64), ((x0, x1), (y0, y1)), allow_nan=True)


def _pgm_tokens(payload: bytes):
    """Header tokens of a netpbm file, honoring '#' comments."""
    i = 0
    while True:
        while i < len(payload) and payload[i : i + 1].isspace():
            i += 1
        if i < len(payload) and payload[i : i + 1] == b"#":
            while i < len(payload) and payload[i : i + 1] != b"\n":
                i += 1
            continue
        start = i
        while i < len(payload) and not payload[i : i + 1].isspace():
            i += 1
        if start == i:
            raise FileFormatError("unexpected end of PGM header")
        yield payload[start:i], i


def field_from_pgm(payload: bytes) -> ScalarField:
    """Binary PGM (P5), 8- or 16-bit; values normalized to [0, 1]."""
    tokens = _pgm_tokens(payload)
    magic, _ = next(tokens)
    if magic != b"P5":
        raise FileFormatError(f"expected binary PGM magic 'P5', got {magic!r}")
    try:
        width = int(next(tokens)[0])
        height = int(next(tokens)[0])
        maxval, end = next(tokens)
        maxval = int(maxval)
    except (StopIteration, ValueError) as exc:
        raise FileFormatError(f"bad PGM header: {exc}") from exc
    if not (0 < maxval < 65536):
        raise FileFormatError(f"PGM maxval must be in 1..65535, got {maxval}")
    data = payload[end + 1 :]  # single whitespace byte after maxval
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    expected = width * height * dtype.itemsize
    if len(data) < expected:
        raise FileFormatError(f"truncated PGM data: expected {expected} bytes, got {len(data)}")
    raster = np.frombuffer(data[:expected], dtype=dtype).reshape(height, width)
    values = raster.astype(np.float64) / float(maxval)
    return ScalarField(values, ((0.0, float(width)), (0.0, float(height))))


_SUFFIXES = {"csv": FieldFormat.CSV, "cmtf": FieldFormat.CMTF, "pgm": FieldFormat.PGM}


def _infer_format(path, fmt: FieldFormat | None) -> FieldFormat:
    if fmt is not None:
        return fmt
    suffix = str(path).rsplit(".", 1)[-1].lower()
    try:
        return _SUFFIXES[suffix]
    except KeyError:
        raise FileFormatError(
            f"cannot infer field format from {path!r} (use .csv, .cmtf, or .pgm)"
        ) from None


def save_field(field: ScalarField, path, fmt: FieldFormat | None = None) -> None:
    fmt = _infer_format(path, fmt)
    if fmt is FieldFormat.PGM:
        raise FileFormatError("PGM is ingestion-only; save as CSV or CMTF")
    payload = field_to_csv(field) if fmt is FieldFormat.CSV else field_to_cmtf(field)
    atomic_write_bytes(path, payload)


def load_field(path, fmt: FieldFormat | None = None) -> ScalarField:
    fmt = _infer_format(path, fmt)
    try:
        payload = Path(path).read_bytes()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    if fmt is FieldFormat.CSV:
        return field_from_csv(payload)
    if fmt is FieldFormat.CMTF:
        return field_from_cmtf(payload)
    return field_from_pgm(payload)


def write_json(path, doc) -> None:
    atomic_write_bytes(path, (json.dumps(doc, indent=2) + "\n").encode("utf-8"))
