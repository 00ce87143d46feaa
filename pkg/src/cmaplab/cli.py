"""Command-line front end: generate, render, evaluate, report, catalog, serve.

Exit codes: 0 success, 2 unknown function/parameter or invalid values,
3 file errors, 4 internal invariant violations.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .color import DifferenceMetric
from .colormap import ColormapError, parse_spec
from .errors import InternalError, ParameterError
from .evaluation import Aggregation, Normalization, evaluate
from .fileio import FieldFormat, FileFormatError, load_field, save_field
from .noise import Distribution, NoiseMode, NoiseOptions, NoiseSource
from .render import render_field, write_image
from .report import export_report
from .testfields import FUNCTIONS, TestSpec, catalog

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FILE = 3
EXIT_INTERNAL = 4


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return (int(w), int(h))
    except ValueError:
        raise ParameterError(f"--size must look like 800x600, got {text!r}") from None


def _parse_params(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ParameterError(f"--param needs k=v, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _noise_from_args(args) -> NoiseOptions | None:
    if args.noise is None:
        return None
    replacement = None
    if args.noise_range:
        parts = args.noise_range.split(",")
        if len(parts) != 2:
            raise ParameterError(f"--noise-range needs 'lo,hi', got {args.noise_range!r}")
        replacement = (float(parts[0]), float(parts[1]))
    return NoiseOptions(
        mode=NoiseMode(args.noise),
        amplitude=args.noise_amplitude,
        replacement_range=replacement,
        clipping=args.noise_clip,
        proportion=args.noise_proportion,
        distribution=Distribution(args.noise_distribution),
        source=NoiseSource(args.noise_source),
        seed=args.seed,
        perlin_scale=args.noise_scale,
    )


def _load_colormap(path: str):
    try:
        payload = Path(path).read_bytes()
    except OSError as exc:
        raise FileFormatError(f"cannot read colormap {path}: {exc}") from exc
    return parse_spec(payload)


def _add_noise_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--noise", choices=[m.value for m in NoiseMode], help="perturb the field")
    p.add_argument("--noise-amplitude", type=float, help="scaled-mode amplitude in (0, 1]")
    p.add_argument("--noise-range", help="replacement range as 'lo,hi'")
    p.add_argument("--noise-proportion", type=float, default=1.0, help="fraction of pixels touched")
    p.add_argument("--noise-distribution", default="uniform",
                   choices=[d.value for d in Distribution])
    p.add_argument("--noise-source", default="random", choices=[s.value for s in NoiseSource])
    p.add_argument("--noise-clip", action="store_true", help="clamp scaled results to [m, M]")
    p.add_argument("--noise-scale", type=float, default=8.0, help="lattice cells across the field")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmaplab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a test field file")
    gen.add_argument("--function", required=True, help="function id (see catalog)")
    gen.add_argument("--param", action="append", default=[], metavar="K=V")
    gen.add_argument("--size", required=True, help="grid size as WxH")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--threads", type=int, default=1)
    gen.add_argument("--out", required=True, help="output field (.csv or .cmtf)")
    _add_noise_flags(gen)

    ren = sub.add_parser("render", help="map a field file through a colormap")
    ren.add_argument("--field", required=True)
    ren.add_argument("--colormap", required=True)
    ren.add_argument("--out", required=True, help="output image (.png or .ppm)")

    ev = sub.add_parser("evaluate", help="run the difference analysis, write a report")
    ev.add_argument("--field", required=True)
    ev.add_argument("--colormap", required=True)
    ev.add_argument("--metric", default="ciede2000",
                    choices=[m.value for m in DifferenceMetric])
    ev.add_argument("--normalization", default="minmax",
                    help="minmax, blackwhite, or custom:<max>")
    ev.add_argument("--agg", default="max", choices=[a.value for a in Aggregation])
    ev.add_argument("--out", required=True, help="report directory")

    cat = sub.add_parser("catalog", help="list functions and parameter schemas")
    cat.add_argument("--json", action="store_true", dest="as_json")

    rep = sub.add_parser("report", help="print the statistics of a report directory")
    rep.add_argument("--dir", required=True)

    srv = sub.add_parser("serve", help="start the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8776)
    srv.add_argument("--specs-dir", help="persist named colormaps in this directory")
    srv.add_argument("--ui-dir", help="serve a built web UI from this directory at /ui")
    return parser


def _cmd_generate(args) -> int:
    spec = TestSpec(
        function_id=args.function,
        params=_parse_params(args.param),
        resolution=_parse_size(args.size),
        seed=args.seed,
        noise=_noise_from_args(args),
    )
    field = spec.build(threads=args.threads)
    save_field(field, args.out)
    print(f"wrote {args.out} ({field.width}x{field.height})")
    return EXIT_OK


def _cmd_render(args) -> int:
    field = load_field(args.field)
    cmap = _load_colormap(args.colormap)
    write_image(render_field(field, cmap), args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    field = load_field(args.field)
    cmap = _load_colormap(args.colormap)
    bundle = evaluate(
        field,
        cmap,
        metric=DifferenceMetric(args.metric),
        normalization=Normalization.parse(args.normalization),
        aggregation=Aggregation(args.agg),
    )
    stats = export_report(bundle, args.out)
    print(f"wrote report to {args.out}")
    _print_stats(stats)
    return EXIT_OK


def _print_stats(doc: dict) -> None:
    print(f"metric={doc['metric']} normalization={doc['normalization']} agg={doc['aggregation']}")
    if doc.get("degenerate"):
        print("warning: degenerate normalization (constant differences)")
    header = f"{'field':>12} {'min':>10} {'max':>10} {'mean':>10} {'median':>10} {'stddev':>10}"
    print(header)
    for name, s in doc["statistics"].items():
        print(
            f"{name:>12} {s['min']:>10.4g} {s['max']:>10.4g} {s['mean']:>10.4g} "
            f"{s['median']:>10.4g} {s['stddev']:>10.4g}"
        )


def _cmd_catalog(args) -> int:
    entries = catalog()
    if args.as_json:
        print(json.dumps(entries, indent=2))
        return EXIT_OK
    for entry in entries:
        print(f"{entry['id']}: {entry['summary']}")
        print(f"    domain: {entry['domain']}")
        for p in entry["params"]:
            req = "required" if p["required"] else f"default={p['default']}"
            choices = f" choices={','.join(p['choices'])}" if p["choices"] else ""
            print(f"    --param {p['name']}=<{p['kind']}> ({req}){choices}  {p['doc']}")
    return EXIT_OK


def _cmd_report(args) -> int:
    path = Path(args.dir) / "statistics.json"
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path} is not valid JSON: {exc}") from exc
    _print_stats(doc)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    app = create_app(specs_dir=args.specs_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "render": _cmd_render,
    "evaluate": _cmd_evaluate,
    "catalog": _cmd_catalog,
    "report": _cmd_report,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (FileFormatError, OSError) as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except (ParameterError, ColormapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.command in ("generate", "evaluate"):
            print("hint: run 'cmaplab catalog' for functions and parameters", file=sys.stderr)
        return EXIT_USAGE
    except (InternalError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
