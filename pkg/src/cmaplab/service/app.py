"""HTTP facade over the analysis pipeline for the interactive design loop.

Endpoints:
    GET    /functions              function catalog with parameter schemas
    GET    /colormaps              stored colormap names
    POST   /colormaps              create a named colormap
    GET    /colormaps/{name}       fetch a spec document
    PUT    /colormaps/{name}       create or replace a spec
    DELETE /colormaps/{name}       remove a spec
    POST   /evaluate               run the pipeline, returns bundle id + stats
    GET    /panels/{bundle}/{panel} panel PNG (grayscale|mapped|value|color|subtraction)
    GET    /observe/{bundle}?i=&j= pixel-observer record
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..color import DifferenceMetric
from ..colormap import ColormapError, parse_spec, serialize_spec
from ..errors import ParameterError
from ..evaluation import Aggregation, Normalization, evaluate, pixel_observer
from ..render import PANEL_NAMES, encode_png, render_evaluation
from ..testfields import TestSpec, catalog
from .models import (
    ColormapCreate,
    ColormapModel,
    ColormapSaved,
    EvaluateRequest,
    EvaluateResponse,
)
from .store import BadNameError, DuplicateNameError, SessionStore, UnknownNameError


def _spec_from_model(model: ColormapModel):
    # One validation path for documents and API payloads.
    return parse_spec(json.dumps(model.to_document()))


def _default_ui_dir() -> Path | None:
    """The built frontend, when running from a source checkout."""
    candidate = Path(__file__).resolve().parents[3] / "frontend"
    if (candidate / "index.html").exists() and (candidate / "dist").exists():
        return candidate
    return None


def create_app(
    specs_dir: str | None = None,
    max_bundles: int = 32,
    ui_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="cmaplab", version="0.1.0")
    store = SessionStore(specs_dir=specs_dir, max_bundles=max_bundles)
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request, exc: RequestValidationError):
        errors = [
            {"field": ".".join(str(p) for p in e["loc"] if p != "body"), "message": e["msg"]}
            for e in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"error": "validation failed", "fields": errors})

    @app.exception_handler(ColormapError)
    async def colormap_handler(request, exc: ColormapError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(ParameterError)
    async def parameter_handler(request, exc: ParameterError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(BadNameError)
    async def bad_name_handler(request, exc: BadNameError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(UnknownNameError)
    async def unknown_handler(request, exc: UnknownNameError):
        return JSONResponse(status_code=404, content={"error": f"unknown name {exc.args[0]!r}"})

    @app.exception_handler(DuplicateNameError)
    async def duplicate_handler(request, exc: DuplicateNameError):
        return JSONResponse(
            status_code=409,
            content={"error": f"colormap {exc.args[0]!r} already exists (use PUT to replace)"},
        )

    @app.get("/functions")
    def functions():
        return {"functions": catalog()}

    @app.get("/colormaps")
    def list_colormaps():
        return {"colormaps": store.names()}

    @app.post("/colormaps", status_code=201, response_model=ColormapSaved)
    def create_colormap(payload: ColormapCreate):
        spec = _spec_from_model(payload.spec)
        store.create(payload.name, spec)
        return ColormapSaved(name=payload.name, sha256=store.spec_sha256(payload.name))

    @app.get("/colormaps/{name}")
    def get_colormap(name: str):
        spec = store.get(name)
        return json.loads(serialize_spec(spec))

    @app.put("/colormaps/{name}", response_model=ColormapSaved)
    def put_colormap(name: str, payload: ColormapModel):
        spec = _spec_from_model(payload)
        store.put(name, spec)
        return ColormapSaved(name=name, sha256=store.spec_sha256(name))

    @app.delete("/colormaps/{name}", status_code=204)
    def delete_colormap(name: str):
        store.delete(name)
        return Response(status_code=204)

    @app.post("/evaluate", response_model=EvaluateResponse)
    def run_evaluation(req: EvaluateRequest):
        cmap = store.get(req.colormap)
        test_spec = TestSpec.from_dict(req.test.to_document())
        metric = _parse_metric(req.metric)
        normalization = Normalization.parse(req.normalization)
        aggregation = _parse_aggregation(req.aggregation)

        key = store.bundle_key(req.colormap, req.model_dump())
        cached_id = store.cached_bundle_id(key)
        if cached_id is not None:
            bundle = store.bundle(cached_id)
            return _evaluate_response(cached_id, bundle, cached=True)

        field = test_spec.build()
        bundle = evaluate(field, cmap, metric, normalization, aggregation, test_spec=test_spec)
        bid = store.store_bundle(key, bundle)
        return _evaluate_response(bid, bundle, cached=False)

    def _evaluate_response(bid: str, bundle, cached: bool):
        body = EvaluateResponse(
            bundle_id=bid,
            statistics={k: v.to_dict() for k, v in bundle.statistics().items()},
            degenerate=bundle.degenerate,
            cached=cached,
            field={
                "width": bundle.source_field.width,
                "height": bundle.source_field.height,
                "domain": [list(d) for d in bundle.source_field.domain],
            },
        )
        if bundle.degenerate:
            # A constant difference field has no meaningful normalization;
            # surface that instead of returning innocent-looking zeros.
            return JSONResponse(status_code=422, content=body.model_dump())
        return body

    @app.get("/panels/{bundle_id}/{panel}")
    def panel(bundle_id: str, panel: str):
        bundle = store.bundle(bundle_id)
        if panel not in PANEL_NAMES:
            return JSONResponse(
                status_code=404,
                content={"error": f"unknown panel {panel!r} (one of {', '.join(PANEL_NAMES)})"},
            )
        images = render_evaluation(bundle)
        return Response(content=encode_png(images[panel]), media_type="image/png")

    @app.get("/observe/{bundle_id}")
    def observe(bundle_id: str, i: int, j: int):
        bundle = store.bundle(bundle_id)
        try:
            report = pixel_observer(bundle, i, j)
        except IndexError as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        return report.to_dict()

    ui_path = Path(ui_dir) if ui_dir else _default_ui_dir()
    if ui_path is not None:
        app.mount("/ui", StaticFiles(directory=ui_path, html=True), name="ui")

    return app


def _parse_metric(text: str) -> DifferenceMetric:
    try:
        return DifferenceMetric(text.lower())
    except ValueError:
        known = ", ".join(m.value for m in DifferenceMetric)
        raise ParameterError(f"unknown metric {text!r} (one of {known})") from None


def _parse_aggregation(text: str) -> Aggregation:
    try:
        return Aggregation(text.lower())
    except ValueError:
        known = ", ".join(a.value for a in Aggregation)
        raise ParameterError(f"unknown aggregation {text!r} (one of {known})") from None
