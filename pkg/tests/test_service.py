import numpy as np
import pytest
from fastapi.testclient import TestClient

from cmaplab.service.app import create_app


def gray_doc(lo=0.0, hi=1.0):
    return {
        "range": [lo, hi],
        "interpolation_space": "lab",
        "nan_color": [0.5, 0.5, 0.5],
        "keys": [
            {"position": lo, "left_rgb": [0, 0, 0], "right_rgb": [0, 0, 0]},
            {"position": hi, "left_rgb": [1, 1, 1], "right_rgb": [1, 1, 1]},
        ],
    }


def threshold_request(cmap_name, size=96):
    return {
        "test": {
            "function": "threshold",
            "params": {"m": -63, "M": 53, "t": 0, "T": "flat", "b": 2},
            "resolution": [size, size],
            "seed": 0,
        },
        "colormap": cmap_name,
        "metric": "lab",
        "normalization": "blackwhite",
        "aggregation": "max",
    }


@pytest.fixture()
def client():
    return TestClient(create_app())


class TestFunctions:
    def test_catalog_endpoint(self, client):
        doc = client.get("/functions").json()
        ids = {f["id"] for f in doc["functions"]}
        assert "threshold" in ids and "little_bit" in ids
        threshold = next(f for f in doc["functions"] if f["id"] == "threshold")
        assert any(p["name"] == "t" and p["required"] for p in threshold["params"])


class TestColormapCrud:
    def test_create_fetch_roundtrip(self, client):
        r = client.post("/colormaps", json={"name": "gray", "spec": gray_doc()})
        assert r.status_code == 201
        assert r.json()["name"] == "gray"
        doc = client.get("/colormaps/gray").json()
        assert doc["range"] == [0.0, 1.0]
        assert len(doc["keys"]) == 2

    def test_duplicate_post_conflicts(self, client):
        client.post("/colormaps", json={"name": "gray", "spec": gray_doc()})
        r = client.post("/colormaps", json={"name": "gray", "spec": gray_doc()})
        assert r.status_code == 409

    def test_put_upserts(self, client):
        r = client.put("/colormaps/fresh", json=gray_doc())
        assert r.status_code == 200
        assert client.get("/colormaps/fresh").status_code == 200

    def test_unknown_name_404(self, client):
        assert client.get("/colormaps/nope").status_code == 404

    def test_delete(self, client):
        client.put("/colormaps/tmp", json=gray_doc())
        assert client.delete("/colormaps/tmp").status_code == 204
        assert client.get("/colormaps/tmp").status_code == 404

    def test_invalid_spec_400_names_defect(self, client):
        doc = gray_doc()
        doc["keys"][1]["position"] = 0.0  # duplicate of the first key
        doc["range"] = [0.0, 0.0]
        r = client.post("/colormaps", json={"name": "bad", "spec": doc})
        assert r.status_code == 400
        assert "duplicate key position" in r.json()["error"] or "min < max" in r.json()["error"]

    def test_duplicate_positions_cited(self, client):
        doc = gray_doc()
        doc["keys"][1]["position"] = 0.0
        r = client.post("/colormaps", json={"name": "bad", "spec": doc})
        assert r.status_code == 400
        assert "duplicate key position" in r.json()["error"]

    def test_pydantic_validation_maps_to_400(self, client):
        r = client.post("/colormaps", json={"name": "x", "spec": {"keys": []}})
        assert r.status_code == 400
        body = r.json()
        assert body["error"] == "validation failed"
        assert any("range" in f["field"] for f in body["fields"])

    def test_persistence_round_trip(self, tmp_path):
        app = create_app(specs_dir=str(tmp_path / "specs"))
        with TestClient(app) as c:
            c.put("/colormaps/kept", json=gray_doc())
        app2 = create_app(specs_dir=str(tmp_path / "specs"))
        with TestClient(app2) as c:
            assert c.get("/colormaps/kept").status_code == 200


class TestEvaluate:
    def test_returns_bundle_and_statistics(self, client):
        client.put("/colormaps/gray", json=gray_doc(-63, 53))
        r = client.post("/evaluate", json=threshold_request("gray"))
        assert r.status_code == 200
        body = r.json()
        assert body["bundle_id"]
        assert set(body["statistics"]) == {"value", "color", "subtraction"}
        assert body["field"]["width"] == 96

    def test_repeat_request_hits_cache_with_same_statistics(self, client):
        client.put("/colormaps/gray", json=gray_doc(-63, 53))
        a = client.post("/evaluate", json=threshold_request("gray")).json()
        b = client.post("/evaluate", json=threshold_request("gray")).json()
        assert a["bundle_id"] == b["bundle_id"]
        assert b["cached"] is True
        assert a["statistics"] == b["statistics"]

    def test_unknown_colormap_404(self, client):
        assert client.post("/evaluate", json=threshold_request("ghost")).status_code == 404

    def test_unknown_function_400(self, client):
        client.put("/colormaps/gray", json=gray_doc())
        req = threshold_request("gray")
        req["test"]["function"] = "warp"
        r = client.post("/evaluate", json=req)
        assert r.status_code == 400
        assert "unknown function" in r.json()["error"]

    def test_editing_spec_changes_bundle_and_statistics(self, client):
        client.put("/colormaps/m", json=gray_doc(-63, 53))
        first = client.post("/evaluate", json=threshold_request("m")).json()
        # Recolor the top key: black -> blue ramp ends in a different hue.
        doc = gray_doc(-63, 53)
        doc["keys"][1]["left_rgb"] = [0.2, 0.3, 1.0]
        doc["keys"][1]["right_rgb"] = [0.2, 0.3, 1.0]
        client.put("/colormaps/m", json=doc)
        second = client.post("/evaluate", json=threshold_request("m")).json()
        assert first["bundle_id"] != second["bundle_id"]
        assert second["cached"] is False
        assert first["statistics"]["color"]["mean"] != second["statistics"]["color"]["mean"]

    def test_degenerate_evaluation_surfaces_as_422(self, client):
        constant = gray_doc()
        for key in constant["keys"]:
            key["left_rgb"] = [0.4, 0.4, 0.4]
            key["right_rgb"] = [0.4, 0.4, 0.4]
        client.put("/colormaps/const", json=constant)
        req = {
            "test": {"function": "gradient", "params": {}, "resolution": [16, 16], "seed": 0},
            "colormap": "const",
            "metric": "lab",
            "normalization": "minmax",
            "aggregation": "max",
        }
        r = client.post("/evaluate", json=req)
        assert r.status_code == 422
        assert r.json()["degenerate"] is True


class TestPanelsAndObserver:
    @pytest.fixture()
    def bundle_id(self, client):
        client.put("/colormaps/gray", json=gray_doc(-63, 53))
        return client.post("/evaluate", json=threshold_request("gray", size=48)).json()["bundle_id"]

    def test_all_five_panels_serve_png(self, client, bundle_id):
        for panel in ("grayscale", "mapped", "value", "color", "subtraction"):
            r = client.get(f"/panels/{bundle_id}/{panel}")
            assert r.status_code == 200
            assert r.headers["content-type"] == "image/png"
            assert r.content.startswith(b"\x89PNG")

    def test_unknown_panel_404(self, client, bundle_id):
        assert client.get(f"/panels/{bundle_id}/zebra").status_code == 404

    def test_unknown_bundle_404(self, client):
        assert client.get("/panels/feedfeedfeedfeed/value").status_code == 404

    def test_observer_interior_pixel(self, client, bundle_id):
        r = client.get(f"/observe/{bundle_id}", params={"i": 24, "j": 24})
        assert r.status_code == 200
        body = r.json()
        assert len(body["rows"]) == 8
        assert body["pixel"] == [24, 24]

    def test_observer_corner_pixel(self, client, bundle_id):
        body = client.get(f"/observe/{bundle_id}", params={"i": 0, "j": 0}).json()
        assert len(body["rows"]) == 3

    def test_observer_out_of_bounds_400(self, client, bundle_id):
        assert client.get(f"/observe/{bundle_id}", params={"i": 48, "j": 0}).status_code == 400


class TestDesignLoop:
    """The iterate-edit-retest workflow, driven through the HTTP contract."""

    def probe_threshold_column_max(self, client, bundle_id, size):
        # Columns straddling x = 0 are size/2 - 1 and size/2; probe both
        # at mid-height and take the largest normalized color entry.
        best = 0.0
        for i in (size // 2 - 1, size // 2):
            body = client.get(f"/observe/{bundle_id}", params={"i": i, "j": size // 2}).json()
            best = max(best, max(r["color_normalized"] for r in body["rows"]))
        return best

    def test_twin_key_edit_raises_threshold_column_contrast(self, client):
        size = 96
        client.put("/colormaps/work", json=gray_doc(-63, 53))
        before = client.post("/evaluate", json=threshold_request("work", size)).json()
        before_max = self.probe_threshold_column_max(client, before["bundle_id"], size)

        # Toggle the mid key into a twin key: split at t=0 into two branches.
        doc = gray_doc(-63, 53)
        doc["keys"] = [
            doc["keys"][0],
            {"position": 0.0, "left_rgb": [0.55, 0.75, 0.95], "right_rgb": [1.0, 1.0, 1.0]},
            doc["keys"][1],
        ]
        client.put("/colormaps/work", json=doc)
        after = client.post("/evaluate", json=threshold_request("work", size)).json()
        after_max = self.probe_threshold_column_max(client, after["bundle_id"], size)

        assert after["bundle_id"] != before["bundle_id"]
        assert after_max > before_max
        # Panels refresh from the new bundle id.
        r = client.get(f"/panels/{after['bundle_id']}/subtraction")
        assert r.status_code == 200
        old = client.get(f"/panels/{before['bundle_id']}/subtraction")
        assert old.status_code == 404  # stale bundle dropped with the edit
