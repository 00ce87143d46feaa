import { describe, expect, it } from "vitest";

import {
  DEFAULT_GRAY,
  EditorState,
  addKey,
  deleteKey,
  isTwin,
  moveKey,
  toggleTwin,
  validateSpec,
} from "../src/state.js";
import type { ColormapDoc } from "../src/types.js";

function gray(): ColormapDoc {
  return JSON.parse(JSON.stringify(DEFAULT_GRAY)) as ColormapDoc;
}

function threeKey(): ColormapDoc {
  const doc = gray();
  doc.keys.splice(1, 0, { position: 0.5, left_rgb: [0.5, 0.5, 0.5], right_rgb: [0.5, 0.5, 0.5] });
  return doc;
}

describe("validateSpec", () => {
  it("accepts the default grayscale", () => {
    expect(validateSpec(gray())).toEqual([]);
  });

  it("rejects duplicate positions", () => {
    const doc = threeKey();
    doc.keys[1].position = 0;
    const issues = validateSpec(doc);
    expect(issues.some((i) => i.message.includes("duplicate key position"))).toBe(true);
  });

  it("rejects unordered keys", () => {
    const doc = threeKey();
    doc.keys[1].position = 2;
    const issues = validateSpec(doc);
    expect(issues.some((i) => i.message.includes("increasing") || i.message.includes("endpoints"))).toBe(true);
  });

  it("rejects out-of-range rgb", () => {
    const doc = gray();
    doc.keys[0].left_rgb = [1.5, 0, 0];
    expect(validateSpec(doc).some((i) => i.field === "keys.0.left_rgb")).toBe(true);
  });

  it("requires endpoints to match the range", () => {
    const doc = gray();
    doc.range = [0, 2];
    expect(validateSpec(doc).some((i) => i.message.includes("endpoints"))).toBe(true);
  });

  it("rejects unknown interpolation space", () => {
    const doc = gray();
    doc.interpolation_space = "hsv";
    expect(validateSpec(doc).some((i) => i.field === "interpolation_space")).toBe(true);
  });
});

describe("key editing", () => {
  it("clamps drags between neighbors", () => {
    const doc = threeKey();
    const applied = moveKey(doc, 1, 5.0);
    expect(applied).toBeLessThan(1);
    expect(applied).toBeGreaterThan(0.99);
    expect(validateSpec(doc)).toEqual([]);
  });

  it("never moves endpoint keys", () => {
    const doc = threeKey();
    expect(moveKey(doc, 0, 0.4)).toBe(0);
    expect(moveKey(doc, 2, 0.6)).toBe(1);
    expect(doc.keys[0].position).toBe(0);
    expect(doc.keys[2].position).toBe(1);
  });

  it("inserts keys with blended colors and keeps order", () => {
    const doc = gray();
    const index = addKey(doc, 0.25);
    expect(index).toBe(1);
    expect(doc.keys[1].position).toBeCloseTo(0.25, 12);
    expect(doc.keys[1].left_rgb[0]).toBeCloseTo(0.25, 12);
    expect(validateSpec(doc)).toEqual([]);
  });

  it("refuses to delete endpoints", () => {
    const doc = threeKey();
    expect(() => deleteKey(doc, 0)).toThrow(/endpoint/);
    expect(() => deleteKey(doc, 2)).toThrow(/endpoint/);
    deleteKey(doc, 1);
    expect(doc.keys).toHaveLength(2);
  });

  it("toggles twin keys by splitting and merging", () => {
    const doc = threeKey();
    expect(isTwin(doc, 1)).toBe(false);
    expect(toggleTwin(doc, 1)).toBe(true); // split: branches stay equal until edited
    doc.keys[1].left_rgb = [0.2, 0.2, 0.9];
    expect(isTwin(doc, 1)).toBe(true);
    expect(toggleTwin(doc, 1)).toBe(false); // merge: right branch wins
    expect(doc.keys[1].left_rgb).toEqual(doc.keys[1].right_rgb);
    expect(doc.keys[1].left_rgb).toEqual([0.5, 0.5, 0.5]);
  });
});

describe("EditorState", () => {
  it("serializes to exactly one evaluate request", () => {
    const state = new EditorState();
    state.setTest({
      function: "threshold",
      params: { m: -63, M: 53, t: 0, T: "flat", b: 2 },
      resolution: [96, 96],
      seed: 0,
      noise: null,
    });
    state.setAnalysis("lab", "blackwhite", "max");
    const a = state.buildRequest();
    const b = state.buildRequest();
    expect(a).toEqual(b);
    expect(a.colormap).toBe("working");
    expect(a.test.function).toBe("threshold");
  });

  it("refuses to build a request from an invalid spec", () => {
    const state = new EditorState();
    state.spec.keys[0].position = 0.5; // endpoint no longer matches range
    expect(() => state.buildRequest()).toThrow(/invalid/);
  });

  it("marks panels stale on every edit and fresh after evaluation", () => {
    const state = new EditorState();
    expect(state.stale).toBe(true);
    state.applyEvaluation({
      bundle_id: "b1",
      statistics: {} as never,
      degenerate: false,
      cached: false,
      field: { width: 8, height: 8, domain: [[0, 1], [0, 1]] },
    });
    expect(state.stale).toBe(false);
    state.applyAdd(0.5);
    expect(state.stale).toBe(true);
  });

  it("recolors both branches until a key is split", () => {
    const state = new EditorState();
    const index = state.applyAdd(0.5);
    state.applyRecolor(index, "left", [0.9, 0.1, 0.1]);
    expect(state.spec.keys[index].right_rgb).toEqual([0.9, 0.1, 0.1]);
    state.applyToggleTwin(index);
    state.applyRecolor(index, "left", [0.1, 0.9, 0.1]);
    expect(state.spec.keys[index].left_rgb).toEqual([0.1, 0.9, 0.1]);
    expect(state.spec.keys[index].right_rgb).toEqual([0.9, 0.1, 0.1]);
  });

  it("keeps split marks aligned across inserts and deletes", () => {
    const state = new EditorState();
    const first = state.applyAdd(0.6);
    state.applyToggleTwin(first);
    expect(state.keyIsSplit(first)).toBe(true);
    const earlier = state.applyAdd(0.3);
    expect(earlier).toBeLessThan(first + 1);
    expect(state.keyIsSplit(first + 1)).toBe(true);
    state.applyDelete(earlier);
    expect(state.keyIsSplit(first)).toBe(true);
  });
});
