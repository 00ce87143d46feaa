import { describe, expect, it } from "vitest";

import {
  IDENTITY,
  MAX_SCALE,
  clampPan,
  pan,
  viewToPixel,
  zoomAt,
} from "../src/viewTransform.js";

describe("zoomAt", () => {
  it("keeps the anchor point fixed", () => {
    const t = zoomAt(IDENTITY, 100, 50, 2);
    // The view point (100, 50) must map to the same content point.
    const before = { x: (100 - IDENTITY.tx) / IDENTITY.scale, y: (50 - IDENTITY.ty) / IDENTITY.scale };
    const after = { x: (100 - t.tx) / t.scale, y: (50 - t.ty) / t.scale };
    expect(after.x).toBeCloseTo(before.x, 10);
    expect(after.y).toBeCloseTo(before.y, 10);
  });

  it("clamps to the scale bounds", () => {
    let t = IDENTITY;
    for (let i = 0; i < 40; i++) t = zoomAt(t, 0, 0, 2);
    expect(t.scale).toBe(MAX_SCALE);
    for (let i = 0; i < 80; i++) t = zoomAt(t, 0, 0, 0.5);
    expect(t.scale).toBe(1);
  });
});

describe("pan + clampPan", () => {
  it("accumulates offsets", () => {
    const t = pan(pan(IDENTITY, 5, -3), 2, 1);
    expect(t.tx).toBe(7);
    expect(t.ty).toBe(-2);
  });

  it("keeps the content at least partially visible", () => {
    const t = clampPan(pan(IDENTITY, 10_000, -10_000), 300, 300);
    expect(t.tx).toBeLessThanOrEqual(299);
    expect(t.ty).toBeGreaterThanOrEqual(1 - 300);
  });
});

describe("viewToPixel", () => {
  it("maps the identity view onto grid indices", () => {
    expect(viewToPixel(IDENTITY, 0, 0, 8, 8, 256, 256)).toEqual({ i: 0, j: 0 });
    expect(viewToPixel(IDENTITY, 255, 255, 8, 8, 256, 256)).toEqual({ i: 7, j: 7 });
    expect(viewToPixel(IDENTITY, 128, 64, 8, 8, 256, 256)).toEqual({ i: 4, j: 2 });
  });

  it("returns null outside the content", () => {
    const zoomed = zoomAt(IDENTITY, 0, 0, 4);
    const panned = pan(zoomed, 50, 50);
    expect(viewToPixel(panned, 10, 10, 8, 8, 256, 256)).toBeNull();
  });

  it("stays consistent under zoom", () => {
    const t = zoomAt(IDENTITY, 128, 128, 2);
    // The anchor keeps pointing at the same pixel after zooming.
    expect(viewToPixel(t, 128, 128, 16, 16, 256, 256)).toEqual(
      viewToPixel(IDENTITY, 128, 128, 16, 16, 256, 256),
    );
  });
});
