/** The scripted design-loop session, driven end-to-end through the UI's
 * own api/state machinery against a real service process. */

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { EditorState } from "../src/state.js";

const PORT = 18000 + Math.floor(Math.random() * 20000);
const BASE = `http://127.0.0.1:${PORT}`;
const SIZE = 96;

let service: ChildProcess | null = null;

async function waitForService(api: ApiClient, attempts = 100): Promise<void> {
  for (let i = 0; i < attempts; i++) {
    try {
      await api.functions();
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 150));
    }
  }
  throw new Error(`service did not come up on ${BASE}`);
}

beforeAll(async () => {
  service = spawn(
    "python3",
    ["-m", "cmaplab.cli", "serve", "--host", "127.0.0.1", "--port", String(PORT)],
    { cwd: new URL("../..", import.meta.url).pathname, stdio: "ignore" },
  );
  await waitForService(new ApiClient(BASE));
}, 30_000);

afterAll(() => {
  service?.kill();
});

function thresholdTest() {
  return {
    function: "threshold",
    params: { m: -63, M: 53, t: 0, T: "flat", b: 2 },
    resolution: [SIZE, SIZE] as [number, number],
    seed: 0,
    noise: null,
  };
}

async function probeThresholdColumnMax(api: ApiClient, bundleId: string): Promise<number> {
  let best = 0;
  for (const i of [SIZE / 2 - 1, SIZE / 2]) {
    const report = await api.observe(bundleId, i, SIZE / 2);
    for (const row of report.rows) best = Math.max(best, row.color_normalized);
  }
  return best;
}

describe("design-loop session", () => {
  it(
    "twin-key edit raises the threshold-column color contrast and refreshes panels",
    async () => {
      const api = new ApiClient(BASE);
      const state = new EditorState();
      state.specName = "session";

      // 1. Load a grayscale map spanning the threshold test's range.
      state.loadSpec("session", {
        range: [-63, 53],
        interpolation_space: "lab",
        nan_color: [0.5, 0.5, 0.5],
        keys: [
          { position: -63, left_rgb: [0, 0, 0], right_rgb: [0, 0, 0] },
          { position: 53, left_rgb: [1, 1, 1], right_rgb: [1, 1, 1] },
        ],
      });
      state.setTest(thresholdTest());
      state.setAnalysis("lab", "blackwhite", "max");
      expect(state.issues()).toEqual([]);

      // 2. First evaluation.
      await api.putColormap(state.specName, state.spec);
      const before = await api.evaluate(state.buildRequest());
      state.applyEvaluation(before);
      expect(state.stale).toBe(false);
      const beforeMax = await probeThresholdColumnMax(api, before.bundle_id);

      // 3. Toggle a twin key at t = 0: split, light blue left / white right.
      const index = state.applyAdd(0);
      expect(state.spec.keys[index].position).toBeCloseTo(0, 3);
      state.spec.keys[index].position = 0; // snap exactly onto the threshold
      state.applyToggleTwin(index);
      state.applyRecolor(index, "left", [0.55, 0.75, 0.95]);
      state.applyRecolor(index, "right", [1, 1, 1]);
      expect(state.stale).toBe(true);

      // 4. Re-evaluate: new bundle, strictly larger color max at the t column.
      await api.putColormap(state.specName, state.spec);
      const after = await api.evaluate(state.buildRequest());
      state.applyEvaluation(after);

      expect(after.bundle_id).not.toBe(before.bundle_id);
      const afterMax = await probeThresholdColumnMax(api, after.bundle_id);
      expect(afterMax).toBeGreaterThan(beforeMax);

      // Panels refresh from the new bundle id; the stale bundle is gone.
      const png = await api.panelBytes(after.bundle_id, "subtraction");
      expect(new Uint8Array(png.slice(0, 4))).toEqual(new Uint8Array([0x89, 0x50, 0x4e, 0x47]));
      await expect(api.panelBytes(before.bundle_id, "subtraction")).rejects.toThrow();
    },
    60_000,
  );
});
