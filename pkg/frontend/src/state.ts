/** Editor state and colormap-document editing operations.
 *
 * All functions are pure so the editing rules (ordering, clamping,
 * endpoint locks) are unit-testable without a DOM. The UI never computes
 * evaluation numbers itself; it only shapes requests and displays what
 * the service returns.
 */

import type {
  ColormapDoc,
  EvaluateRequest,
  EvaluateResponse,
  Rgb,
  TestSelection,
} from "./types.js";

export interface SpecIssue {
  field: string;
  message: string;
}

const SPACES = new Set(["lab", "din99", "srgb"]);

function cloneDoc(doc: ColormapDoc): ColormapDoc {
  return JSON.parse(JSON.stringify(doc)) as ColormapDoc;
}

function validRgb(rgb: unknown): rgb is Rgb {
  return (
    Array.isArray(rgb) &&
    rgb.length === 3 &&
    rgb.every((c) => typeof c === "number" && Number.isFinite(c) && c >= 0 && c <= 1)
  );
}

/** Client-side mirror of the service's document rules; the local spec must
 * pass this before any submission. */
export function validateSpec(doc: ColormapDoc): SpecIssue[] {
  const issues: SpecIssue[] = [];
  const [lo, hi] = doc.range ?? [NaN, NaN];
  if (!(Number.isFinite(lo) && Number.isFinite(hi) && lo < hi)) {
    issues.push({ field: "range", message: "range must satisfy min < max" });
  }
  if (!SPACES.has(doc.interpolation_space)) {
    issues.push({ field: "interpolation_space", message: `unknown space tag '${doc.interpolation_space}'` });
  }
  const keys = doc.keys ?? [];
  if (keys.length < 2) {
    issues.push({ field: "keys", message: "a colormap needs at least 2 keys" });
  }
  keys.forEach((k, i) => {
    if (!Number.isFinite(k.position)) {
      issues.push({ field: `keys.${i}.position`, message: "position must be finite" });
    }
    if (!validRgb(k.left_rgb)) {
      issues.push({ field: `keys.${i}.left_rgb`, message: "rgb components must lie in [0, 1]" });
    }
    if (!validRgb(k.right_rgb)) {
      issues.push({ field: `keys.${i}.right_rgb`, message: "rgb components must lie in [0, 1]" });
    }
  });
  for (let i = 1; i < keys.length; i++) {
    if (keys[i].position === keys[i - 1].position) {
      issues.push({ field: `keys.${i}.position`, message: `duplicate key position ${keys[i].position}` });
    } else if (keys[i].position < keys[i - 1].position) {
      issues.push({ field: `keys.${i}.position`, message: "key positions must be strictly increasing" });
    }
  }
  if (keys.length >= 2 && Number.isFinite(lo) && Number.isFinite(hi)) {
    if (keys[0].position !== lo || keys[keys.length - 1].position !== hi) {
      issues.push({ field: "keys", message: "first/last key positions must equal the range endpoints" });
    }
  }
  return issues;
}

const MIN_GAP_FRACTION = 1e-6;

function minGap(doc: ColormapDoc): number {
  return (doc.range[1] - doc.range[0]) * MIN_GAP_FRACTION;
}

/** Clamp a dragged key strictly between its neighbors; endpoint keys are
 * pinned to the range. Returns the position actually applied. */
export function moveKey(doc: ColormapDoc, index: number, position: number): number {
  const keys = doc.keys;
  if (index <= 0 || index >= keys.length - 1) {
    return keys[index].position; // endpoints define the range and stay put
  }
  const gap = minGap(doc);
  const lo = keys[index - 1].position + gap;
  const hi = keys[index + 1].position - gap;
  const applied = Math.min(hi, Math.max(lo, position));
  keys[index].position = applied;
  return applied;
}

/** Insert a key at a position, seeding both branches with a blend of the
 * neighbor colors (an editing default only; all analysis colors come from
 * the service). Returns the new key's index. */
export function addKey(doc: ColormapDoc, position: number): number {
  const [lo, hi] = doc.range;
  const gap = minGap(doc);
  const p = Math.min(hi - gap, Math.max(lo + gap, position));
  let index = doc.keys.findIndex((k) => k.position > p);
  if (index <= 0) index = doc.keys.length - 1;
  const before = doc.keys[index - 1];
  const after = doc.keys[index];
  if (p === before.position || p === after.position) {
    throw new Error(`duplicate key position ${p}`);
  }
  const t = (p - before.position) / (after.position - before.position);
  const blend = before.right_rgb.map((c, k) => c + t * (after.left_rgb[k] - c)) as Rgb;
  doc.keys.splice(index, 0, {
    position: p,
    left_rgb: [...blend] as Rgb,
    right_rgb: [...blend] as Rgb,
  });
  return index;
}

export function deleteKey(doc: ColormapDoc, index: number): void {
  if (index <= 0 || index >= doc.keys.length - 1) {
    throw new Error("endpoint keys cannot be deleted");
  }
  doc.keys.splice(index, 1);
}

export function isTwin(doc: ColormapDoc, index: number): boolean {
  const k = doc.keys[index];
  return k.left_rgb.some((c, i) => c !== k.right_rgb[i]);
}

/** Split a key into independently editable branches, or merge a twin key
 * back (the right branch wins, matching the sampler's right-continuity). */
export function toggleTwin(doc: ColormapDoc, index: number): boolean {
  const k = doc.keys[index];
  if (isTwin(doc, index)) {
    k.left_rgb = [...k.right_rgb] as Rgb;
    return false;
  }
  return true;
}

export function recolorKey(doc: ColormapDoc, index: number, side: "left" | "right" | "both", rgb: Rgb): void {
  if (!validRgb(rgb)) throw new Error(`rgb components must lie in [0, 1], got ${JSON.stringify(rgb)}`);
  const k = doc.keys[index];
  if (side !== "right") k.left_rgb = [...rgb] as Rgb;
  if (side !== "left") k.right_rgb = [...rgb] as Rgb;
}

export interface EditorSnapshot {
  specName: string;
  spec: ColormapDoc;
  test: TestSelection;
  metric: string;
  normalization: string;
  aggregation: string;
}

export const DEFAULT_GRAY: ColormapDoc = {
  range: [0, 1],
  interpolation_space: "lab",
  nan_color: [0.5, 0.5, 0.5],
  keys: [
    { position: 0, left_rgb: [0, 0, 0], right_rgb: [0, 0, 0] },
    { position: 1, left_rgb: [1, 1, 1], right_rgb: [1, 1, 1] },
  ],
};

export const DEFAULT_TEST: TestSelection = {
  function: "gradient",
  params: {},
  resolution: [256, 256],
  seed: 0,
  noise: null,
};

export class EditorState {
  specName = "working";
  spec: ColormapDoc = cloneDoc(DEFAULT_GRAY);
  test: TestSelection = JSON.parse(JSON.stringify(DEFAULT_TEST)) as TestSelection;
  metric = "ciede2000";
  normalization = "minmax";
  aggregation = "max";

  /** Keys the user split even though both branches still match. */
  private splitMarks = new Set<number>();

  lastBundle: EvaluateResponse | null = null;
  stale = true;

  loadSpec(name: string, doc: ColormapDoc): void {
    this.specName = name;
    this.spec = cloneDoc(doc);
    this.splitMarks.clear();
    this.markStale();
  }

  private markStale(): void {
    this.stale = true;
  }

  issues(): SpecIssue[] {
    return validateSpec(this.spec);
  }

  keyIsSplit(index: number): boolean {
    return isTwin(this.spec, index) || this.splitMarks.has(index);
  }

  applyMove(index: number, position: number): number {
    const applied = moveKey(this.spec, index, position);
    this.markStale();
    return applied;
  }

  applyAdd(position: number): number {
    const index = addKey(this.spec, position);
    this.splitMarks = new Set([...this.splitMarks].map((i) => (i >= index ? i + 1 : i)));
    this.markStale();
    return index;
  }

  applyDelete(index: number): void {
    deleteKey(this.spec, index);
    this.splitMarks = new Set(
      [...this.splitMarks].filter((i) => i !== index).map((i) => (i > index ? i - 1 : i)),
    );
    this.markStale();
  }

  applyToggleTwin(index: number): void {
    const nowSplit = toggleTwin(this.spec, index);
    if (nowSplit) this.splitMarks.add(index);
    else this.splitMarks.delete(index);
    this.markStale();
  }

  applyRecolor(index: number, side: "left" | "right" | "both", rgb: Rgb): void {
    const effectiveSide = this.keyIsSplit(index) ? side : "both";
    recolorKey(this.spec, index, effectiveSide, rgb);
    this.markStale();
  }

  setTest(test: TestSelection): void {
    this.test = JSON.parse(JSON.stringify(test)) as TestSelection;
    this.markStale();
  }

  setAnalysis(metric: string, normalization: string, aggregation: string): void {
    this.metric = metric;
    this.normalization = normalization;
    this.aggregation = aggregation;
    this.markStale();
  }

  /** The one request this editor state denotes. */
  buildRequest(): EvaluateRequest {
    const issues = this.issues();
    if (issues.length > 0) {
      throw new Error(`spec is invalid: ${issues[0].field}: ${issues[0].message}`);
    }
    return {
      test: JSON.parse(JSON.stringify(this.test)) as TestSelection,
      colormap: this.specName,
      metric: this.metric,
      normalization: this.normalization,
      aggregation: this.aggregation,
    };
  }

  applyEvaluation(response: EvaluateResponse): void {
    this.lastBundle = response;
    this.stale = false;
  }
}
