/** Wire-format types of the cmaplab service. */

export type Rgb = [number, number, number];

export interface ColormapKeyDoc {
  position: number;
  left_rgb: Rgb;
  right_rgb: Rgb;
}

export interface ColormapDoc {
  range: [number, number];
  interpolation_space: string;
  nan_color?: Rgb;
  keys: ColormapKeyDoc[];
}

export interface ParamSchema {
  name: string;
  kind: "float" | "int" | "enum" | "floats";
  default: unknown;
  choices: string[] | null;
  doc: string;
  required: boolean;
}

export interface FunctionSchema {
  id: string;
  summary: string;
  domain: string;
  params: ParamSchema[];
}

export interface NoiseDoc {
  mode: string;
  amplitude?: number | null;
  replacement_range?: [number, number] | null;
  clipping?: boolean;
  proportion?: number;
  distribution?: string;
  source?: string;
  seed?: number;
  perlin_scale?: number;
}

export interface TestSelection {
  function: string;
  params: Record<string, unknown>;
  resolution: [number, number];
  seed: number;
  noise?: NoiseDoc | null;
}

export interface EvaluateRequest {
  test: TestSelection;
  colormap: string;
  metric: string;
  normalization: string;
  aggregation: string;
}

export interface Statistics {
  min: number;
  max: number;
  mean: number;
  median: number;
  stddev: number;
}

export interface EvaluateResponse {
  bundle_id: string;
  statistics: Record<"value" | "color" | "subtraction", Statistics>;
  degenerate: boolean;
  cached: boolean;
  field: { width: number; height: number; domain: number[][] };
}

export interface ObserverRow {
  offset: [number, number];
  neighbor: [number, number];
  neighbor_value: number;
  value_raw: number;
  value_normalized: number;
  color_raw: number;
  color_normalized: number;
  subtraction: number;
}

export interface ObserverReport {
  pixel: [number, number];
  value: number;
  rows: ObserverRow[];
}

export const PANELS = ["grayscale", "mapped", "value", "color", "subtraction"] as const;
export type PanelName = (typeof PANELS)[number];
