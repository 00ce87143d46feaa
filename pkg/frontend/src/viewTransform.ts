/** Shared zoom/pan math for the synchronized panel views. */

export interface Transform {
  scale: number;
  tx: number;
  ty: number;
}

export const IDENTITY: Transform = { scale: 1, tx: 0, ty: 0 };
export const MIN_SCALE = 1;
export const MAX_SCALE = 64;

/** Zoom by a factor keeping the view point (cx, cy) fixed on screen. */
export function zoomAt(t: Transform, cx: number, cy: number, factor: number): Transform {
  const scale = Math.min(MAX_SCALE, Math.max(MIN_SCALE, t.scale * factor));
  const applied = scale / t.scale;
  return {
    scale,
    tx: cx - applied * (cx - t.tx),
    ty: cy - applied * (cy - t.ty),
  };
}

export function pan(t: Transform, dx: number, dy: number): Transform {
  return { scale: t.scale, tx: t.tx + dx, ty: t.ty + dy };
}

/** Keep at least one image pixel visible inside a view of the given size. */
export function clampPan(t: Transform, viewW: number, viewH: number): Transform {
  const w = viewW * t.scale;
  const h = viewH * t.scale;
  return {
    scale: t.scale,
    tx: Math.min(viewW - 1, Math.max(1 - w, t.tx)),
    ty: Math.min(viewH - 1, Math.max(1 - h, t.ty)),
  };
}

/** Map a view-space point to grid indices (i, j); null outside the grid. */
export function viewToPixel(
  t: Transform,
  vx: number,
  vy: number,
  gridW: number,
  gridH: number,
  viewW: number,
  viewH: number,
): { i: number; j: number } | null {
  const u = (vx - t.tx) / (t.scale * viewW);
  const v = (vy - t.ty) / (t.scale * viewH);
  if (u < 0 || u >= 1 || v < 0 || v >= 1) return null;
  return { i: Math.floor(u * gridW), j: Math.floor(v * gridH) };
}
