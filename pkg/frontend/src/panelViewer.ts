/** The five evaluation panels with synchronized zoom/pan and a hover probe
 * that shows the pixel observer's neighborhood table. */

import type { ApiClient } from "./api.js";
import type { EditorState } from "./state.js";
import type { ObserverReport, PanelName } from "./types.js";
import { PANELS } from "./types.js";
import { IDENTITY, Transform, clampPan, pan, viewToPixel, zoomAt } from "./viewTransform.js";

export class PanelViewer {
  readonly root: HTMLElement;
  private transform: Transform = { ...IDENTITY };
  private bundleId: string | null = null;
  private gridSize: [number, number] = [0, 0];
  private panning: { x: number; y: number } | null = null;
  private probePending = false;

  constructor(
    private readonly api: ApiClient,
    private readonly state: EditorState,
  ) {
    this.root = document.createElement("div");
    this.root.className = "panel-viewer";
    this.root.innerHTML = `
      <div class="panel-grid">
        ${PANELS.map(
          (p) => `
          <figure class="panel" data-panel="${p}">
            <figcaption>${p}</figcaption>
            <div class="viewport"><img alt="${p} panel" draggable="false"></div>
          </figure>`,
        ).join("")}
      </div>
      <div class="observer">
        <div class="observer-summary">hover a panel to probe a pixel</div>
        <table class="observer-table" hidden>
          <thead><tr>
            <th>offset</th><th>neighbor</th><th>value</th>
            <th>value raw</th><th>value norm</th>
            <th>color raw</th><th>color norm</th><th>subtraction</th>
          </tr></thead>
          <tbody></tbody>
        </table>
      </div>
    `;
    for (const viewport of this.viewports()) {
      viewport.addEventListener("wheel", (ev) => this.onWheel(ev), { passive: false });
      viewport.addEventListener("pointerdown", (ev) => {
        this.panning = { x: ev.clientX, y: ev.clientY };
      });
      viewport.addEventListener("pointermove", (ev) => this.onMove(ev));
    }
    window.addEventListener("pointerup", () => (this.panning = null));
  }

  private viewports(): HTMLElement[] {
    return [...this.root.querySelectorAll<HTMLElement>(".viewport")];
  }

  /** Re-point all five images at a bundle's panels. */
  showBundle(bundleId: string, gridW: number, gridH: number): void {
    this.bundleId = bundleId;
    this.gridSize = [gridW, gridH];
    for (const figure of this.root.querySelectorAll<HTMLElement>(".panel")) {
      const name = figure.dataset.panel as PanelName;
      const img = figure.querySelector("img") as HTMLImageElement;
      img.src = this.api.panelUrl(bundleId, name);
    }
    this.root.classList.remove("stale");
  }

  markStale(): void {
    this.root.classList.add("stale");
  }

  private applyTransform(): void {
    const t = this.transform;
    for (const img of this.root.querySelectorAll<HTMLImageElement>(".viewport img")) {
      img.style.transformOrigin = "0 0";
      img.style.transform = `translate(${t.tx}px, ${t.ty}px) scale(${t.scale})`;
    }
  }

  private onWheel(ev: WheelEvent): void {
    ev.preventDefault();
    const rect = (ev.currentTarget as HTMLElement).getBoundingClientRect();
    const factor = ev.deltaY < 0 ? 1.2 : 1 / 1.2;
    this.transform = zoomAt(this.transform, ev.clientX - rect.left, ev.clientY - rect.top, factor);
    this.transform = clampPan(this.transform, rect.width, rect.height);
    this.applyTransform();
  }

  private onMove(ev: PointerEvent): void {
    const viewport = ev.currentTarget as HTMLElement;
    const rect = viewport.getBoundingClientRect();
    if (this.panning) {
      this.transform = pan(this.transform, ev.clientX - this.panning.x, ev.clientY - this.panning.y);
      this.transform = clampPan(this.transform, rect.width, rect.height);
      this.panning = { x: ev.clientX, y: ev.clientY };
      this.applyTransform();
      return;
    }
    if (!this.bundleId || this.state.stale) return;
    const hit = viewToPixel(
      this.transform,
      ev.clientX - rect.left,
      ev.clientY - rect.top,
      this.gridSize[0],
      this.gridSize[1],
      rect.width,
      rect.height,
    );
    if (hit) void this.probe(hit.i, hit.j);
  }

  private async probe(i: number, j: number): Promise<void> {
    if (this.probePending || !this.bundleId) return;
    this.probePending = true;
    try {
      const report = await this.api.observe(this.bundleId, i, j);
      this.renderObserver(report);
    } catch {
      /* pixel raced out of bounds during zoom; ignore */
    } finally {
      this.probePending = false;
    }
  }

  private renderObserver(report: ObserverReport): void {
    const summary = this.root.querySelector(".observer-summary") as HTMLElement;
    summary.textContent =
      `pixel (${report.pixel[0]}, ${report.pixel[1]}) value ${report.value.toPrecision(6)} — ` +
      `${report.rows.length} neighbors`;
    const table = this.root.querySelector(".observer-table") as HTMLTableElement;
    const body = table.querySelector("tbody") as HTMLElement;
    body.innerHTML = report.rows
      .map(
        (r) => `<tr>
          <td>(${r.offset[0]}, ${r.offset[1]})</td>
          <td>(${r.neighbor[0]}, ${r.neighbor[1]})</td>
          <td>${r.neighbor_value.toPrecision(5)}</td>
          <td>${r.value_raw.toPrecision(5)}</td>
          <td>${r.value_normalized.toPrecision(5)}</td>
          <td>${r.color_raw.toPrecision(5)}</td>
          <td>${r.color_normalized.toPrecision(5)}</td>
          <td>${r.subtraction.toPrecision(5)}</td>
        </tr>`,
      )
      .join("");
    table.hidden = false;
  }
}
