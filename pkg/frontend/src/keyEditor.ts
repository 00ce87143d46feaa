/** Gradient bar with draggable key stops, twin toggling, and branch colors.
 *
 * The bar preview is a plain CSS sRGB gradient: an editing aid only. The
 * truthful rendering (interpolated in the configured space) is the
 * service's "mapped" panel.
 */

import type { EditorState } from "./state.js";
import { isTwin } from "./state.js";
import type { Rgb } from "./types.js";

function cssColor(rgb: Rgb): string {
  const [r, g, b] = rgb.map((c) => Math.round(c * 255));
  return `rgb(${r}, ${g}, ${b})`;
}

function hexColor(rgb: Rgb): string {
  return (
    "#" + rgb.map((c) => Math.round(c * 255).toString(16).padStart(2, "0")).join("")
  );
}

function parseHex(hex: string): Rgb {
  const v = hex.replace("#", "");
  return [0, 2, 4].map((o) => parseInt(v.slice(o, o + 2), 16) / 255) as Rgb;
}

export class KeyEditor {
  readonly root: HTMLElement;
  private selected = 0;
  private dragging: number | null = null;

  constructor(
    private readonly state: EditorState,
    private readonly onEdit: () => void,
  ) {
    this.root = document.createElement("div");
    this.root.className = "key-editor";
    this.root.innerHTML = `
      <div class="gradient-bar"></div>
      <div class="stops"></div>
      <div class="key-detail"></div>
      <div class="spec-issues"></div>
    `;
    this.bar.addEventListener("dblclick", (ev) => this.insertAt(ev));
    window.addEventListener("pointermove", (ev) => this.drag(ev));
    window.addEventListener("pointerup", () => (this.dragging = null));
    this.render();
  }

  private get bar(): HTMLElement {
    return this.root.querySelector(".gradient-bar") as HTMLElement;
  }

  private positionToFraction(position: number): number {
    const [lo, hi] = this.state.spec.range;
    return (position - lo) / (hi - lo);
  }

  private fractionToPosition(f: number): number {
    const [lo, hi] = this.state.spec.range;
    return lo + f * (hi - lo);
  }

  private insertAt(ev: MouseEvent): void {
    const rect = this.bar.getBoundingClientRect();
    const f = (ev.clientX - rect.left) / rect.width;
    this.selected = this.state.applyAdd(this.fractionToPosition(f));
    this.render();
    this.onEdit();
  }

  private drag(ev: PointerEvent): void {
    if (this.dragging === null) return;
    const rect = this.bar.getBoundingClientRect();
    const f = (ev.clientX - rect.left) / rect.width;
    this.state.applyMove(this.dragging, this.fractionToPosition(f));
    this.render();
    this.onEdit();
  }

  render(): void {
    const doc = this.state.spec;
    const stops: string[] = [];
    doc.keys.forEach((k, i) => {
      const pct = (this.positionToFraction(k.position) * 100).toFixed(3);
      if (i > 0 || isTwin(doc, i)) stops.push(`${cssColor(k.left_rgb)} ${pct}%`);
      stops.push(`${cssColor(k.right_rgb)} ${pct}%`);
    });
    this.bar.style.background = `linear-gradient(to right, ${stops.join(", ")})`;

    const stopsHost = this.root.querySelector(".stops") as HTMLElement;
    stopsHost.textContent = "";
    doc.keys.forEach((k, i) => {
      const stop = document.createElement("button");
      stop.className = "stop" + (i === this.selected ? " selected" : "");
      stop.style.left = `${this.positionToFraction(k.position) * 100}%`;
      stop.title = `key at ${k.position}`;
      if (isTwin(doc, i)) stop.classList.add("twin");
      stop.addEventListener("pointerdown", () => {
        this.selected = i;
        if (i > 0 && i < doc.keys.length - 1) this.dragging = i;
        this.render();
      });
      stopsHost.appendChild(stop);
    });

    this.renderDetail();
    this.renderIssues();
  }

  private renderDetail(): void {
    const host = this.root.querySelector(".key-detail") as HTMLElement;
    const doc = this.state.spec;
    const i = Math.min(this.selected, doc.keys.length - 1);
    const key = doc.keys[i];
    const split = this.state.keyIsSplit(i);
    const endpoint = i === 0 || i === doc.keys.length - 1;
    host.innerHTML = `
      <span class="pos">key ${i} @ ${key.position.toPrecision(6)}</span>
      <label>${split ? "left" : "color"}
        <input type="color" class="left" value="${hexColor(key.left_rgb)}">
      </label>
      <label class="right-wrap" ${split ? "" : "hidden"}>right
        <input type="color" class="right" value="${hexColor(key.right_rgb)}">
      </label>
      <button class="twin-toggle">${split ? "merge twin" : "split twin"}</button>
      <button class="delete" ${endpoint ? "disabled" : ""}>delete</button>
    `;
    (host.querySelector(".left") as HTMLInputElement).addEventListener("input", (ev) => {
      const rgb = parseHex((ev.target as HTMLInputElement).value);
      this.state.applyRecolor(i, split ? "left" : "both", rgb);
      this.render();
      this.onEdit();
    });
    (host.querySelector(".right") as HTMLInputElement).addEventListener("input", (ev) => {
      const rgb = parseHex((ev.target as HTMLInputElement).value);
      this.state.applyRecolor(i, "right", rgb);
      this.render();
      this.onEdit();
    });
    (host.querySelector(".twin-toggle") as HTMLButtonElement).addEventListener("click", () => {
      this.state.applyToggleTwin(i);
      this.render();
      this.onEdit();
    });
    (host.querySelector(".delete") as HTMLButtonElement).addEventListener("click", () => {
      if (endpoint) return;
      this.state.applyDelete(i);
      this.selected = Math.max(0, i - 1);
      this.render();
      this.onEdit();
    });
  }

  private renderIssues(): void {
    const host = this.root.querySelector(".spec-issues") as HTMLElement;
    const issues = this.state.issues();
    host.textContent = issues.map((iss) => `${iss.field}: ${iss.message}`).join("; ");
    host.hidden = issues.length === 0;
  }
}
