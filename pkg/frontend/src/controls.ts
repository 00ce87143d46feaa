/** Test-function and analysis controls, driven by the service catalog. */

import type { EditorState } from "./state.js";
import type { FunctionSchema, TestSelection } from "./types.js";

const METRICS = ["lab", "din99", "de94", "ciede2000"];
const NORMALIZATIONS = ["minmax", "blackwhite", "custom:10"];
const AGGREGATIONS = ["max", "avg", "median"];

export class Controls {
  readonly root: HTMLElement;
  private schemas: FunctionSchema[] = [];

  constructor(
    private readonly state: EditorState,
    private readonly onChange: () => void,
  ) {
    this.root = document.createElement("form");
    this.root.className = "controls";
    this.root.addEventListener("submit", (ev) => ev.preventDefault());
  }

  setCatalog(schemas: FunctionSchema[]): void {
    this.schemas = schemas;
    this.render();
  }

  private schema(): FunctionSchema | undefined {
    return this.schemas.find((s) => s.id === this.state.test.function);
  }

  private render(): void {
    const test = this.state.test;
    this.root.innerHTML = `
      <label>test function
        <select name="function">
          ${this.schemas
            .map((s) => `<option value="${s.id}" ${s.id === test.function ? "selected" : ""}>${s.id}</option>`)
            .join("")}
        </select>
      </label>
      <span class="fn-summary">${this.schema()?.summary ?? ""}</span>
      <div class="params"></div>
      <label>size <input name="width" type="number" value="${test.resolution[0]}" min="2" max="2048">
        x <input name="height" type="number" value="${test.resolution[1]}" min="2" max="2048"></label>
      <label>seed <input name="seed" type="number" value="${test.seed}" min="0"></label>
      <label>metric
        <select name="metric">${METRICS.map((m) => `<option ${m === this.state.metric ? "selected" : ""}>${m}</option>`).join("")}</select>
      </label>
      <label>normalization
        <select name="normalization">${NORMALIZATIONS.map((n) => `<option ${n === this.state.normalization ? "selected" : ""}>${n}</option>`).join("")}</select>
      </label>
      <label>aggregation
        <select name="aggregation">${AGGREGATIONS.map((a) => `<option ${a === this.state.aggregation ? "selected" : ""}>${a}</option>`).join("")}</select>
      </label>
    `;
    this.renderParams();
    this.root.querySelector("[name=function]")?.addEventListener("change", (ev) => {
      const id = (ev.target as HTMLSelectElement).value;
      this.state.setTest({ ...this.state.test, function: id, params: {} });
      this.render();
      this.onChange();
    });
    for (const name of ["width", "height", "seed", "metric", "normalization", "aggregation"]) {
      this.root.querySelector(`[name=${name}]`)?.addEventListener("change", () => this.commit());
    }
  }

  private renderParams(): void {
    const host = this.root.querySelector(".params") as HTMLElement;
    const schema = this.schema();
    if (!schema) return;
    host.innerHTML = schema.params
      .map((p) => {
        const current = this.state.test.params[p.name] ?? p.default ?? "";
        if (p.kind === "enum" && p.choices) {
          const opts = p.choices
            .map((c) => `<option ${c === current ? "selected" : ""}>${c}</option>`)
            .join("");
          return `<label title="${p.doc}">${p.name} <select data-param="${p.name}">${opts}</select></label>`;
        }
        const required = p.required ? "required" : "";
        return `<label title="${p.doc}">${p.name}${p.required ? "*" : ""}
          <input data-param="${p.name}" value="${current}" ${required}></label>`;
      })
      .join("");
    for (const input of host.querySelectorAll<HTMLElement>("[data-param]")) {
      input.addEventListener("change", () => this.commit());
    }
  }

  /** Read the form back into the editor state. */
  private commit(): void {
    const params: Record<string, unknown> = {};
    for (const input of this.root.querySelectorAll<HTMLInputElement>("[data-param]")) {
      const value = input.value.trim();
      if (value !== "") params[input.dataset.param as string] = value;
    }
    const width = Number((this.root.querySelector("[name=width]") as HTMLInputElement).value);
    const height = Number((this.root.querySelector("[name=height]") as HTMLInputElement).value);
    const seed = Number((this.root.querySelector("[name=seed]") as HTMLInputElement).value);
    const test: TestSelection = {
      function: (this.root.querySelector("[name=function]") as HTMLSelectElement).value,
      params,
      resolution: [width, height],
      seed,
      noise: this.state.test.noise ?? null,
    };
    this.state.setTest(test);
    this.state.setAnalysis(
      (this.root.querySelector("[name=metric]") as HTMLSelectElement).value,
      (this.root.querySelector("[name=normalization]") as HTMLSelectElement).value,
      (this.root.querySelector("[name=aggregation]") as HTMLSelectElement).value,
    );
    this.onChange();
  }
}
