/** App wiring: editor state <-> service, with at most one in-flight
 * evaluation (newer requests cancel older ones). */

import { ApiClient, ApiError } from "./api.js";
import { Controls } from "./controls.js";
import { KeyEditor } from "./keyEditor.js";
import { PanelViewer } from "./panelViewer.js";
import { DEFAULT_GRAY, EditorState } from "./state.js";

const api = new ApiClient("");
const state = new EditorState();

const statusLine = document.getElementById("status") as HTMLElement;
const statsHost = document.getElementById("stats") as HTMLElement;
const evaluateBtn = document.getElementById("evaluate") as HTMLButtonElement;
const specNameInput = document.getElementById("spec-name") as HTMLInputElement;

let inflight: AbortController | null = null;

function setStatus(text: string, isError = false): void {
  statusLine.textContent = text;
  statusLine.classList.toggle("error", isError);
}

function renderStats(): void {
  const bundle = state.lastBundle;
  if (!bundle) {
    statsHost.textContent = "";
    return;
  }
  const rows = Object.entries(bundle.statistics)
    .map(
      ([name, s]) => `<tr><td>${name}</td>
        <td>${s.min.toPrecision(4)}</td><td>${s.max.toPrecision(4)}</td>
        <td>${s.mean.toPrecision(4)}</td><td>${s.median.toPrecision(4)}</td>
        <td>${s.stddev.toPrecision(4)}</td></tr>`,
    )
    .join("");
  statsHost.innerHTML = `
    <table>
      <thead><tr><th>field</th><th>min</th><th>max</th><th>mean</th><th>median</th><th>stddev</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
    ${bundle.degenerate ? '<p class="error">degenerate normalization: differences are constant</p>' : ""}
  `;
}

function markStale(): void {
  panels.markStale();
  evaluateBtn.disabled = state.issues().length > 0;
  setStatus(state.stale ? "edited — re-evaluate to refresh panels" : "");
}

const editor = new KeyEditor(state, markStale);
const controls = new Controls(state, markStale);
const panels = new PanelViewer(api, state);

async function pushSpec(): Promise<void> {
  state.specName = specNameInput.value.trim() || "working";
  await api.putColormap(state.specName, state.spec);
}

async function runEvaluation(): Promise<void> {
  inflight?.abort();
  const controller = new AbortController();
  inflight = controller;
  try {
    setStatus("evaluating…");
    await pushSpec();
    const response = await api.evaluate(state.buildRequest(), controller.signal);
    if (controller.signal.aborted) return;
    state.applyEvaluation(response);
    panels.showBundle(response.bundle_id, response.field.width, response.field.height);
    renderStats();
    setStatus(
      response.degenerate
        ? "bundle ready (degenerate normalization)"
        : `bundle ${response.bundle_id}${response.cached ? " (cached)" : ""}`,
    );
  } catch (err) {
    if (controller.signal.aborted) return;
    const message = err instanceof ApiError ? err.message : String(err);
    setStatus(message, true);
  } finally {
    if (inflight === controller) inflight = null;
  }
}

async function boot(): Promise<void> {
  document.getElementById("editor-slot")?.appendChild(editor.root);
  document.getElementById("controls-slot")?.appendChild(controls.root);
  document.getElementById("panels-slot")?.appendChild(panels.root);
  evaluateBtn.addEventListener("click", () => void runEvaluation());
  specNameInput.value = state.specName;

  try {
    const catalog = await api.functions();
    controls.setCatalog(catalog.functions);
    const existing = await api.listColormaps();
    if (existing.colormaps.includes(state.specName)) {
      state.loadSpec(state.specName, await api.getColormap(state.specName));
    } else {
      state.loadSpec(state.specName, DEFAULT_GRAY);
    }
    editor.render();
    setStatus("ready — evaluate to render panels");
  } catch (err) {
    setStatus(`cannot reach service: ${err instanceof Error ? err.message : err}`, true);
  }
}

void boot();
