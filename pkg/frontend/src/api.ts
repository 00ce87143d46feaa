/** Thin typed client for the service; every displayed number comes from here. */

import type {
  ColormapDoc,
  EvaluateRequest,
  EvaluateResponse,
  FunctionSchema,
  ObserverReport,
  PanelName,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly body: unknown = null,
  ) {
    super(message);
  }
}

async function parseError(res: Response): Promise<ApiError> {
  let body: unknown = null;
  let message = `${res.status} ${res.statusText}`;
  try {
    body = await res.json();
    const maybe = body as { error?: string };
    if (maybe && typeof maybe.error === "string") message = maybe.error;
  } catch {
    /* non-JSON error body; keep the status line */
  }
  return new ApiError(res.status, message, body);
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!res.ok) throw await parseError(res);
    if (res.status === 204) return undefined as T;
    return (await res.json()) as T;
  }

  private json(method: string, payload: unknown): RequestInit {
    return {
      method,
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    };
  }

  functions(): Promise<{ functions: FunctionSchema[] }> {
    return this.request("/functions");
  }

  listColormaps(): Promise<{ colormaps: string[] }> {
    return this.request("/colormaps");
  }

  getColormap(name: string): Promise<ColormapDoc> {
    return this.request(`/colormaps/${encodeURIComponent(name)}`);
  }

  putColormap(name: string, doc: ColormapDoc): Promise<{ name: string; sha256: string }> {
    return this.request(`/colormaps/${encodeURIComponent(name)}`, this.json("PUT", doc));
  }

  deleteColormap(name: string): Promise<void> {
    return this.request(`/colormaps/${encodeURIComponent(name)}`, { method: "DELETE" });
  }

  /** Degenerate evaluations come back as HTTP 422 with a full body; surface
   * them as a normal response so the caller can show the flag. */
  async evaluate(req: EvaluateRequest, signal?: AbortSignal): Promise<EvaluateResponse> {
    const res = await this.fetchImpl(`${this.baseUrl}/evaluate`, {
      ...this.json("POST", req),
      signal,
    });
    if (res.status === 422) {
      const body = (await res.json()) as EvaluateResponse;
      if (body && body.bundle_id) return body;
    }
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as EvaluateResponse;
  }

  panelUrl(bundleId: string, panel: PanelName): string {
    return `${this.baseUrl}/panels/${bundleId}/${panel}`;
  }

  async panelBytes(bundleId: string, panel: PanelName): Promise<ArrayBuffer> {
    const res = await this.fetchImpl(this.panelUrl(bundleId, panel));
    if (!res.ok) throw await parseError(res);
    return res.arrayBuffer();
  }

  observe(bundleId: string, i: number, j: number): Promise<ObserverReport> {
    return this.request(`/observe/${bundleId}?i=${i}&j=${j}`);
  }
}
