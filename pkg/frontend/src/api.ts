/** Typed client for the /v1 JSON API.
 *
 * The fetch implementation is injectable so tests can replay golden
 * fixtures without a network; the browser entry point passes nothing and
 * gets the real fetch. Every non-2xx response raises ApiError carrying
 * the parsed detail payload.
 */

import type {
  ApiErrorDetail,
  ForecastResponse,
  IndicatorsResponse,
  RunResponse,
  ScenarioDocument,
  ScenarioListResponse,
  SensitivityRequest,
  SensitivityResponse,
  SimulateRequest,
  SimulateResponse,
  TrainResponse,
  TriggerRule,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly detail: ApiErrorDetail[] | string;

  constructor(status: number, detail: ApiErrorDetail[] | string) {
    super(typeof detail === "string" ? detail : detail.map((d) => d.msg).join("; "));
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let detail: ApiErrorDetail[] | string = `HTTP ${resp.status}`;
  try {
    const body = (await resp.json()) as { detail?: ApiErrorDetail[] | string };
    if (body.detail !== undefined) detail = body.detail;
  } catch {
    // non-JSON error body: keep the status line
  }
  return new ApiError(resp.status, detail);
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  simulate(body: SimulateRequest): Promise<SimulateResponse> {
    return this.post("/v1/simulate", body);
  }

  sensitivity(body: SensitivityRequest): Promise<SensitivityResponse> {
    return this.post("/v1/sensitivity", body);
  }

  forecastLatest(): Promise<ForecastResponse> {
    return this.request("/v1/forecast/latest");
  }

  trainForecast(body: unknown): Promise<TrainResponse> {
    return this.post("/v1/forecast/train", body);
  }

  indicators(start: string, end: string): Promise<IndicatorsResponse> {
    const window = encodeURIComponent(`${start}:${end}`);
    return this.request(`/v1/indicators?window=${window}`);
  }

  listScenarios(): Promise<ScenarioListResponse> {
    return this.request("/v1/scenarios");
  }

  scenario(scenarioId: string): Promise<ScenarioDocument> {
    return this.request(`/v1/scenarios/${encodeURIComponent(scenarioId)}`);
  }

  runScenario(scenarioId: string, rules: TriggerRule[] = []): Promise<RunResponse> {
    return this.post(`/v1/scenarios/${encodeURIComponent(scenarioId)}/run`, { rules });
  }

  getRun(runId: string): Promise<RunResponse> {
    return this.request(`/v1/runs/${encodeURIComponent(runId)}`);
  }
}
