/** Golden API fixtures: request/response pairs recorded from the live
 * service (scripts/export_ui_fixtures.py in the repository root). The
 * rendering tests treat these as ground truth, so regenerate them after
 * any response-shape change instead of editing by hand. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type {
  ForecastResponse,
  IndicatorsResponse,
  ScenarioDocument,
  SensitivityRequest,
  SensitivityResponse,
  SimulateRequest,
  SimulateResponse,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf8")) as T;
}

export const simulateFixture = load<{
  request: SimulateRequest;
  response: SimulateResponse;
}>("simulate.json");

export const sensitivityFixture = load<{
  request: SensitivityRequest;
  response: SensitivityResponse;
}>("sensitivity.json");

export const forecastFixture = load<{ url: string; response: ForecastResponse }>(
  "forecast_latest.json",
);

export const indicatorsFixture = load<{ url: string; response: IndicatorsResponse }>(
  "indicators.json",
);

export const scenarioFixture = load<{ url: string; response: ScenarioDocument }>(
  "scenario_default.json",
);

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
