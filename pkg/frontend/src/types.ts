/** Wire types for the /v1 JSON API. One interface per request or response
 * document; field names match the JSON exactly so responses can be used
 * without mapping layers. */

export type StageName =
  | "want_to_leave"
  | "at_border"
  | "processing"
  | "sheltered"
  | "relocated"
  | "self_settled";

export const STAGES: readonly StageName[] = [
  "want_to_leave",
  "at_border",
  "processing",
  "sheltered",
  "relocated",
  "self_settled",
];

export interface ScenarioParams {
  latent_demand: number;
  arrival_rate: number;
  registration_capacity: number;
  special_needs_fraction: number;
  extra_shelter_requests: number;
  relocation_capacity: number;
  shelter_capacity?: number | null;
  horizon: number;
}

/** Parameters the UI exposes as sliders; the rest (horizon, shelter
 * capacity) are plain inputs. */
export const SLIDER_PARAMS = [
  "latent_demand",
  "arrival_rate",
  "registration_capacity",
  "special_needs_fraction",
  "extra_shelter_requests",
  "relocation_capacity",
] as const;

export type SliderParam = (typeof SLIDER_PARAMS)[number];

export interface TriggerRule {
  rule_id: string;
  metric: StageName;
  threshold: number;
  label?: string;
}

export interface SimulateRequest {
  params: ScenarioParams;
  initial?: Partial<Record<StageName, number>>;
  rules?: TriggerRule[];
}

export interface FlowDoc {
  day: number;
  source: StageName;
  dest: StageName;
  amount: number;
}

export interface TraceDoc {
  days: number[];
  occupancy: Record<StageName, number[]>;
  flows: FlowDoc[];
}

export interface OverflowDoc {
  day: number;
  peak_exceedance: number;
}

export interface BottleneckDoc {
  stage: StageName;
  growth_per_day: number;
}

export interface TriggerFiringDoc {
  rule_id: string;
  day: number;
}

export interface SimulateResponse {
  trace: TraceDoc;
  overflow: OverflowDoc | null;
  bottlenecks: BottleneckDoc[];
  triggers: TriggerFiringDoc[];
}

export interface SensitivityRequest {
  base: ScenarioParams;
  param: string;
  grid: number[];
  snapshot_day: number;
  initial?: Partial<Record<StageName, number>>;
}

export interface SensitivityCurveDoc {
  value: number;
  sheltered: number[];
}

export interface SnapshotPointDoc {
  value: number;
  sheltered: number;
}

export interface SensitivityResponse {
  param: string;
  series: SensitivityCurveDoc[];
  snapshot: {
    day: number;
    points: SnapshotPointDoc[];
  };
}

export interface ForecastResponse {
  run_id: string;
  dates: string[];
  truth: (number | null)[];
  per_model: Record<string, number[]>;
  weights: Record<string, number>;
  point: number[];
  lower: number[];
  upper: number[];
  level: number;
}

export type MaskFlag = "observed" | "filled" | "missing";

export interface IndicatorSeriesDoc {
  id: string;
  start: string | null;
  values: (number | null)[];
  mask: MaskFlag[];
  degenerate: boolean;
}

export interface IndicatorsResponse {
  window: { start: string; end: string };
  series: IndicatorSeriesDoc[];
}

export interface SliderRange {
  min: number;
  max: number;
  step: number;
  default: number;
}

export interface ScenarioDocument {
  scenario_id: string;
  name: string;
  params: ScenarioParams;
  initial: Partial<Record<StageName, number>>;
  ranges: Record<string, SliderRange>;
  created: string;
}

export interface ScenarioListResponse {
  scenarios: ScenarioDocument[];
}

export interface RunResponse extends SimulateResponse {
  scenario_id: string;
  run_id: string;
}

export interface TrainMetricsRow {
  model: string;
  cv_mse: number | null;
  test_rmse: number;
  test_mae: number;
  weight: number | null;
}

export interface TrainResponse {
  run_id: string;
  metrics: TrainMetricsRow[];
  weights: Record<string, number>;
}

export interface ApiErrorDetail {
  loc: (string | number)[];
  msg: string;
  type: string;
}
