/** Chart models: plain data structures sitting between an API response
 * and the SVG layer.
 *
 * The builders copy response fields verbatim. No value plotted anywhere
 * in the UI is computed client-side; every y, band edge, threshold and
 * marker is a field of the response (or, for trigger markers, a direct
 * lookup into the returned series at the returned day). Tests pin this
 * by deep-comparing the models against recorded responses.
 */

import type {
  ForecastResponse,
  IndicatorSeriesDoc,
  IndicatorsResponse,
  MaskFlag,
  SensitivityResponse,
  SimulateResponse,
  StageName,
} from "./types.js";
import { STAGES } from "./types.js";

export interface SeriesPoint {
  x: number;
  y: number;
}

export interface SeriesModel {
  /** stable identity: stage name, grid value, or model name */
  key: string;
  label: string;
  points: SeriesPoint[];
  /** index into the shared palette; curves keep their color across
   * re-renders because the key-to-index assignment is input order */
  colorIndex: number;
}

export interface OccupancyChartModel {
  kind: "occupancy";
  series: SeriesModel[];
}

/** One curve per pipeline stage, y values straight from trace.occupancy. */
export function occupancyChart(resp: SimulateResponse): OccupancyChartModel {
  const series = STAGES.map((stage, i) => ({
    key: stage,
    label: stage.replace(/_/g, " "),
    points: resp.trace.days.map((day, t) => ({ x: day, y: resp.trace.occupancy[stage][t]! })),
    colorIndex: i,
  }));
  return { kind: "occupancy", series };
}

export interface TriggerMarker {
  ruleId: string;
  day: number;
  /** occupancy of the rule's metric stage on the firing day */
  value: number;
}

export interface ShelterChartModel {
  kind: "shelter";
  series: SeriesModel;
  /** capacity threshold from the request; null = unlimited, no line */
  capacity: number | null;
  /** days where the returned series sits above capacity, values verbatim */
  exceedance: SeriesPoint[];
  overflow: { day: number; peakExceedance: number } | null;
  triggers: TriggerMarker[];
}

/** Shelter view: occupancy curve, capacity threshold, exceedance
 * highlight, and any fired contingency triggers. `capacity` comes from
 * the request parameters since the response does not echo it. Trigger
 * markers read the sheltered series because the UI only offers
 * shelter-metric rules; a marker's value is a lookup, not a computation. */
export function shelterChart(resp: SimulateResponse, capacity: number | null): ShelterChartModel {
  const sheltered = resp.trace.occupancy.sheltered;
  const points = resp.trace.days.map((day, t) => ({ x: day, y: sheltered[t]! }));
  const exceedance =
    capacity === null ? [] : points.filter((p) => p.y > capacity);
  return {
    kind: "shelter",
    series: { key: "sheltered", label: "sheltered", points, colorIndex: 3 },
    capacity,
    exceedance,
    overflow:
      resp.overflow === null
        ? null
        : { day: resp.overflow.day, peakExceedance: resp.overflow.peak_exceedance },
    triggers: resp.triggers.map((t) => ({
      ruleId: t.rule_id,
      day: t.day,
      value: sheltered[t.day]!,
    })),
  };
}

export interface FamilyChartModel {
  kind: "family";
  param: string;
  /** one curve per grid value, keyed by the grid value itself */
  series: SeriesModel[];
}

export interface SnapshotChartModel {
  kind: "snapshot";
  param: string;
  day: number;
  /** x = parameter value, y = sheltered occupancy at the snapshot day */
  points: SeriesPoint[];
  /** same palette indices as the family curves, in the same order */
  colorIndexes: number[];
}

export interface SensitivityChartModels {
  family: FamilyChartModel;
  snapshot: SnapshotChartModel;
}

/** Two linked views over one sweep: the over-time family and the
 * snapshot-day cross-section, sharing a color scale keyed by grid value
 * order so a curve and its snapshot point match up visually. */
export function sensitivityCharts(resp: SensitivityResponse): SensitivityChartModels {
  const family: FamilyChartModel = {
    kind: "family",
    param: resp.param,
    series: resp.series.map((curve, i) => ({
      key: String(curve.value),
      label: `${resp.param} = ${curve.value}`,
      points: curve.sheltered.map((y, day) => ({ x: day, y })),
      colorIndex: i,
    })),
  };
  const snapshot: SnapshotChartModel = {
    kind: "snapshot",
    param: resp.param,
    day: resp.snapshot.day,
    points: resp.snapshot.points.map((p) => ({ x: p.value, y: p.sheltered })),
    colorIndexes: resp.snapshot.points.map((_, i) => i),
  };
  return { family, snapshot };
}

export interface BandModel {
  /** date strings, one per forecast row */
  dates: string[];
  lower: number[];
  upper: number[];
}

export interface DatedSeriesModel {
  key: string;
  label: string;
  /** x = index into dates; points skip rows where the source is null */
  points: SeriesPoint[];
  colorIndex: number;
  hidden: boolean;
}

export interface ForecastChartModel {
  kind: "forecast";
  dates: string[];
  truth: DatedSeriesModel;
  ensemble: DatedSeriesModel;
  band: BandModel;
  /** per-model breakdown, hidden unless toggled on */
  perModel: DatedSeriesModel[];
  level: number;
}

/** Forecast view: truth line where truth exists, ensemble point line,
 * shaded band from the returned lower/upper, and per-model lines that
 * stay hidden unless named in `visibleModels`. */
export function forecastChart(
  resp: ForecastResponse,
  visibleModels: ReadonlySet<string> = new Set(),
): ForecastChartModel {
  const truthPoints: SeriesPoint[] = [];
  resp.truth.forEach((v, i) => {
    if (v !== null) truthPoints.push({ x: i, y: v });
  });
  const modelNames = Object.keys(resp.per_model);
  return {
    kind: "forecast",
    dates: resp.dates,
    truth: { key: "truth", label: "truth", points: truthPoints, colorIndex: 0, hidden: false },
    ensemble: {
      key: "ensemble",
      label: "ensemble",
      points: resp.point.map((y, i) => ({ x: i, y })),
      colorIndex: 1,
      hidden: false,
    },
    band: { dates: resp.dates, lower: resp.lower, upper: resp.upper },
    perModel: modelNames.map((name, i) => ({
      key: name,
      label: name.replace(/_/g, " "),
      points: resp.per_model[name]!.map((y, j) => ({ x: j, y })),
      colorIndex: i + 2,
      hidden: !visibleModels.has(name),
    })),
    level: resp.level,
  };
}

export interface IndicatorPoint {
  /** day offset within the returned slice */
  x: number;
  /** normalized display value; null where the panel has no data */
  y: number | null;
  flag: MaskFlag;
}

export interface IndicatorChartModel {
  kind: "indicator";
  id: string;
  start: string | null;
  points: IndicatorPoint[];
  degenerate: boolean;
  colorIndex: number;
}

function indicatorChart(doc: IndicatorSeriesDoc, colorIndex: number): IndicatorChartModel {
  return {
    kind: "indicator",
    id: doc.id,
    start: doc.start,
    points: doc.values.map((v, i) => ({ x: i, y: v, flag: doc.mask[i]! })),
    degenerate: doc.degenerate,
    colorIndex,
  };
}

/** One small chart per indicator source; values are the normalized
 * series from the response with the observed/filled/missing mask kept
 * per point so gaps and fills render differently. */
export function indicatorCharts(resp: IndicatorsResponse): IndicatorChartModel[] {
  return resp.series.map((doc, i) => indicatorChart(doc, i));
}
