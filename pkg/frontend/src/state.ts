/** Client-side view state: slider controls bound to server-provided
 * ranges, snapshot-day clamping, request staleness tracking, and the
 * URL-encoded shareable scenario parameters.
 *
 * Invariants enforced here:
 * - a slider's current value always lies in [min, max] snapped to step,
 *   including values arriving from deep links;
 * - the snapshot day never exceeds the horizon;
 * - a response is only applied if no newer request has been issued since.
 */

import type { ScenarioDocument, ScenarioParams, SliderParam, SliderRange } from "./types.js";
import { SLIDER_PARAMS } from "./types.js";

export interface SliderControl {
  id: SliderParam;
  range: SliderRange;
  value: number;
}

function decimalsOf(x: number): number {
  const text = String(x);
  if (text.includes("e") || text.includes("E")) {
    // steps like 1e-7 are not used by the service ranges; fall back to a
    // precision that covers them anyway
    return 12;
  }
  const dot = text.indexOf(".");
  return dot === -1 ? 0 : text.length - dot - 1;
}

/** Clamp into [min, max], then snap to the nearest multiple of step
 * counted from min. Snapping uses fixed-point rounding at the step's own
 * precision so 37 * 0.01 comes back as 0.37, not 0.37000000000000005. */
export function snapToRange(value: number, range: SliderRange): number {
  if (!Number.isFinite(value)) return range.default;
  const clamped = Math.min(range.max, Math.max(range.min, value));
  const steps = Math.round((clamped - range.min) / range.step);
  const snapped = range.min + steps * range.step;
  const places = Math.max(decimalsOf(range.step), decimalsOf(range.min));
  const cleaned = Number(snapped.toFixed(places));
  return Math.min(range.max, Math.max(range.min, cleaned));
}

/** Build the slider set for a scenario: one control per slider-backed
 * parameter with a range in the document, current value taken from the
 * scenario's own params (snapped, so the invariant holds even if the
 * stored params sit off-grid). */
export function makeSliders(doc: ScenarioDocument): SliderControl[] {
  const controls: SliderControl[] = [];
  for (const id of SLIDER_PARAMS) {
    const range = doc.ranges[id];
    if (range === undefined) continue;
    controls.push({ id, range, value: snapToRange(doc.params[id], range) });
  }
  return controls;
}

/** Return a new control list with one slider moved (snapped). */
export function applySlider(
  controls: SliderControl[],
  id: SliderParam,
  rawValue: number,
): SliderControl[] {
  return controls.map((c) =>
    c.id === id ? { ...c, value: snapToRange(rawValue, c.range) } : c,
  );
}

/** Merge slider values into a base parameter set. Non-slider fields
 * (horizon, shelter capacity) pass through from the base. */
export function paramsFromSliders(
  base: ScenarioParams,
  controls: SliderControl[],
): ScenarioParams {
  const merged = { ...base };
  for (const control of controls) merged[control.id] = control.value;
  return merged;
}

export type TabName = "simulate" | "sensitivity" | "forecast" | "indicators";

export const TABS: readonly TabName[] = ["simulate", "sensitivity", "forecast", "indicators"];

export interface ViewState {
  tab: TabName;
  sweepParam: SliderParam;
  snapshotDay: number;
  /** last successful response per tab, kept so an API error can leave
   * the previous chart on screen */
  cache: Partial<Record<TabName, unknown>>;
}

export function initialViewState(): ViewState {
  return { tab: "simulate", sweepParam: "relocation_capacity", snapshotDay: 0, cache: {} };
}

/** snapshot day is a day index into a trace of length horizon + 1 */
export function clampSnapshotDay(day: number, horizon: number): number {
  if (!Number.isFinite(day)) return 0;
  return Math.min(horizon, Math.max(0, Math.round(day)));
}

/** Monotone counter distinguishing the newest in-flight request from
 * superseded ones. A response may only be applied when `settle` returns
 * true for the id it was issued with. */
export class RequestGate {
  private issued = 0;

  issue(): number {
    this.issued += 1;
    return this.issued;
  }

  settle(id: number): boolean {
    return id === this.issued;
  }

  inFlightId(): number {
    return this.issued;
  }
}

const SHARE_KEYS = [...SLIDER_PARAMS, "shelter_capacity", "horizon"] as const;

/** Encode scenario parameters as a query string for shareable what-if
 * links. An unlimited shelter (null) encodes as an empty value so the
 * link does not silently fall back to the scenario's own capacity. */
export function encodeShareParams(params: ScenarioParams): string {
  const query = new URLSearchParams();
  for (const key of SHARE_KEYS) {
    const value = params[key];
    if (value === undefined) continue;
    query.set(key, value === null ? "" : String(value));
  }
  return query.toString();
}

/** Decode a deep link against a scenario document. Slider-backed values
 * are snapped into their server-provided ranges, the horizon is clamped
 * to the service bounds, unknown keys are ignored, and anything absent
 * falls back to the document's own params. */
export function decodeShareParams(queryString: string, doc: ScenarioDocument): ScenarioParams {
  const query = new URLSearchParams(queryString);
  const params: ScenarioParams = { ...doc.params };
  for (const id of SLIDER_PARAMS) {
    const text = query.get(id);
    const range = doc.ranges[id];
    if (text === null || range === undefined) continue;
    params[id] = snapToRange(Number(text), range);
  }
  const shelter = query.get("shelter_capacity");
  if (shelter !== null) {
    if (shelter === "") {
      params.shelter_capacity = null;
    } else {
      const value = Number(shelter);
      params.shelter_capacity = Number.isFinite(value) && value >= 0 ? value : null;
    }
  }
  const horizon = query.get("horizon");
  if (horizon !== null) {
    const value = Math.round(Number(horizon));
    if (Number.isFinite(value)) params.horizon = Math.min(3650, Math.max(1, value));
  }
  return params;
}
