/** Wiring between slider gestures and the simulate endpoint.
 *
 * Contract: a burst of slider movements (one gesture) issues exactly one
 * /simulate call, 250 ms after the last movement, carrying the final
 * slider values. Responses superseded by a newer request are discarded,
 * so charts never repaint with stale data. On an API error the view gets
 * a banner and keeps its previous charts.
 */

import type { SimulateResponse, ScenarioDocument, ScenarioParams, SliderParam, TriggerRule } from "./types.js";
import { DEFAULT_DEBOUNCE_MS, debounce } from "./debounce.js";
import type { Debounced } from "./debounce.js";
import { RequestGate, applySlider, makeSliders, paramsFromSliders } from "./state.js";
import type { SliderControl } from "./state.js";

export interface SimulateApi {
  simulate(body: {
    params: ScenarioParams;
    initial?: Partial<Record<string, number>>;
    rules?: TriggerRule[];
  }): Promise<SimulateResponse>;
}

export interface SimulateView {
  /** repaint every simulate-tab chart from a fresh response */
  renderCharts(resp: SimulateResponse, params: ScenarioParams): void;
  showError(message: string): void;
}

export class SimulateController {
  private controls: SliderControl[];
  private base: ScenarioParams;
  private readonly initial: ScenarioDocument["initial"];
  private rules: TriggerRule[];
  private readonly gate = new RequestGate();
  private readonly debounced: Debounced<[]>;
  private last: SimulateResponse | null = null;

  constructor(
    private readonly api: SimulateApi,
    private readonly view: SimulateView,
    doc: ScenarioDocument,
    rules: TriggerRule[] = [],
    waitMs: number = DEFAULT_DEBOUNCE_MS,
  ) {
    this.controls = makeSliders(doc);
    this.base = { ...doc.params };
    this.initial = { ...doc.initial };
    this.rules = rules;
    this.debounced = debounce(() => void this.fire(), waitMs);
  }

  sliders(): readonly SliderControl[] {
    return this.controls;
  }

  params(): ScenarioParams {
    return paramsFromSliders(this.base, this.controls);
  }

  lastResponse(): SimulateResponse | null {
    return this.last;
  }

  /** one slider movement; part of a gesture until 250 ms of quiet */
  onSliderInput(id: SliderParam, rawValue: number): void {
    this.controls = applySlider(this.controls, id, rawValue);
    this.debounced();
  }

  /** non-slider inputs (horizon, shelter capacity) share the debounce */
  onBaseChange(patch: Partial<ScenarioParams>): void {
    this.base = { ...this.base, ...patch };
    this.debounced();
  }

  setRules(rules: TriggerRule[]): void {
    this.rules = rules;
    this.debounced();
  }

  /** run immediately (initial page load, explicit refresh) */
  refresh(): Promise<void> {
    this.debounced.cancel();
    return this.fire();
  }

  private async fire(): Promise<void> {
    const requestId = this.gate.issue();
    const params = this.params();
    try {
      const resp = await this.api.simulate({
        params,
        initial: this.initial,
        rules: this.rules,
      });
      if (!this.gate.settle(requestId)) return;
      this.last = resp;
      this.view.renderCharts(resp, params);
    } catch (err) {
      if (!this.gate.settle(requestId)) return;
      this.view.showError(err instanceof Error ? err.message : String(err));
    }
  }
}
