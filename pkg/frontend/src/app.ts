/** Browser entry point: binds the static page skeleton to the API
 * client, controller, and renderers. All logic worth testing lives in
 * the imported modules; this file is DOM plumbing only. */

import { ApiClient, ApiError } from "./api.js";
import {
  forecastChart,
  indicatorCharts,
  occupancyChart,
  sensitivityCharts,
  shelterChart,
} from "./charts.js";
import {
  renderFamilyChart,
  renderForecastChart,
  renderIndicatorChart,
  renderOccupancyChart,
  renderShelterChart,
  renderSnapshotChart,
} from "./render.js";
import { SimulateController } from "./controller.js";
import {
  RequestGate,
  TABS,
  clampSnapshotDay,
  decodeShareParams,
  encodeShareParams,
  snapToRange,
} from "./state.js";
import type { TabName } from "./state.js";
import type {
  ForecastResponse,
  ScenarioDocument,
  ScenarioParams,
  SimulateResponse,
  SliderParam,
  TriggerRule,
} from "./types.js";
import { SLIDER_PARAMS } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function banner(id: string, message: string | null): void {
  const node = el<HTMLDivElement>(id);
  node.textContent = message ?? "";
  node.style.display = message === null ? "none" : "block";
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `API error ${err.status}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}

function switchTab(tab: TabName): void {
  for (const name of TABS) {
    el(`tab-${name}`).style.display = name === tab ? "block" : "none";
    el(`nav-${name}`).classList.toggle("active", name === tab);
  }
}

function summaryText(resp: SimulateResponse): string {
  const necks = resp.bottlenecks
    .map((b) => `${b.stage} +${b.growth_per_day.toFixed(1)}/day`)
    .join(", ");
  const overflow =
    resp.overflow === null
      ? "no shelter overflow"
      : `shelter overflow from day ${resp.overflow.day} (peak +${resp.overflow.peak_exceedance.toFixed(0)})`;
  const triggers = resp.triggers.map((t) => `${t.rule_id} fired day ${t.day}`).join(", ");
  return [necks === "" ? "no growing stages" : `growing: ${necks}`, overflow, triggers]
    .filter((part) => part !== "")
    .join(" | ");
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  let doc: ScenarioDocument;
  try {
    doc = await api.scenario("default");
  } catch (err) {
    banner("simulate-banner", describeError(err));
    return;
  }
  doc = { ...doc, params: decodeShareParams(window.location.search, doc) };

  const view = {
    renderCharts(resp: SimulateResponse, params: ScenarioParams): void {
      banner("simulate-banner", null);
      el("occupancy-chart").innerHTML = renderOccupancyChart(occupancyChart(resp));
      el("shelter-chart").innerHTML = renderShelterChart(
        shelterChart(resp, params.shelter_capacity ?? null),
      );
      el("simulate-summary").textContent = summaryText(resp);
      window.history.replaceState(null, "", `?${encodeShareParams(params)}`);
    },
    showError(message: string): void {
      banner("simulate-banner", message);
    },
  };

  const rules = (): TriggerRule[] => {
    const raw = el<HTMLInputElement>("trigger-threshold").value.trim();
    if (raw === "") return [];
    const threshold = Number(raw);
    if (!Number.isFinite(threshold) || threshold < 0) return [];
    return [{ rule_id: "shelter-alert", metric: "sheltered", threshold }];
  };

  const controller = new SimulateController(api, view, doc, rules());

  // slider rows from the server-provided ranges
  const sliderBox = el("sliders");
  for (const control of controller.sliders()) {
    const row = document.createElement("label");
    row.className = "slider-row";
    const title = document.createElement("span");
    title.textContent = control.id.replace(/_/g, " ");
    const input = document.createElement("input");
    input.type = "range";
    input.min = String(control.range.min);
    input.max = String(control.range.max);
    input.step = String(control.range.step);
    input.value = String(control.value);
    const output = document.createElement("output");
    output.textContent = String(control.value);
    input.addEventListener("input", () => {
      const snapped = snapToRange(input.valueAsNumber, control.range);
      output.textContent = String(snapped);
      controller.onSliderInput(control.id, input.valueAsNumber);
    });
    row.append(title, input, output);
    sliderBox.append(row);
  }

  const horizonInput = el<HTMLInputElement>("horizon");
  horizonInput.value = String(doc.params.horizon);
  horizonInput.addEventListener("change", () => {
    const horizon = Math.min(3650, Math.max(1, Math.round(horizonInput.valueAsNumber) || 30));
    horizonInput.value = String(horizon);
    controller.onBaseChange({ horizon });
  });

  const shelterInput = el<HTMLInputElement>("shelter-capacity");
  shelterInput.value =
    doc.params.shelter_capacity === null || doc.params.shelter_capacity === undefined
      ? ""
      : String(doc.params.shelter_capacity);
  shelterInput.addEventListener("change", () => {
    const raw = shelterInput.value.trim();
    const value = raw === "" ? null : Math.max(0, Number(raw) || 0);
    controller.onBaseChange({ shelter_capacity: value });
  });

  el<HTMLInputElement>("trigger-threshold").addEventListener("change", () => {
    controller.setRules(rules());
  });

  // sensitivity tab
  const paramSelect = el<HTMLSelectElement>("sweep-param");
  for (const name of SLIDER_PARAMS) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name.replace(/_/g, " ");
    paramSelect.append(option);
  }
  paramSelect.value = "relocation_capacity";

  const defaultGrid = (param: SliderParam): string => {
    const range = doc.ranges[param];
    if (range === undefined) return "";
    const points = [0, 0.25, 0.5, 0.75, 1].map((f) =>
      snapToRange(range.min + f * (range.max - range.min), range),
    );
    return [...new Set(points)].join(", ");
  };
  const gridInput = el<HTMLInputElement>("sweep-grid");
  gridInput.value = defaultGrid("relocation_capacity");
  paramSelect.addEventListener("change", () => {
    gridInput.value = defaultGrid(paramSelect.value as SliderParam);
  });

  const sweepGate = new RequestGate();
  el("sweep-run").addEventListener("click", () => {
    const grid = gridInput.value
      .split(",")
      .map((piece) => Number(piece.trim()))
      .filter((v) => Number.isFinite(v));
    if (grid.length === 0) {
      banner("sensitivity-banner", "grid must be a comma-separated list of numbers");
      return;
    }
    const params = controller.params();
    const snapshotDay = clampSnapshotDay(
      el<HTMLInputElement>("snapshot-day").valueAsNumber,
      params.horizon,
    );
    el<HTMLInputElement>("snapshot-day").value = String(snapshotDay);
    const requestId = sweepGate.issue();
    api
      .sensitivity({
        base: params,
        param: paramSelect.value,
        grid,
        snapshot_day: snapshotDay,
        initial: doc.initial,
      })
      .then((resp) => {
        if (!sweepGate.settle(requestId)) return;
        banner("sensitivity-banner", null);
        const models = sensitivityCharts(resp);
        el("family-chart").innerHTML = renderFamilyChart(models.family);
        el("snapshot-chart").innerHTML = renderSnapshotChart(models.snapshot);
      })
      .catch((err) => {
        if (!sweepGate.settle(requestId)) return;
        banner("sensitivity-banner", describeError(err));
      });
  });

  // forecast tab
  const visibleModels = new Set<string>();
  let lastForecast: ForecastResponse | null = null;
  const paintForecast = (): void => {
    if (lastForecast === null) return;
    el("forecast-chart").innerHTML = renderForecastChart(
      forecastChart(lastForecast, visibleModels),
    );
  };
  const loadForecast = (): void => {
    const requestId = forecastGate.issue();
    api
      .forecastLatest()
      .then((resp) => {
        if (!forecastGate.settle(requestId)) return;
        banner("forecast-banner", null);
        lastForecast = resp;
        const toggles = el("model-toggles");
        toggles.innerHTML = "";
        for (const name of Object.keys(resp.per_model)) {
          const label = document.createElement("label");
          const box = document.createElement("input");
          box.type = "checkbox";
          box.checked = visibleModels.has(name);
          box.addEventListener("change", () => {
            if (box.checked) visibleModels.add(name);
            else visibleModels.delete(name);
            paintForecast();
          });
          label.append(box, ` ${name.replace(/_/g, " ")}`);
          toggles.append(label);
        }
        paintForecast();
      })
      .catch((err) => {
        if (!forecastGate.settle(requestId)) return;
        if (err instanceof ApiError && err.status === 404) {
          banner(
            "forecast-banner",
            "no trained ensemble yet: ingest a panel and POST /v1/forecast/train (or run the train CLI)",
          );
        } else {
          banner("forecast-banner", describeError(err));
        }
      });
  };
  const forecastGate = new RequestGate();
  el("forecast-reload").addEventListener("click", loadForecast);

  // indicators tab
  const indicatorGate = new RequestGate();
  el("indicators-load").addEventListener("click", () => {
    const start = el<HTMLInputElement>("window-start").value.trim();
    const end = el<HTMLInputElement>("window-end").value.trim();
    if (start === "" || end === "") {
      banner("indicators-banner", "enter a start and end date (YYYY-MM-DD)");
      return;
    }
    const requestId = indicatorGate.issue();
    api
      .indicators(start, end)
      .then((resp) => {
        if (!indicatorGate.settle(requestId)) return;
        banner("indicators-banner", null);
        const box = el("indicator-charts");
        box.innerHTML = "";
        if (resp.series.every((s) => s.values.length === 0)) {
          banner("indicators-banner", "window does not overlap the ingested panel");
          return;
        }
        for (const model of indicatorCharts(resp)) {
          const holder = document.createElement("div");
          holder.innerHTML = renderIndicatorChart(model);
          box.append(holder);
        }
      })
      .catch((err) => {
        if (!indicatorGate.settle(requestId)) return;
        banner("indicators-banner", describeError(err));
      });
  });

  // tab navigation; forecast loads lazily on first visit
  let forecastLoaded = false;
  for (const name of TABS) {
    el(`nav-${name}`).addEventListener("click", () => {
      switchTab(name);
      if (name === "forecast" && !forecastLoaded) {
        forecastLoaded = true;
        loadForecast();
      }
    });
  }
  switchTab("simulate");

  await controller.refresh();
}

void boot();
