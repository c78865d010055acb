/** Rendering fidelity at the model layer: every value a chart model
 * carries must equal the corresponding field of the recorded API
 * response. No tolerance anywhere; the UI does no numeric work. */

import { describe, expect, it } from "vitest";

import {
  forecastChart,
  indicatorCharts,
  occupancyChart,
  sensitivityCharts,
  shelterChart,
} from "../src/charts.js";
import { STAGES } from "../src/types.js";
import {
  forecastFixture,
  indicatorsFixture,
  sensitivityFixture,
  simulateFixture,
} from "./fixtures.js";

describe("occupancyChart", () => {
  const resp = simulateFixture.response;
  const model = occupancyChart(resp);

  it("draws one curve per stage with the response values verbatim", () => {
    expect(model.series.map((s) => s.key)).toStrictEqual([...STAGES]);
    for (const series of model.series) {
      expect(series.points.map((p) => p.y)).toStrictEqual(
        resp.trace.occupancy[series.key as (typeof STAGES)[number]],
      );
      expect(series.points.map((p) => p.x)).toStrictEqual(resp.trace.days);
    }
  });

  it("assigns stable palette indices by stage order", () => {
    expect(model.series.map((s) => s.colorIndex)).toStrictEqual([0, 1, 2, 3, 4, 5]);
  });
});

describe("shelterChart", () => {
  const resp = simulateFixture.response;
  const capacity = simulateFixture.request.params.shelter_capacity ?? null;
  const model = shelterChart(resp, capacity);

  it("plots the sheltered series verbatim", () => {
    expect(model.series.points.map((p) => p.y)).toStrictEqual(resp.trace.occupancy.sheltered);
    expect(model.series.points.map((p) => p.x)).toStrictEqual(resp.trace.days);
  });

  it("takes the threshold from the request parameters", () => {
    expect(model.capacity).toBe(capacity);
  });

  it("passes the overflow report through unchanged", () => {
    expect(model.overflow).toStrictEqual({
      day: resp.overflow!.day,
      peakExceedance: resp.overflow!.peak_exceedance,
    });
  });

  it("marks exactly the days whose returned value exceeds the threshold", () => {
    const sheltered = resp.trace.occupancy.sheltered;
    const expected = resp.trace.days.filter((d) => sheltered[d]! > capacity!);
    expect(model.exceedance.map((p) => p.x)).toStrictEqual(expected);
    for (const point of model.exceedance) {
      expect(point.y).toBe(sheltered[point.x]);
    }
  });

  it("places trigger markers at the returned day on the returned series", () => {
    expect(model.triggers).toHaveLength(resp.triggers.length);
    for (const [i, marker] of model.triggers.entries()) {
      expect(marker.ruleId).toBe(resp.triggers[i]!.rule_id);
      expect(marker.day).toBe(resp.triggers[i]!.day);
      expect(marker.value).toBe(resp.trace.occupancy.sheltered[marker.day]);
    }
  });

  it("has no threshold artifacts when capacity is unlimited", () => {
    const unlimited = shelterChart(resp, null);
    expect(unlimited.capacity).toBeNull();
    expect(unlimited.exceedance).toStrictEqual([]);
    // overflow/triggers still come from the response, not the threshold
    expect(unlimited.overflow).toStrictEqual(model.overflow);
  });
});

describe("sensitivityCharts", () => {
  const resp = sensitivityFixture.response;
  const { family, snapshot } = sensitivityCharts(resp);

  it("keys family curves by grid value with values verbatim", () => {
    expect(family.param).toBe(resp.param);
    expect(family.series.map((s) => s.key)).toStrictEqual(
      resp.series.map((c) => String(c.value)),
    );
    for (const [i, series] of family.series.entries()) {
      expect(series.points.map((p) => p.y)).toStrictEqual(resp.series[i]!.sheltered);
      expect(series.points.map((p) => p.x)).toStrictEqual(
        resp.series[i]!.sheltered.map((_, day) => day),
      );
    }
  });

  it("builds the snapshot from the response points verbatim", () => {
    expect(snapshot.day).toBe(resp.snapshot.day);
    expect(snapshot.points.map((p) => p.x)).toStrictEqual(
      resp.snapshot.points.map((p) => p.value),
    );
    expect(snapshot.points.map((p) => p.y)).toStrictEqual(
      resp.snapshot.points.map((p) => p.sheltered),
    );
  });

  it("shares one color scale between the two views", () => {
    expect(snapshot.colorIndexes).toStrictEqual(family.series.map((s) => s.colorIndex));
  });
});

describe("forecastChart", () => {
  const resp = forecastFixture.response;

  it("uses the returned band arrays by reference: no recomputation possible", () => {
    const model = forecastChart(resp);
    expect(model.band.lower).toBe(resp.lower);
    expect(model.band.upper).toBe(resp.upper);
    expect(model.band.dates).toBe(resp.dates);
  });

  it("plots the ensemble point series verbatim", () => {
    const model = forecastChart(resp);
    expect(model.ensemble.points.map((p) => p.y)).toStrictEqual(resp.point);
  });

  it("draws truth only where truth exists", () => {
    const model = forecastChart(resp);
    const defined = resp.truth
      .map((v, i) => [v, i] as const)
      .filter(([v]) => v !== null);
    expect(model.truth.points.map((p) => p.y)).toStrictEqual(defined.map(([v]) => v));
    expect(model.truth.points.map((p) => p.x)).toStrictEqual(defined.map(([, i]) => i));
  });

  it("extends the band beyond the end of truth into the future region", () => {
    const model = forecastChart(resp);
    expect(resp.truth[resp.truth.length - 1]).toBeNull();
    expect(model.band.lower.length).toBe(resp.dates.length);
    expect(model.truth.points.length).toBeLessThan(resp.dates.length);
  });

  it("hides every per-model line by default", () => {
    const model = forecastChart(resp);
    expect(model.perModel.length).toBeGreaterThan(0);
    expect(model.perModel.every((m) => m.hidden)).toBe(true);
  });

  it("shows exactly the toggled models, values verbatim", () => {
    const model = forecastChart(resp, new Set(["ridge", "gradient_boosting"]));
    const shown = model.perModel.filter((m) => !m.hidden).map((m) => m.key);
    expect(shown.sort()).toStrictEqual(["gradient_boosting", "ridge"]);
    for (const series of model.perModel) {
      expect(series.points.map((p) => p.y)).toStrictEqual(resp.per_model[series.key]);
    }
  });

  it("passes the interval level through", () => {
    expect(forecastChart(resp).level).toBe(resp.level);
  });
});

describe("indicatorCharts", () => {
  const resp = indicatorsFixture.response;
  const models = indicatorCharts(resp);

  it("builds one chart per source with values and mask verbatim", () => {
    expect(models.map((m) => m.id)).toStrictEqual(resp.series.map((s) => s.id));
    for (const [i, model] of models.entries()) {
      expect(model.points.map((p) => p.y)).toStrictEqual(resp.series[i]!.values);
      expect(model.points.map((p) => p.flag)).toStrictEqual(resp.series[i]!.mask);
      expect(model.start).toBe(resp.series[i]!.start);
      expect(model.degenerate).toBe(resp.series[i]!.degenerate);
    }
  });

  it("the fixture exercises all three mask flags", () => {
    const flags = new Set(models.flatMap((m) => m.points.map((p) => p.flag)));
    expect(flags).toStrictEqual(new Set(["observed", "filled", "missing"]));
  });
});
