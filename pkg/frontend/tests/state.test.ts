import { describe, expect, it } from "vitest";

import {
  RequestGate,
  applySlider,
  clampSnapshotDay,
  decodeShareParams,
  encodeShareParams,
  makeSliders,
  paramsFromSliders,
  snapToRange,
} from "../src/state.js";
import type { ScenarioDocument, SliderRange } from "../src/types.js";
import { SLIDER_PARAMS } from "../src/types.js";
import { scenarioFixture } from "./fixtures.js";

const doc = (): ScenarioDocument => structuredClone(scenarioFixture.response);

describe("snapToRange", () => {
  const coarse: SliderRange = { min: 0, max: 2000, step: 10, default: 500 };
  const fine: SliderRange = { min: 0, max: 1, step: 0.01, default: 0.3 };

  it("clamps below and above the range", () => {
    expect(snapToRange(-50, coarse)).toBe(0);
    expect(snapToRange(99999, coarse)).toBe(2000);
  });

  it("snaps to the nearest step", () => {
    expect(snapToRange(333, coarse)).toBe(330);
    expect(snapToRange(337, coarse)).toBe(340);
    expect(snapToRange(335, coarse)).toBe(340);
  });

  it("keeps fractional steps free of float noise", () => {
    expect(snapToRange(0.37000000000000005, fine)).toBe(0.37);
    expect(snapToRange(0.123, fine)).toBe(0.12);
    expect(snapToRange(1.2, fine)).toBe(1);
  });

  it("falls back to the default for non-finite input", () => {
    expect(snapToRange(Number.NaN, coarse)).toBe(500);
    expect(snapToRange(Infinity, fine)).toBe(0.3);
  });

  it("always lands inside the range on a step multiple", () => {
    // deterministic LCG so failures are reproducible
    let seed = 12345;
    const next = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };
    for (const range of [coarse, fine]) {
      for (let i = 0; i < 500; i++) {
        const raw = (next() - 0.25) * (range.max - range.min) * 2;
        const v = snapToRange(raw, range);
        expect(v).toBeGreaterThanOrEqual(range.min);
        expect(v).toBeLessThanOrEqual(range.max);
        const steps = (v - range.min) / range.step;
        expect(Math.abs(steps - Math.round(steps))).toBeLessThan(1e-9);
      }
    }
  });
});

describe("makeSliders", () => {
  it("builds one control per slider parameter with the scenario's values", () => {
    const controls = makeSliders(doc());
    expect(controls.map((c) => c.id)).toStrictEqual([...SLIDER_PARAMS]);
    for (const control of controls) {
      expect(control.value).toBe(doc().params[control.id]);
      expect(control.range).toStrictEqual(doc().ranges[control.id]);
    }
  });

  it("skips parameters the document has no range for", () => {
    const trimmed = doc();
    delete trimmed.ranges["latent_demand"];
    const controls = makeSliders(trimmed);
    expect(controls.map((c) => c.id)).not.toContain("latent_demand");
    expect(controls).toHaveLength(SLIDER_PARAMS.length - 1);
  });

  it("snaps stored params that sit off-grid", () => {
    const off = doc();
    off.params.arrival_rate = 503.7;
    const controls = makeSliders(off);
    expect(controls.find((c) => c.id === "arrival_rate")!.value).toBe(500);
  });
});

describe("applySlider", () => {
  it("moves one control and leaves the rest untouched", () => {
    const before = makeSliders(doc());
    const after = applySlider(before, "arrival_rate", 712);
    expect(after.find((c) => c.id === "arrival_rate")!.value).toBe(710);
    for (const control of after) {
      if (control.id !== "arrival_rate") {
        expect(control.value).toBe(before.find((c) => c.id === control.id)!.value);
      }
    }
    // input list is not mutated
    expect(before.find((c) => c.id === "arrival_rate")!.value).toBe(500);
  });
});

describe("paramsFromSliders", () => {
  it("merges slider values over the base and keeps non-slider fields", () => {
    const base = doc().params;
    const controls = applySlider(makeSliders(doc()), "relocation_capacity", 640);
    const merged = paramsFromSliders(base, controls);
    expect(merged.relocation_capacity).toBe(640);
    expect(merged.horizon).toBe(base.horizon);
    expect(merged.shelter_capacity).toBe(base.shelter_capacity);
    expect(merged.arrival_rate).toBe(base.arrival_rate);
  });
});

describe("clampSnapshotDay", () => {
  it("keeps the day within 0..horizon", () => {
    expect(clampSnapshotDay(-3, 30)).toBe(0);
    expect(clampSnapshotDay(12, 30)).toBe(12);
    expect(clampSnapshotDay(45, 30)).toBe(30);
    expect(clampSnapshotDay(12.6, 30)).toBe(13);
    expect(clampSnapshotDay(Number.NaN, 30)).toBe(0);
  });
});

describe("RequestGate", () => {
  it("settles only the newest request", () => {
    const gate = new RequestGate();
    const a = gate.issue();
    const b = gate.issue();
    expect(gate.settle(a)).toBe(false);
    expect(gate.settle(b)).toBe(true);
  });

  it("a later issue supersedes an already-settled id", () => {
    const gate = new RequestGate();
    const a = gate.issue();
    expect(gate.settle(a)).toBe(true);
    const b = gate.issue();
    expect(gate.settle(a)).toBe(false);
    expect(gate.settle(b)).toBe(true);
  });
});

describe("share links", () => {
  it("round-trips on-grid parameters", () => {
    const params = { ...doc().params, arrival_rate: 710, special_needs_fraction: 0.37 };
    const decoded = decodeShareParams(encodeShareParams(params), doc());
    expect(decoded).toStrictEqual(params);
  });

  it("round-trips an unlimited shelter", () => {
    const params = { ...doc().params, shelter_capacity: null };
    const encoded = encodeShareParams(params);
    expect(encoded).toContain("shelter_capacity=");
    expect(decodeShareParams(encoded, doc()).shelter_capacity).toBeNull();
  });

  it("clamps out-of-range deep-link values into the server ranges", () => {
    const decoded = decodeShareParams(
      "arrival_rate=99999&special_needs_fraction=0.377&relocation_capacity=-5",
      doc(),
    );
    expect(decoded.arrival_rate).toBe(2000);
    expect(decoded.special_needs_fraction).toBe(0.38);
    expect(decoded.relocation_capacity).toBe(0);
  });

  it("clamps the horizon to service bounds", () => {
    expect(decodeShareParams("horizon=0", doc()).horizon).toBe(1);
    expect(decodeShareParams("horizon=99999", doc()).horizon).toBe(3650);
  });

  it("ignores unknown keys and falls back to the document for absent ones", () => {
    const decoded = decodeShareParams("bogus=1&arrivalrate=7", doc());
    expect(decoded).toStrictEqual(doc().params);
  });
});
