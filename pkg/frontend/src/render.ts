/** Chart model to SVG markup. Pure string builders so the rendering
 * layer is testable without a DOM.
 *
 * Every rendered series carries its source values in data attributes
 * (JSON, which round-trips doubles exactly): data-values on paths,
 * data-value on markers, data-lower/data-upper on the forecast band.
 * The fidelity tests parse those attributes back out and compare them
 * with the recorded API responses, pinning the no-client-side-math rule
 * all the way through the rendered output.
 */

import type {
  FamilyChartModel,
  ForecastChartModel,
  IndicatorChartModel,
  OccupancyChartModel,
  SeriesModel,
  ShelterChartModel,
  SnapshotChartModel,
} from "./charts.js";
import { bandPath, escapeXml, extent, gappedPath, linearScale, polylinePath } from "./svg.js";
import type { Scale } from "./svg.js";

export interface Viewport {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_VIEWPORT: Viewport = {
  width: 720,
  height: 320,
  margin: { top: 16, right: 16, bottom: 28, left: 56 },
};

export const PALETTE = [
  "#4269d0",
  "#efb118",
  "#ff725c",
  "#6cc5b0",
  "#3ca951",
  "#ff8ab7",
  "#a463f2",
  "#97bbf5",
  "#9c6b4e",
  "#9498a0",
] as const;

export function color(index: number): string {
  return PALETTE[index % PALETTE.length]!;
}

interface Frame {
  x: Scale;
  y: Scale;
  inner: { left: number; right: number; top: number; bottom: number };
}

function frame(vp: Viewport, xDomain: [number, number], yDomain: [number, number]): Frame {
  const left = vp.margin.left;
  const right = vp.width - vp.margin.right;
  const top = vp.margin.top;
  const bottom = vp.height - vp.margin.bottom;
  return {
    x: linearScale(xDomain, [left, right]),
    y: linearScale(yDomain, [bottom, top]),
    inner: { left, right, top, bottom },
  };
}

const fmtTick = (v: number) =>
  Math.abs(v) >= 1000 ? v.toLocaleString("en-US") : Number.isInteger(v) ? String(v) : v.toFixed(2);

function axes(f: Frame, xLabel: string): string {
  const { left, right, top, bottom } = f.inner;
  const [y0, y1] = f.y.domain;
  const [x0, x1] = f.x.domain;
  return [
    `<g class="axes" stroke="#ccc" fill="#666" font-size="11">`,
    `<line x1="${left}" y1="${bottom}" x2="${right}" y2="${bottom}"/>`,
    `<line x1="${left}" y1="${top}" x2="${left}" y2="${bottom}"/>`,
    `<text x="${left - 6}" y="${bottom}" text-anchor="end" stroke="none">${escapeXml(fmtTick(y0))}</text>`,
    `<text x="${left - 6}" y="${top + 10}" text-anchor="end" stroke="none">${escapeXml(fmtTick(y1))}</text>`,
    `<text x="${left}" y="${bottom + 16}" stroke="none">${escapeXml(fmtTick(x0))}</text>`,
    `<text x="${right}" y="${bottom + 16}" text-anchor="end" stroke="none">${escapeXml(fmtTick(x1))}</text>`,
    `<text x="${(left + right) / 2}" y="${bottom + 16}" text-anchor="middle" stroke="none">${escapeXml(xLabel)}</text>`,
    `</g>`,
  ].join("");
}

function openSvg(vp: Viewport, kind: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${vp.width} ${vp.height}" ` +
    `class="chart chart-${kind}" role="img">`
  );
}

function seriesPath(series: SeriesModel, f: Frame, extra = ""): string {
  const values = JSON.stringify(series.points.map((p) => p.y));
  const xs = JSON.stringify(series.points.map((p) => p.x));
  return (
    `<path class="series" data-key="${escapeXml(series.key)}" data-xs='${xs}' ` +
    `data-values='${values}'${extra} fill="none" stroke="${color(series.colorIndex)}" ` +
    `stroke-width="1.5" d="${polylinePath(series.points, f.x, f.y)}"/>`
  );
}

function legend(entries: { label: string; colorIndex: number }[], f: Frame): string {
  const items = entries.map((e, i) => {
    const y = f.inner.top + 14 * i;
    return (
      `<rect x="${f.inner.right - 150}" y="${y}" width="10" height="10" fill="${color(e.colorIndex)}"/>` +
      `<text x="${f.inner.right - 136}" y="${y + 9}" font-size="11" fill="#333">${escapeXml(e.label)}</text>`
    );
  });
  return `<g class="legend">${items.join("")}</g>`;
}

function allYs(series: SeriesModel[]): number[] {
  return series.flatMap((s) => s.points.map((p) => p.y));
}

export function renderOccupancyChart(
  model: OccupancyChartModel,
  vp: Viewport = DEFAULT_VIEWPORT,
): string {
  const xs = model.series[0]?.points.map((p) => p.x) ?? [0, 1];
  const f = frame(vp, extent(xs, 0), extent(allYs(model.series)));
  return [
    openSvg(vp, "occupancy"),
    axes(f, "day"),
    ...model.series.map((s) => seriesPath(s, f)),
    legend(model.series, f),
    `</svg>`,
  ].join("");
}

export function renderShelterChart(
  model: ShelterChartModel,
  vp: Viewport = DEFAULT_VIEWPORT,
): string {
  const xs = model.series.points.map((p) => p.x);
  const ys = model.series.points.map((p) => p.y);
  const yDomain = extent(model.capacity === null ? ys : [...ys, model.capacity]);
  const f = frame(vp, extent(xs, 0), yDomain);
  const parts: string[] = [openSvg(vp, "shelter"), axes(f, "day")];

  // shaded exceedance region: the part of the curve above the threshold
  if (model.capacity !== null && model.exceedance.length > 0) {
    const ex = model.exceedance;
    const capRow = ex.map(() => model.capacity!);
    parts.push(
      `<path class="exceedance" data-days='${JSON.stringify(ex.map((p) => p.x))}' ` +
        `data-values='${JSON.stringify(ex.map((p) => p.y))}' fill="${color(2)}" ` +
        `fill-opacity="0.25" stroke="none" ` +
        `d="${bandPath(ex.map((p) => p.x), capRow, ex.map((p) => p.y), f.x, f.y)}"/>`,
    );
  }
  if (model.capacity !== null) {
    const y = f.y(model.capacity);
    parts.push(
      `<line class="capacity" data-capacity="${model.capacity}" x1="${f.inner.left}" ` +
        `y1="${y.toFixed(2)}" x2="${f.inner.right}" y2="${y.toFixed(2)}" ` +
        `stroke="#888" stroke-dasharray="4 3"/>`,
    );
  }
  parts.push(seriesPath(model.series, f));
  if (model.overflow !== null) {
    const x = f.x(model.overflow.day);
    parts.push(
      `<g class="overflow" data-day="${model.overflow.day}" ` +
        `data-peak="${model.overflow.peakExceedance}">` +
        `<line x1="${x.toFixed(2)}" y1="${f.inner.top}" x2="${x.toFixed(2)}" ` +
        `y2="${f.inner.bottom}" stroke="${color(2)}" stroke-dasharray="2 2"/>` +
        `<text x="${(x + 4).toFixed(2)}" y="${f.inner.top + 10}" font-size="11" ` +
        `fill="${color(2)}">overflow d${model.overflow.day}</text></g>`,
    );
  }
  for (const trigger of model.triggers) {
    const x = f.x(trigger.day);
    const y = f.y(trigger.value);
    parts.push(
      `<g class="trigger" data-rule="${escapeXml(trigger.ruleId)}" data-day="${trigger.day}" ` +
        `data-value="${trigger.value}">` +
        `<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="4" fill="${color(1)}"/>` +
        `<text x="${(x + 6).toFixed(2)}" y="${(y - 6).toFixed(2)}" font-size="11" ` +
        `fill="${color(1)}">${escapeXml(trigger.ruleId)} d${trigger.day}</text></g>`,
    );
  }
  parts.push(`</svg>`);
  return parts.join("");
}

export function renderFamilyChart(
  model: FamilyChartModel,
  vp: Viewport = DEFAULT_VIEWPORT,
): string {
  const xs = model.series[0]?.points.map((p) => p.x) ?? [0, 1];
  const f = frame(vp, extent(xs, 0), extent(allYs(model.series)));
  return [
    openSvg(vp, "family"),
    axes(f, "day"),
    ...model.series.map((s) => seriesPath(s, f)),
    legend(model.series, f),
    `</svg>`,
  ].join("");
}

export function renderSnapshotChart(
  model: SnapshotChartModel,
  vp: Viewport = DEFAULT_VIEWPORT,
): string {
  const xs = model.points.map((p) => p.x);
  const ys = model.points.map((p) => p.y);
  const f = frame(vp, extent(xs), extent(ys));
  const line: SeriesModel = {
    key: `snapshot:${model.param}`,
    label: model.param,
    points: model.points,
    colorIndex: 0,
  };
  const markers = model.points.map((p, i) => {
    return (
      `<circle class="snapshot-point" data-x="${p.x}" data-value="${p.y}" ` +
      `cx="${f.x(p.x).toFixed(2)}" cy="${f.y(p.y).toFixed(2)}" r="4" ` +
      `fill="${color(model.colorIndexes[i] ?? 0)}"/>`
    );
  });
  return [
    openSvg(vp, "snapshot"),
    axes(f, model.param),
    `<path class="series" data-key="${escapeXml(line.key)}" fill="none" stroke="#999" ` +
      `d="${polylinePath(model.points, f.x, f.y)}"/>`,
    ...markers,
    `<text x="${f.inner.left + 4}" y="${f.inner.top + 10}" font-size="11" fill="#333">` +
      `sheltered at day ${model.day}</text>`,
    `</svg>`,
  ].join("");
}

export function renderForecastChart(
  model: ForecastChartModel,
  vp: Viewport = DEFAULT_VIEWPORT,
): string {
  const shown = [model.truth, model.ensemble, ...model.perModel.filter((m) => !m.hidden)];
  const ys = [...allYs(shown), ...model.band.lower, ...model.band.upper];
  const f = frame(vp, [0, Math.max(1, model.dates.length - 1)], extent(ys));
  const bandXs = model.band.dates.map((_, i) => i);
  const parts = [
    openSvg(vp, "forecast"),
    axes(f, "date"),
    `<path class="band" data-level="${model.level}" data-lower='${JSON.stringify(model.band.lower)}' ` +
      `data-upper='${JSON.stringify(model.band.upper)}' fill="${color(1)}" fill-opacity="0.2" ` +
      `stroke="none" d="${bandPath(bandXs, model.band.lower, model.band.upper, f.x, f.y)}"/>`,
  ];
  for (const series of shown) {
    parts.push(
      seriesPath(
        { ...series, label: series.label },
        f,
        series.key === "truth" ? ` data-role="truth"` : series.key === "ensemble" ? ` data-role="ensemble"` : ` data-role="model"`,
      ),
    );
  }
  parts.push(legend(shown.map((s) => ({ label: s.label, colorIndex: s.colorIndex })), f));
  const first = model.dates[0] ?? "";
  const last = model.dates[model.dates.length - 1] ?? "";
  parts.push(
    `<text x="${f.inner.left}" y="${vp.height - 4}" font-size="10" fill="#666">` +
      `${escapeXml(first)} .. ${escapeXml(last)}</text>`,
    `</svg>`,
  );
  return parts.join("");
}

export function renderIndicatorChart(
  model: IndicatorChartModel,
  vp: Viewport = DEFAULT_VIEWPORT,
): string {
  const xs = model.points.map((p) => p.x);
  const f = frame(vp, extent(xs, 0), [0, 1]);
  const parts = [openSvg(vp, "indicator"), axes(f, model.start ?? "")];
  parts.push(
    `<path class="series" data-key="${escapeXml(model.id)}" ` +
      `data-values='${JSON.stringify(model.points.map((p) => p.y))}' fill="none" ` +
      `stroke="${color(model.colorIndex)}" stroke-width="1.5" ` +
      `d="${gappedPath(model.points, f.x, f.y)}"/>`,
  );
  for (const p of model.points) {
    if (p.y === null) continue;
    const shape =
      p.flag === "observed"
        ? `<circle class="pt flag-observed" data-x="${p.x}" data-value="${p.y}" ` +
          `cx="${f.x(p.x).toFixed(2)}" cy="${f.y(p.y).toFixed(2)}" r="2.5" ` +
          `fill="${color(model.colorIndex)}"/>`
        : `<circle class="pt flag-filled" data-x="${p.x}" data-value="${p.y}" ` +
          `cx="${f.x(p.x).toFixed(2)}" cy="${f.y(p.y).toFixed(2)}" r="2.5" ` +
          `fill="none" stroke="${color(model.colorIndex)}"/>`;
    parts.push(shape);
  }
  parts.push(
    `<text x="${f.inner.left + 4}" y="${f.inner.top + 10}" font-size="11" fill="#333">` +
      `${escapeXml(model.id)}${model.degenerate ? " (constant)" : ""}</text>`,
    `</svg>`,
  );
  return parts.join("");
}
