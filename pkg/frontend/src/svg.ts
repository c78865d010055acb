/** Projection and path helpers for the SVG layer. Purely geometric:
 * these map already-built chart models onto pixel coordinates and never
 * touch domain values beyond the affine transform. */

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const scale = ((value: number) =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

/** Extent of a list of finite numbers, padded so a flat series still has
 * a visible band of space around it. */
export function extent(values: number[], padFraction = 0.05): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) return [0, 1];
  if (lo === hi) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * padFraction;
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * padFraction;
  return [lo - pad, hi + pad];
}

export interface XY {
  x: number;
  y: number;
}

const fmt = (v: number) => (Number.isInteger(v) ? String(v) : v.toFixed(2));

/** Polyline path: M x0 y0 L x1 y1 ... One command per point. */
export function polylinePath(points: XY[], xScale: Scale, yScale: Scale): string {
  return points
    .map((p, i) => `${i === 0 ? "M" : "L"}${fmt(xScale(p.x))} ${fmt(yScale(p.y))}`)
    .join(" ");
}

/** Like polylinePath but split into segments wherever y is null, so
 * missing stretches render as gaps instead of bridged lines. */
export function gappedPath(
  points: { x: number; y: number | null }[],
  xScale: Scale,
  yScale: Scale,
): string {
  const parts: string[] = [];
  let penDown = false;
  for (const p of points) {
    if (p.y === null) {
      penDown = false;
      continue;
    }
    parts.push(`${penDown ? "L" : "M"}${fmt(xScale(p.x))} ${fmt(yScale(p.y))}`);
    penDown = true;
  }
  return parts.join(" ");
}

/** Closed region between two aligned series: upper edge left-to-right,
 * lower edge back, then Z. */
export function bandPath(
  xs: number[],
  lower: number[],
  upper: number[],
  xScale: Scale,
  yScale: Scale,
): string {
  if (xs.length === 0) return "";
  const top = xs.map(
    (x, i) => `${i === 0 ? "M" : "L"}${fmt(xScale(x))} ${fmt(yScale(upper[i]!))}`,
  );
  const back = [...xs.keys()]
    .reverse()
    .map((i) => `L${fmt(xScale(xs[i]!))} ${fmt(yScale(lower[i]!))}`);
  return [...top, ...back, "Z"].join(" ");
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
