/**
 * Self-contained SVG line-chart builder.
 *
 * Only the features the three figures need: linear and log-10 axes, line
 * series with optional dashing, tick labels, axis titles, and a legend.
 * Output is a pure function of the inputs (fixed styles, fixed number
 * formatting, no timestamps), so identical data yields identical bytes.
 */

export interface Series {
  x: number[];
  y: number[];
  color: string;
  label: string;
  width?: number;
  dash?: string; // stroke-dasharray
}

export interface ChartOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale?: "linear" | "log";
  yScale?: "linear" | "log";
  series: Series[];
  width?: number;
  height?: number;
  legend?: boolean;
}

const MARGIN = { top: 42, right: 24, bottom: 52, left: 72 };

type ScaleKind = "linear" | "log";

interface Scale {
  kind: ScaleKind;
  min: number;
  max: number;
  toPixel: (v: number) => number;
  ticks: number[];
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(0).replace("+", "");
  }
  return Number(v.toPrecision(4)).toString();
}

function px(v: number): string {
  return v.toFixed(2);
}

function linearTicks(min: number, max: number): number[] {
  const span = max - min;
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= 6)!;
  const ticks: number[] = [];
  for (let t = Math.ceil(min / step) * step; t <= max + 1e-12 * span; t += step) {
    ticks.push(Math.abs(t) < 1e-12 * span ? 0 : t);
  }
  return ticks;
}

function logTicks(min: number, max: number): number[] {
  const lo = Math.ceil(Math.log10(min) - 1e-9);
  const hi = Math.floor(Math.log10(max) + 1e-9);
  const ticks: number[] = [];
  for (let e = lo; e <= hi; e += 1) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length >= 2 ? ticks : [min, max];
}

function makeScale(
  kind: ScaleKind,
  values: number[],
  pixelLo: number,
  pixelHi: number,
): Scale {
  const finite = values.filter(
    (v) => Number.isFinite(v) && (kind === "linear" || v > 0),
  );
  if (finite.length === 0) {
    throw new Error("no plottable values for axis");
  }
  let min = Math.min(...finite);
  let max = Math.max(...finite);
  if (kind === "linear") {
    if (min === max) {
      min -= 1;
      max += 1;
    }
    const pad = 0.05 * (max - min);
    min -= pad;
    max += pad;
  } else {
    min /= 1.5;
    max *= 1.5;
  }
  const t = (v: number) =>
    kind === "linear" ? v : Math.log10(v);
  const span = t(max) - t(min);
  const toPixel = (v: number) =>
    pixelLo + ((t(v) - t(min)) / span) * (pixelHi - pixelLo);
  const ticks =
    kind === "linear" ? linearTicks(min, max) : logTicks(min, max);
  return { kind, min, max, toPixel, ticks };
}

export function renderChart(opts: ChartOpts): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const xKind = opts.xScale ?? "linear";
  const yKind = opts.yScale ?? "linear";
  const plotL = MARGIN.left;
  const plotR = width - MARGIN.right;
  const plotT = MARGIN.top;
  const plotB = height - MARGIN.bottom;

  const xs = opts.series.flatMap((s) => s.x);
  const ys = opts.series.flatMap((s) => s.y);
  const xScale = makeScale(xKind, xs, plotL, plotR);
  const yScale = makeScale(yKind, ys, plotB, plotT);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
      `height="${height}" viewBox="0 0 ${width} ${height}" ` +
      `font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="15" ` +
      `fill="#1a1a1a">${opts.title}</text>`,
  );

  // gridlines and ticks
  for (const t of xScale.ticks) {
    const X = px(xScale.toPixel(t));
    parts.push(
      `<line x1="${X}" y1="${plotT}" x2="${X}" y2="${plotB}" ` +
        `stroke="#e0e0e0" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${X}" y="${plotB + 18}" text-anchor="middle" ` +
        `font-size="11" fill="#444444">${fmt(t)}</text>`,
    );
  }
  for (const t of yScale.ticks) {
    const Y = px(yScale.toPixel(t));
    parts.push(
      `<line x1="${plotL}" y1="${Y}" x2="${plotR}" y2="${Y}" ` +
        `stroke="#e0e0e0" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${plotL - 8}" y="${Y}" text-anchor="end" ` +
        `dominant-baseline="middle" font-size="11" ` +
        `fill="#444444">${fmt(t)}</text>`,
    );
  }

  // frame
  parts.push(
    `<rect x="${plotL}" y="${plotT}" width="${plotR - plotL}" ` +
      `height="${plotB - plotT}" fill="none" stroke="#333333" ` +
      `stroke-width="1"/>`,
  );

  // axis titles
  parts.push(
    `<text x="${(plotL + plotR) / 2}" y="${height - 12}" ` +
      `text-anchor="middle" font-size="13" fill="#1a1a1a">` +
      `${opts.xLabel}</text>`,
  );
  parts.push(
    `<text x="18" y="${(plotT + plotB) / 2}" text-anchor="middle" ` +
      `font-size="13" fill="#1a1a1a" ` +
      `transform="rotate(-90 18 ${(plotT + plotB) / 2})">` +
      `${opts.yLabel}</text>`,
  );

  // series
  for (const s of opts.series) {
    const pts: string[] = [];
    for (let i = 0; i < s.x.length; i += 1) {
      const xv = s.x[i];
      const yv = s.y[i];
      if (!Number.isFinite(xv) || !Number.isFinite(yv)) continue;
      if (xKind === "log" && xv <= 0) continue;
      if (yKind === "log" && yv <= 0) continue;
      pts.push(`${px(xScale.toPixel(xv))},${px(yScale.toPixel(yv))}`);
    }
    if (pts.length === 0) continue;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" ` +
        `stroke="${s.color}" stroke-width="${s.width ?? 1.5}"${dash}/>`,
    );
  }

  // legend
  if (opts.legend !== false) {
    let y = plotT + 14;
    for (const s of opts.series) {
      const x0 = plotL + 12;
      const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
      parts.push(
        `<line x1="${x0}" y1="${y - 4}" x2="${x0 + 26}" y2="${y - 4}" ` +
          `stroke="${s.color}" stroke-width="${s.width ?? 1.5}"${dash}/>`,
      );
      parts.push(
        `<text x="${x0 + 32}" y="${y}" font-size="11" ` +
          `fill="#1a1a1a">${s.label}</text>`,
      );
      y += 16;
    }
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
