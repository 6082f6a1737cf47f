/**
 * Figure assembly: sweep and trajectory CSVs in, SVG strings out.
 *
 * The numbers are taken from the CSVs verbatim; nothing is recomputed here.
 */

import { distinct, parseCsv, Table } from "./csv.js";
import { renderChart, Series } from "./svg.js";

const PALETTE = [
  "#4361ee",
  "#d62828",
  "#2d6a4f",
  "#f77f00",
  "#7209b7",
  "#0096c7",
  "#9d4edd",
  "#bc6c25",
  "#343a40",
];

const SWEEP_COLUMNS = ["eps", "loss_numeric", "bound_formula"];

function sortedByEps(table: Table): Record<string, number>[] {
  return [...table.rows].sort((a, b) => a.eps - b.eps);
}

function epsLabel(eps: number): string {
  return `eps = ${eps}`;
}

/** Fig 2a: one state trajectory per eps value, linear axes. */
export function buildFig2a(csvText: string, file: string): string {
  const table = parseCsv(csvText, ["eps", "t", "x"], file);
  const epsValues = distinct(table, "eps");
  const series: Series[] = epsValues.map((eps, i) => {
    const rows = table.rows.filter((r) => r.eps === eps);
    return {
      x: rows.map((r) => r.t),
      y: rows.map((r) => r.x),
      color: PALETTE[i % PALETTE.length],
      label: epsLabel(eps),
      width: 1.2,
    };
  });
  return renderChart({
    title: "Closed-loop trajectories under the oscillatory candidate",
    xLabel: "t",
    yLabel: "x(t)",
    series,
  });
}

/** Fig 2b: loss and bound vs eps for both candidate families, log-x. */
export function buildFig2b(
  v1Text: string,
  v2Text: string,
  v1File: string,
  v2File: string,
): string {
  const v1 = sortedByEps(parseCsv(v1Text, SWEEP_COLUMNS, v1File));
  const v2 = sortedByEps(parseCsv(v2Text, SWEEP_COLUMNS, v2File));
  const series: Series[] = [
    {
      x: v1.map((r) => r.eps),
      y: v1.map((r) => r.loss_numeric),
      color: PALETTE[0],
      label: "v1 loss",
    },
    {
      x: v2.map((r) => r.eps),
      y: v2.map((r) => r.loss_numeric),
      color: PALETTE[1],
      label: "v2 loss",
    },
    {
      x: v1.map((r) => r.eps),
      y: v1.map((r) => r.bound_formula),
      color: PALETTE[0],
      label: "v1 bound",
      dash: "6 4",
    },
    {
      x: v2.map((r) => r.eps),
      y: v2.map((r) => r.bound_formula),
      color: PALETTE[1],
      label: "v2 bound",
      dash: "6 4",
    },
  ];
  return renderChart({
    title: "Performance gap vs eps for the two candidate families",
    xLabel: "eps",
    yLabel: "performance gap",
    xScale: "log",
    series,
  });
}

/** Fig 2c: log-log loss vs eps with the linear-in-eps bound overlaid. */
export function buildFig2c(csvText: string, file: string): string {
  const rows = sortedByEps(parseCsv(csvText, SWEEP_COLUMNS, file));
  const series: Series[] = [
    {
      x: rows.map((r) => r.eps),
      y: rows.map((r) => r.loss_numeric),
      color: PALETTE[0],
      label: "loss",
    },
    {
      x: rows.map((r) => r.eps),
      y: rows.map((r) => r.bound_formula),
      color: PALETTE[1],
      label: "bound",
      dash: "6 4",
    },
  ];
  return renderChart({
    title: "Performance gap and bound for the tilted candidate",
    xLabel: "eps",
    yLabel: "performance gap",
    xScale: "log",
    yScale: "log",
    series,
  });
}
