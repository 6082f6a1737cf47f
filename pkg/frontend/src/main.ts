#!/usr/bin/env node
/**
 * make_figures: render the hjbgap reproduction CSVs as SVG images.
 *
 * Usage:
 *   make_figures --csv-dir DIR --out-dir DIR [--figure 2a|2b|2c|all]
 *
 * Inputs (produced by `hjbgap repro --figure all --out DIR`):
 *   fig2a.csv                  trajectories (eps, t, x)
 *   fig2b_v1.csv, fig2b_v2.csv sweep records per candidate family
 *   fig2c.csv                  sweep records for the tilted candidate
 *
 * Exit code 0 on success; 1 on missing files, missing columns, or empty
 * data.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import path from "node:path";
import { pathToFileURL } from "node:url";
import { buildFig2a, buildFig2b, buildFig2c } from "./figures.js";

const FIGURES = ["2a", "2b", "2c"] as const;
type Figure = (typeof FIGURES)[number];

interface Args {
  csvDir: string;
  outDir: string;
  figures: Figure[];
}

function usage(): never {
  console.error(
    "usage: make_figures --csv-dir DIR --out-dir DIR [--figure 2a|2b|2c|all]",
  );
  process.exit(1);
}

export function parseArgs(argv: string[]): Args {
  let csvDir: string | undefined;
  let outDir: string | undefined;
  let figure = "all";
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) usage();
      return argv[i];
    };
    if (arg === "--csv-dir") csvDir = next();
    else if (arg === "--out-dir") outDir = next();
    else if (arg === "--figure") figure = next();
    else usage();
  }
  if (!csvDir || !outDir) usage();
  if (figure !== "all" && !FIGURES.includes(figure as Figure)) usage();
  const figures =
    figure === "all" ? [...FIGURES] : [figure as Figure];
  return { csvDir, outDir, figures };
}

function readCsv(dir: string, name: string): string {
  return readFileSync(path.join(dir, name), "utf-8");
}

export function makeFigure(fig: Figure, csvDir: string): string {
  if (fig === "2a") {
    return buildFig2a(readCsv(csvDir, "fig2a.csv"), "fig2a.csv");
  }
  if (fig === "2b") {
    return buildFig2b(
      readCsv(csvDir, "fig2b_v1.csv"),
      readCsv(csvDir, "fig2b_v2.csv"),
      "fig2b_v1.csv",
      "fig2b_v2.csv",
    );
  }
  return buildFig2c(readCsv(csvDir, "fig2c.csv"), "fig2c.csv");
}

export function main(argv: string[]): number {
  const args = parseArgs(argv);
  mkdirSync(args.outDir, { recursive: true });
  for (const fig of args.figures) {
    let svg: string;
    try {
      svg = makeFigure(fig, args.csvDir);
    } catch (err) {
      console.error(`fig${fig}: ${(err as Error).message}`);
      return 1;
    }
    const out = path.join(args.outDir, `fig${fig}.svg`);
    writeFileSync(out, svg);
    console.log(`wrote ${out}`);
  }
  return 0;
}

if (process.argv[1] &&
    import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
