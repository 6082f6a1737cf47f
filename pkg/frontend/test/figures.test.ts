import { readFileSync } from "node:fs";
import path from "node:path";
import { describe, expect, it } from "vitest";
import { EmptyDataError, MissingColumnError } from "../src/csv.js";
import { buildFig2a, buildFig2b, buildFig2c } from "../src/figures.js";

const FIXTURES = path.join(import.meta.dirname, "fixtures");

function fixture(name: string): string {
  return readFileSync(path.join(FIXTURES, name), "utf-8");
}

describe("buildFig2a", () => {
  const svg = buildFig2a(fixture("fig2a.csv"), "fig2a.csv");

  it("is an svg document", () => {
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
  });

  it("draws one polyline per eps value", () => {
    const polylines = svg.match(/<polyline /g) ?? [];
    expect(polylines.length).toBe(9);
  });

  it("uses linear tick labels (no powers of ten below 1e-3)", () => {
    expect(svg).toContain(">t</text>");
    expect(svg).toContain(">x(t)</text>");
  });
});

describe("buildFig2b", () => {
  const svg = buildFig2b(
    fixture("fig2b_v1.csv"),
    fixture("fig2b_v2.csv"),
    "fig2b_v1.csv",
    "fig2b_v2.csv",
  );

  it("has two loss curves and two dashed bound curves", () => {
    const polylines = svg.match(/<polyline /g) ?? [];
    expect(polylines.length).toBe(4);
    const dashed = svg.match(/<polyline [^>]*stroke-dasharray/g) ?? [];
    expect(dashed.length).toBe(2);
  });

  it("labels the eps axis with log ticks", () => {
    // default eps sweeps span 1e-4 .. 1e-1, so decade labels appear
    expect(svg).toContain(">1e-4</text>");
    expect(svg).toContain(">0.1</text>");
  });
});

describe("buildFig2c", () => {
  const svg = buildFig2c(fixture("fig2c.csv"), "fig2c.csv");

  it("has a loss curve and a dashed bound curve", () => {
    const polylines = svg.match(/<polyline /g) ?? [];
    expect(polylines.length).toBe(2);
    const dashed = svg.match(/<polyline [^>]*stroke-dasharray/g) ?? [];
    expect(dashed.length).toBe(1);
  });

  it("uses log ticks on both axes", () => {
    // eps and loss both span the 0.001 .. 0.1 decades, so each decade
    // label appears once per axis
    const small = svg.match(/>0\.001<\/text>/g) ?? [];
    expect(small.length).toBe(2);
    const mid = svg.match(/>0\.1<\/text>/g) ?? [];
    expect(mid.length).toBe(2);
  });
});

describe("error propagation", () => {
  it("missing column", () => {
    expect(() => buildFig2c("eps,loss_numeric\n0.1,0.01\n", "x.csv"))
      .toThrowError(MissingColumnError);
  });

  it("empty data", () => {
    expect(() => buildFig2a("eps,t,x\n", "x.csv"))
      .toThrowError(EmptyDataError);
  });
});

describe("determinism", () => {
  it("same input yields identical bytes", () => {
    const text = fixture("fig2c.csv");
    const a = buildFig2c(text, "fig2c.csv");
    const b = buildFig2c(text, "fig2c.csv");
    expect(a).toBe(b);
  });
});
