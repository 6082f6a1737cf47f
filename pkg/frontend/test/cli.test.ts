import { execFileSync, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import path from "node:path";
import { describe, expect, it } from "vitest";

const ROOT = path.join(import.meta.dirname, "..");
const ENTRY = path.join(ROOT, "dist", "main.js");
const FIXTURES = path.join(import.meta.dirname, "fixtures");

function tmp(): string {
  return mkdtempSync(path.join(tmpdir(), "figures-"));
}

function runCli(args: string[]) {
  return spawnSync("node", [ENTRY, ...args], { encoding: "utf-8" });
}

describe("make_figures CLI", () => {
  it("renders all three figures with exit code 0", () => {
    const out = tmp();
    const res = runCli(["--csv-dir", FIXTURES, "--out-dir", out]);
    expect(res.status).toBe(0);
    for (const fig of ["2a", "2b", "2c"]) {
      const svg = readFileSync(path.join(out, `fig${fig}.svg`), "utf-8");
      expect(svg).toContain("</svg>");
    }
  });

  it("renders a single figure on request", () => {
    const out = tmp();
    const res = runCli(["--csv-dir", FIXTURES, "--out-dir", out,
                        "--figure", "2c"]);
    expect(res.status).toBe(0);
    expect(res.stdout).toContain("fig2c.svg");
    expect(res.stdout).not.toContain("fig2a.svg");
  });

  it("reruns are byte-identical across fresh processes", () => {
    const outA = tmp();
    const outB = tmp();
    execFileSync("node", [ENTRY, "--csv-dir", FIXTURES, "--out-dir", outA]);
    execFileSync("node", [ENTRY, "--csv-dir", FIXTURES, "--out-dir", outB]);
    for (const fig of ["2a", "2b", "2c"]) {
      const a = readFileSync(path.join(outA, `fig${fig}.svg`));
      const b = readFileSync(path.join(outB, `fig${fig}.svg`));
      expect(a.equals(b)).toBe(true);
    }
  });

  it("exits nonzero on a missing column", () => {
    const dir = tmp();
    writeFileSync(path.join(dir, "fig2c.csv"), "eps,loss_numeric\n0.1,0.01\n");
    const res = runCli(["--csv-dir", dir, "--out-dir", tmp(),
                        "--figure", "2c"]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("bound_formula");
  });

  it("exits nonzero on empty data", () => {
    const dir = tmp();
    writeFileSync(path.join(dir, "fig2c.csv"), "");
    const res = runCli(["--csv-dir", dir, "--out-dir", tmp(),
                        "--figure", "2c"]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("no data rows");
  });

  it("exits nonzero on a missing file", () => {
    const res = runCli(["--csv-dir", tmp(), "--out-dir", tmp(),
                        "--figure", "2a"]);
    expect(res.status).toBe(1);
  });

  it("rejects bad arguments with usage text", () => {
    const res = runCli(["--nope"]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("usage:");
  });
});

describe("end to end against the primary CLI", () => {
  it("consumes freshly generated trajectory CSVs", () => {
    const csvDir = tmp();
    const gen = spawnSync(
      "python3",
      ["-m", "hjbgap.cli", "repro", "--figure", "2a",
       "--out", csvDir, "--steps", "200"],
      { encoding: "utf-8" },
    );
    expect(gen.status).toBe(0);
    const out = tmp();
    const res = runCli(["--csv-dir", csvDir, "--out-dir", out,
                        "--figure", "2a"]);
    expect(res.status).toBe(0);
    const svg = readFileSync(path.join(out, "fig2a.svg"), "utf-8");
    expect((svg.match(/<polyline /g) ?? []).length).toBe(9);
  }, 120_000);
});
