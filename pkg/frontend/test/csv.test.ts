import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { numericColumn, readTable, requireColumns, SchemaError, statRows } from "../src/index.js";

const golden = (name: string) => fileURLToPath(new URL(`./golden/${name}`, import.meta.url));

describe("readTable", () => {
  it("parses an excursion csv", () => {
    const t = readTable(golden("excursion_a.csv"));
    expect(t.columns).toEqual(["t", "e", "z"]);
    expect(t.rows.length).toBe(513);
    expect(t.rows[0].t).toBe(0);
  });

  it("parses a stat report", () => {
    const t = readTable(golden("two-point-scaling.csv"));
    expect(t.columns).toContain("stat");
    expect(t.columns).toContain("value");
    expect(statRows(t, "two_point_mean").length).toBe(5);
  });

  it("rejects a file with no data rows", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const p = join(dir, "empty.csv");
    writeFileSync(p, "a,b\n");
    expect(() => readTable(p)).toThrow(/no data rows/);
  });
});

describe("schema checks", () => {
  it("names the missing column", () => {
    const t = readTable(golden("excursion_a.csv"));
    expect(() => requireColumns(t, ["t", "weight"])).toThrow('missing column "weight"');
    expect(() => numericColumn(t, "nope")).toThrow('missing column "nope"');
  });

  it("rejects non-numeric cells", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const p = join(dir, "mixed.csv");
    writeFileSync(p, "x,y\n1,hello\n");
    const t = readTable(p);
    expect(() => numericColumn(t, "y")).toThrow(SchemaError);
    expect(() => numericColumn(t, "y")).toThrow(/non-numeric "y" in row 1/);
  });
});
