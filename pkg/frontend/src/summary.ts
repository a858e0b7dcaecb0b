import { readFileSync } from "node:fs";
import { SchemaError } from "./csv.js";

export interface SummaryRow {
  p: number;
  n: number;
  samples: number;
  seed: number;
  variant: string;
  stat: string;
  value: number;
  passed: boolean | null;
}

export interface Summary {
  experiment: string;
  passed: boolean | null;
  rows: SummaryRow[];
}

export interface StatSelector {
  stat: string;
  p?: number;
  n?: number;
  variant?: string;
}

export function readSummary(path: string): Summary {
  let doc: unknown;
  try {
    doc = JSON.parse(readFileSync(path, "utf8"));
  } catch (e) {
    throw new SchemaError(`${path}: not valid JSON (${(e as Error).message})`);
  }
  const obj = doc as Record<string, unknown>;
  if (!Array.isArray(obj.rows)) {
    throw new SchemaError(`${path}: missing "rows" array`);
  }
  const rows = obj.rows as Record<string, unknown>[];
  for (const [i, row] of rows.entries()) {
    if (typeof row.stat !== "string" || typeof row.value !== "number") {
      throw new SchemaError(`${path}: row ${i} lacks stat/value fields`);
    }
  }
  return {
    experiment: String(obj.experiment ?? ""),
    passed: (obj.passed ?? null) as boolean | null,
    rows: rows as unknown as SummaryRow[],
  };
}

/**
 * Pull one statistic out of a summary, verbatim.
 *
 * This is the only path by which numbers reach plot annotations; the
 * selector must identify exactly one row so nothing is ever averaged,
 * re-fitted, or otherwise recomputed on the presentation side.
 */
export function findStat(summary: Summary, sel: StatSelector): number {
  const hits = summary.rows.filter(
    (r) =>
      r.stat === sel.stat &&
      (sel.p === undefined || r.p === sel.p) &&
      (sel.n === undefined || r.n === sel.n) &&
      (sel.variant === undefined || r.variant === sel.variant),
  );
  if (hits.length === 0) {
    throw new SchemaError(`no summary row with stat "${sel.stat}"`);
  }
  if (hits.length > 1) {
    throw new SchemaError(
      `stat "${sel.stat}" is ambiguous (${hits.length} rows); narrow with p/n/variant`,
    );
  }
  return hits[0].value;
}
