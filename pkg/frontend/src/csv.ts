import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** Raised when an input file exists but does not match its documented layout. */
export class SchemaError extends Error {}

export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, unknown>[];
}

export function readTable(path: string): Table {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, unknown>>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`${path}: ${e.message} (row ${e.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0) {
    throw new SchemaError(`${path}: no header row`);
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return { path, columns, rows: parsed.data };
}

export function requireColumns(table: Table, needed: string[]): void {
  for (const col of needed) {
    if (!table.columns.includes(col)) {
      throw new SchemaError(`${table.path}: missing column "${col}"`);
    }
  }
}

/** Numeric values of one column, in row order. Non-numbers are schema errors. */
export function numericColumn(table: Table, col: string): number[] {
  requireColumns(table, [col]);
  return table.rows.map((row, i) => {
    const v = row[col];
    if (typeof v !== "number" || !Number.isFinite(v)) {
      throw new SchemaError(`${table.path}: non-numeric "${col}" in row ${i + 1}`);
    }
    return v;
  });
}

/** Rows whose `stat` column matches exactly. */
export function statRows(table: Table, stat: string): Record<string, unknown>[] {
  requireColumns(table, ["stat", "value"]);
  return table.rows.filter((r) => r.stat === stat);
}
