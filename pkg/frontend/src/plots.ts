import { basename } from "node:path";
import { numericColumn, SchemaError, statRows, Table } from "./csv.js";
import * as svg from "./svg.js";

export interface Annotation {
  label: string;
  value: number;
}

export interface CdfOptions {
  column?: string;
  labels?: string[];
  annotations?: Annotation[];
}

export interface LoglogOptions {
  xColumn?: string;
  yColumn?: string;
  statFilter?: string;
  fit?: { slope: number; intercept?: number };
  annotations?: Annotation[];
}

export interface HistOptions {
  statPrefix?: string;
  bins?: number;
  annotations?: Annotation[];
}

function plotArea() {
  const x0 = svg.MARGIN.left;
  const x1 = svg.WIDTH - svg.MARGIN.right;
  const y0 = svg.HEIGHT - svg.MARGIN.bottom;
  const y1 = svg.MARGIN.top;
  return { x0, x1, y0, y1 };
}

function annotationBlock(notes: Annotation[]): string {
  return notes.map((a, i) => svg.annotation(a.label, a.value, i)).join("\n");
}

/** One empirical CDF staircase per input table, shared axes. */
export function renderCdfOverlay(tables: Table[], opts: CdfOptions = {}): string {
  const column = opts.column ?? "z";
  const series = tables.map((t) => numericColumn(t, column).slice().sort((a, b) => a - b));
  const { x0, x1, y0, y1 } = plotArea();
  let lo = Infinity;
  let hi = -Infinity;
  for (const vals of series) {
    lo = Math.min(lo, vals[0]);
    hi = Math.max(hi, vals[vals.length - 1]);
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const sx = svg.linearScale(lo, hi, x0, x1);
  const sy = svg.linearScale(0, 1, y0, y1);
  const body: string[] = [];
  series.forEach((vals, k) => {
    const n = vals.length;
    const pts: Array<[number, number]> = [[sx(vals[0]), sy(0)]];
    for (let i = 0; i < n; i++) {
      pts.push([sx(vals[i]), sy(i / n)]);
      pts.push([sx(vals[i]), sy((i + 1) / n)]);
    }
    pts.push([sx(hi), sy(1)]);
    body.push(svg.polyline(pts, "curve", svg.PALETTE[k % svg.PALETTE.length]));
  });
  const names = tables.map((t, k) => opts.labels?.[k] ?? basename(t.path));
  body.push(svg.legend(names.map((nm, k) => [nm, svg.PALETTE[k % svg.PALETTE.length]])));
  body.push(svg.xAxis(sx, svg.ticks(lo, hi, 6), column));
  body.push(svg.yAxis(sy, svg.ticks(0, 1, 5), "cumulative fraction"));
  body.push(annotationBlock(opts.annotations ?? []));
  return svg.document(`empirical CDF of "${column}"`, body.join("\n"));
}

/** Scatter of (x, y) rows on log-log axes, with an optional fitted line. */
export function renderLoglogFit(table: Table, opts: LoglogOptions = {}): string {
  const xCol = opts.xColumn ?? "n";
  const yCol = opts.yColumn ?? "value";
  let rows = table.rows;
  if (opts.statFilter !== undefined) {
    rows = statRows(table, opts.statFilter);
    if (rows.length === 0) {
      throw new SchemaError(`${table.path}: no rows with stat "${opts.statFilter}"`);
    }
  }
  const sub: Table = { ...table, rows };
  const xs = numericColumn(sub, xCol);
  const ys = numericColumn(sub, yCol);
  const pts = xs.map((x, i) => [x, ys[i]] as [number, number]).sort((a, b) => a[0] - b[0]);
  for (const [x, y] of pts) {
    if (x <= 0 || y <= 0) {
      throw new SchemaError(`${table.path}: log-log plot needs positive ${xCol} and ${yCol}`);
    }
  }
  const { x0, x1, y0, y1 } = plotArea();
  const sx = svg.logScale(pts[0][0], pts[pts.length - 1][0], x0, x1);
  const ylo = Math.min(...ys);
  const yhi = Math.max(...ys);
  const sy = svg.logScale(ylo, yhi === ylo ? ylo * 10 : yhi, y0, y1);
  const body: string[] = [];
  if (opts.fit && opts.fit.intercept !== undefined) {
    // line drawn from the summary's own slope/intercept (natural-log form)
    const { slope, intercept } = opts.fit;
    const line = pts.map(
      ([x]) => [sx(x), sy(Math.exp(intercept + slope * Math.log(x)))] as [number, number],
    );
    body.push(svg.polyline(line, "curve", svg.PALETTE[1]));
  }
  for (const [x, y] of pts) {
    body.push(
      `<circle class="dot" cx="${svg.coord(sx(x))}" cy="${svg.coord(sy(y))}" r="3.5" fill="${svg.PALETTE[0]}"/>`,
    );
  }
  body.push(svg.xAxis(sx, svg.logTicks(pts[0][0], pts[pts.length - 1][0]), xCol));
  body.push(svg.yAxis(sy, svg.logTicks(ylo, yhi === ylo ? ylo * 10 : yhi), yCol));
  body.push(annotationBlock(opts.annotations ?? []));
  const what = opts.statFilter ?? yCol;
  return svg.document(`log-log fit: ${what} vs ${xCol}`, body.join("\n"));
}

/** Histogram over the values of stat rows sharing a prefix. */
export function renderGapHist(table: Table, opts: HistOptions = {}): string {
  const prefix = opts.statPrefix ?? "gap";
  const bins = opts.bins ?? 10;
  if (bins < 1) throw new SchemaError(`bins must be positive, got ${bins}`);
  const rows = table.rows.filter((r) => typeof r.stat === "string" && r.stat.startsWith(prefix));
  if (rows.length === 0) {
    throw new SchemaError(`${table.path}: no rows with stat prefix "${prefix}"`);
  }
  const values = numericColumn({ ...table, rows }, "value");
  const lo = Math.min(0, ...values);
  let hi = Math.max(...values);
  if (hi === lo) hi = lo + 1;
  const counts = new Array<number>(bins).fill(0);
  const width = (hi - lo) / bins;
  for (const v of values) {
    const b = Math.min(bins - 1, Math.floor((v - lo) / width));
    counts[b] += 1;
  }
  const { x0, x1, y0, y1 } = plotArea();
  const sx = svg.linearScale(lo, hi, x0, x1);
  const sy = svg.linearScale(0, Math.max(...counts), y0, y1);
  const body: string[] = [];
  counts.forEach((c, b) => {
    if (c === 0) return;
    const bx = sx(lo + b * width);
    const bw = sx(lo + (b + 1) * width) - bx;
    body.push(
      `<rect class="bar" x="${svg.coord(bx)}" y="${svg.coord(sy(c))}" ` +
        `width="${svg.coord(bw)}" height="${svg.coord(y0 - sy(c))}"/>`,
    );
  });
  body.push(svg.xAxis(sx, svg.ticks(lo, hi, 6), `${prefix}* value`));
  body.push(svg.yAxis(sy, svg.ticks(0, Math.max(...counts), 5), "count"));
  body.push(annotationBlock(opts.annotations ?? []));
  return svg.document(`histogram of ${prefix}* stats`, body.join("\n"));
}
