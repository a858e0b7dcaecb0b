import { existsSync, mkdirSync, writeFileSync } from "node:fs";
import { dirname, extname } from "node:path";
import { readTable, SchemaError } from "./csv.js";
import {
  CdfOptions,
  HistOptions,
  LoglogOptions,
  renderCdfOverlay,
  renderGapHist,
  renderLoglogFit,
} from "./plots.js";
import { findStat, readSummary, StatSelector, Summary } from "./summary.js";

export type PlotKind = "cdf-overlay" | "loglog-fit" | "gap-hist";

export const PLOT_KINDS: readonly PlotKind[] = ["cdf-overlay", "loglog-fit", "gap-hist"];

/** A named statistic to pull from the JSON summary and stamp on the figure. */
export interface AnnotationSpec extends StatSelector {
  label: string;
}

export interface PlotStyle {
  column?: string;
  labels?: string[];
  xColumn?: string;
  yColumn?: string;
  statFilter?: string;
  statPrefix?: string;
  bins?: number;
  /** stat names holding the fitted line's coefficients, loglog-fit only */
  fitSlopeStat?: string;
  fitInterceptStat?: string;
  annotate?: AnnotationSpec[];
}

export interface PlotJob {
  kind: PlotKind;
  inputs: string[];
  output: string;
  summary?: string;
  style?: PlotStyle;
}

function resolveAnnotations(specs: AnnotationSpec[], summary: Summary | undefined) {
  if (specs.length === 0) return [];
  if (summary === undefined) {
    throw new SchemaError("annotations come from a JSON summary; pass one");
  }
  return specs.map((spec) => ({ label: spec.label, value: findStat(summary, spec) }));
}

/** Validate a job, render it, write the SVG, and return the document text. */
export function render(job: PlotJob): string {
  if (!PLOT_KINDS.includes(job.kind)) {
    throw new Error(`unknown plot kind "${job.kind}"`);
  }
  if (job.inputs.length === 0) {
    throw new Error("no input files given");
  }
  if (job.kind !== "cdf-overlay" && job.inputs.length !== 1) {
    throw new Error(`${job.kind} takes exactly one input, got ${job.inputs.length}`);
  }
  for (const p of job.inputs) {
    if (!existsSync(p)) throw new Error(`input not found: ${p}`);
  }
  const ext = extname(job.output).toLowerCase();
  if (ext !== ".svg") {
    throw new Error(`unsupported output format "${ext || job.output}": this renderer emits .svg`);
  }
  const style = job.style ?? {};
  const summary = job.summary !== undefined ? readSummary(job.summary) : undefined;
  const annotations = resolveAnnotations(style.annotate ?? [], summary);
  const tables = job.inputs.map(readTable);

  let doc: string;
  if (job.kind === "cdf-overlay") {
    const opts: CdfOptions = { column: style.column, labels: style.labels, annotations };
    doc = renderCdfOverlay(tables, opts);
  } else if (job.kind === "loglog-fit") {
    let fit: LoglogOptions["fit"];
    if (style.fitSlopeStat !== undefined) {
      if (summary === undefined) {
        throw new SchemaError("the fitted line comes from a JSON summary; pass one");
      }
      fit = {
        slope: findStat(summary, { stat: style.fitSlopeStat }),
        intercept:
          style.fitInterceptStat !== undefined
            ? findStat(summary, { stat: style.fitInterceptStat })
            : undefined,
      };
    }
    const opts: LoglogOptions = {
      xColumn: style.xColumn,
      yColumn: style.yColumn,
      statFilter: style.statFilter,
      fit,
      annotations,
    };
    doc = renderLoglogFit(tables[0], opts);
  } else {
    const opts: HistOptions = { statPrefix: style.statPrefix, bins: style.bins, annotations };
    doc = renderGapHist(tables[0], opts);
  }

  const dir = dirname(job.output);
  if (dir !== "" && dir !== ".") mkdirSync(dir, { recursive: true });
  writeFileSync(job.output, doc);
  return doc;
}
