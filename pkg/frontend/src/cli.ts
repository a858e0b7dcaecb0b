#!/usr/bin/env node
import { parseArgs } from "node:util";
import { AnnotationSpec, PlotJob, PlotKind, PLOT_KINDS, render } from "./jobs.js";

const USAGE = `usage: mobmap-plots <kind> --in data.csv [--in more.csv] --out fig.svg
                    [--summary report.json] [options]

kinds: ${PLOT_KINDS.join(", ")}

options:
  --column NAME        cdf-overlay: CSV column to accumulate (default z)
  --label TEXT         cdf-overlay: legend label, once per --in
  --x NAME             loglog-fit: x column (default n)
  --y NAME             loglog-fit: y column (default value)
  --stat NAME          loglog-fit: keep only rows with this stat
  --fit-slope NAME     loglog-fit: summary stat holding the line's slope
  --fit-intercept NAME loglog-fit: summary stat holding the line's intercept
  --prefix NAME        gap-hist: stat prefix to histogram (default gap)
  --bins N             gap-hist: bin count (default 10)
  --annotate L=STAT    stamp summary stat STAT on the figure, labeled L
                       (repeatable; L=STAT@p,n narrows to one (p, n) cell)
`;

function parseAnnotate(raw: string): AnnotationSpec {
  const eq = raw.indexOf("=");
  if (eq <= 0) throw new Error(`--annotate wants LABEL=STAT, got "${raw}"`);
  const label = raw.slice(0, eq);
  let stat = raw.slice(eq + 1);
  const at = stat.indexOf("@");
  let p: number | undefined;
  let n: number | undefined;
  if (at >= 0) {
    const cell = stat.slice(at + 1).split(",");
    stat = stat.slice(0, at);
    if (cell.length !== 2) throw new Error(`--annotate cell wants STAT@p,n, got "${raw}"`);
    p = Number(cell[0]);
    n = Number(cell[1]);
  }
  return { label, stat, p, n };
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string", multiple: true },
        out: { type: "string" },
        summary: { type: "string" },
        column: { type: "string" },
        label: { type: "string", multiple: true },
        x: { type: "string" },
        y: { type: "string" },
        stat: { type: "string" },
        "fit-slope": { type: "string" },
        "fit-intercept": { type: "string" },
        prefix: { type: "string" },
        bins: { type: "string" },
        annotate: { type: "string", multiple: true },
        help: { type: "boolean" },
      },
    });
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 2;
  }
  const { values, positionals } = parsed;
  if (values.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  if (positionals.length !== 1) {
    process.stderr.write(USAGE);
    return 2;
  }
  try {
    if (values.out === undefined) throw new Error("--out is required");
    if (values.in === undefined) throw new Error("--in is required");
    const bins = values.bins === undefined ? undefined : Number(values.bins);
    if (bins !== undefined && !Number.isInteger(bins)) {
      throw new Error(`--bins wants an integer, got "${values.bins}"`);
    }
    const job: PlotJob = {
      kind: positionals[0] as PlotKind,
      inputs: values.in,
      output: values.out,
      summary: values.summary,
      style: {
        column: values.column,
        labels: values.label,
        xColumn: values.x,
        yColumn: values.y,
        statFilter: values.stat,
        statPrefix: values.prefix,
        bins,
        fitSlopeStat: values["fit-slope"],
        fitInterceptStat: values["fit-intercept"],
        annotate: (values.annotate ?? []).map(parseAnnotate),
      },
    };
    render(job);
    process.stdout.write(`${job.output}\n`);
    return 0;
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
