export { numericColumn, readTable, requireColumns, SchemaError, statRows } from "./csv.js";
export type { Table } from "./csv.js";
export { findStat, readSummary } from "./summary.js";
export type { StatSelector, Summary, SummaryRow } from "./summary.js";
export { renderCdfOverlay, renderGapHist, renderLoglogFit } from "./plots.js";
export type { Annotation, CdfOptions, HistOptions, LoglogOptions } from "./plots.js";
export { PLOT_KINDS, render } from "./jobs.js";
export type { AnnotationSpec, PlotJob, PlotKind, PlotStyle } from "./jobs.js";
