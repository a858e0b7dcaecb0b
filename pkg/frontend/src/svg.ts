// Deterministic SVG primitives. No randomness, no timestamps, fixed
// precision everywhere, so equal inputs give byte-equal documents.

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { left: 64, right: 18, top: 30, bottom: 48 };

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#8c564b'];

const STYLE = [
  'text { font: 12px monospace; fill: #222; }',
  '.title { font-size: 14px; }',
  '.annotation { font-size: 13px; fill: #111; }',
  '.axis { stroke: #444; stroke-width: 1; fill: none; }',
  '.grid { stroke: #ddd; stroke-width: 0.5; fill: none; }',
  '.curve { fill: none; stroke-width: 1.5; }',
  '.bar { fill: #1f77b4; stroke: #fff; stroke-width: 0.5; }',
  '.dot { stroke: none; }',
].join(' ');

export type Scale = (v: number) => number;

export function coord(x: number): string {
  // fixed two decimals keeps paths stable across platforms
  return x.toFixed(2);
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const lin = linearScale(Math.log10(d0), Math.log10(d1), r0, r1);
  return (v) => lin(Math.log10(v));
}

/** Round-valued ticks covering [lo, hi], at most n of them. */
export function ticks(lo: number, hi: number, n: number): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    out.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return out;
}

/** Powers of ten inside [lo, hi]; falls back to 1-2-5 mantissas when sparse. */
export function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  const e0 = Math.floor(Math.log10(lo));
  const e1 = Math.ceil(Math.log10(hi));
  for (let e = e0; e <= e1; e++) {
    for (const m of e1 - e0 > 3 ? [1] : [1, 2, 5]) {
      const v = m * Math.pow(10, e);
      if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push(v);
    }
  }
  return out;
}

export function tickLabel(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) return v.toExponential(0).replace('+', '');
  return Number(v.toPrecision(6)).toString();
}

export function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

export function polyline(pts: Array<[number, number]>, cls: string, stroke: string): string {
  const d = pts.map(([x, y]) => `${coord(x)},${coord(y)}`).join(' ');
  return `<polyline class="${cls}" stroke="${stroke}" points="${d}"/>`;
}

export function xAxis(scale: Scale, tickVals: number[], label: string): string {
  const y = HEIGHT - MARGIN.bottom;
  const parts = [
    `<line class="axis" x1="${MARGIN.left}" y1="${y}" x2="${WIDTH - MARGIN.right}" y2="${y}"/>`,
  ];
  for (const t of tickVals) {
    const x = coord(scale(t));
    parts.push(`<line class="axis" x1="${x}" y1="${y}" x2="${x}" y2="${y + 5}"/>`);
    parts.push(`<text x="${x}" y="${y + 18}" text-anchor="middle">${tickLabel(t)}</text>`);
  }
  const cx = coord((MARGIN.left + WIDTH - MARGIN.right) / 2);
  parts.push(`<text x="${cx}" y="${HEIGHT - 10}" text-anchor="middle">${esc(label)}</text>`);
  return parts.join('\n');
}

export function yAxis(scale: Scale, tickVals: number[], label: string): string {
  const x = MARGIN.left;
  const parts = [
    `<line class="axis" x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${HEIGHT - MARGIN.bottom}"/>`,
  ];
  for (const t of tickVals) {
    const y = coord(scale(t));
    parts.push(`<line class="axis" x1="${x - 5}" y1="${y}" x2="${x}" y2="${y}"/>`);
    parts.push(`<text x="${x - 8}" y="${y}" dy="4" text-anchor="end">${tickLabel(t)}</text>`);
  }
  const cy = coord((MARGIN.top + HEIGHT - MARGIN.bottom) / 2);
  parts.push(
    `<text x="16" y="${cy}" text-anchor="middle" transform="rotate(-90 16 ${cy})">${esc(label)}</text>`,
  );
  return parts.join('\n');
}

/**
 * Statistic callout. The visible text is rounded for the eye; the exact
 * value rides along in data-value so nothing downstream has to trust the
 * rounding.
 */
export function annotation(label: string, value: number, slot = 0): string {
  const x = WIDTH - MARGIN.right - 8;
  const y = MARGIN.top + 16 + slot * 18;
  return (
    `<text class="annotation" x="${x}" y="${y}" text-anchor="end" ` +
    `data-value="${String(value)}">${esc(label)} = ${value.toFixed(2)}</text>`
  );
}

export function legend(entries: Array<[string, string]>): string {
  const parts: string[] = [];
  entries.forEach(([name, color], i) => {
    const y = MARGIN.top + 16 + i * 16;
    const x = MARGIN.left + 10;
    parts.push(`<line class="curve" stroke="${color}" x1="${x}" y1="${y - 4}" x2="${x + 18}" y2="${y - 4}"/>`);
    parts.push(`<text x="${x + 24}" y="${y}">${esc(name)}</text>`);
  });
  return parts.join('\n');
}

export function document(title: string, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" width="${WIDTH}" height="${HEIGHT}">`,
    `<style>${STYLE}</style>`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="#fff"/>`,
    `<text class="title" x="${MARGIN.left}" y="18">${esc(title)}</text>`,
    body,
    '</svg>',
    '',
  ].join('\n');
}
