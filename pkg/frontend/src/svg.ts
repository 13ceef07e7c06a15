/**
 * Hand-rolled SVG builders: a semi-log convergence panel (iteration count on
 * a linear x-axis, a positive diagnostic on a log10 y-axis) and a heatmap
 * panel for 2-d objective landscapes.  Panels are emitted as positioned
 * fragments so a figure can tile several of them inside one <svg>.
 */

/** A single convergence curve. */
export interface Series {
  points: { x: number; y: number }[]; // y > 0 (log scale)
  color: string;
  label: string;
  width?: number;
  dash?: string; // stroke-dasharray
}

/** Horizontal reference line (e.g. a stop threshold). */
export interface HLine {
  value: number;
  color: string;
  label: string;
  dash?: string;
}

export interface LogPanelOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  hLines?: HLine[];
  x0: number; // panel origin within the figure
  y0: number;
}

export const PANEL_W = 340;
export const PANEL_H = 260;

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function wrapSvg(w: number, h: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${w} ${h}" ` +
    `font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${w}" height="${h}" fill="#fff"/>\n` +
    body +
    `</svg>\n`
  );
}

function expLabel(e: number): string {
  return e === 0 ? "1" : `1e${e}`;
}

export function buildLogPanel(opts: LogPanelOpts): string {
  const { series, hLines = [], x0, y0 } = opts;
  const ml = 46, mr = 10, mt = 24, mb = 34;
  const pw = PANEL_W - ml - mr;
  const ph = PANEL_H - mt - mb;

  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const xMax = Math.max(1, ...xs);
  const xOf = (v: number) => x0 + ml + (v / xMax) * pw;

  const ys = series.flatMap((s) => s.points.map((p) => p.y));
  const yVals = [...ys, ...hLines.map((h) => h.value)].filter((v) => v > 0);
  let eMin = Math.floor(Math.log10(Math.min(...yVals)));
  let eMax = Math.ceil(Math.log10(Math.max(...yVals)));
  if (eMax <= eMin) eMax = eMin + 1;
  const yOf = (v: number) =>
    y0 + mt + ph - ((Math.log10(v) - eMin) / (eMax - eMin)) * ph;

  let s = `<g>\n`;
  s += `<text x="${x0 + ml}" y="${y0 + mt - 8}" font-size="9" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;

  // Decade grid: label every decade when few, else every other / sparser.
  const eStep = Math.max(1, Math.ceil((eMax - eMin) / 8));
  for (let e = eMin; e <= eMax; e += eStep) {
    const y = yOf(Math.pow(10, e));
    s += `<line x1="${x0 + ml}" y1="${y.toFixed(1)}" x2="${x0 + ml + pw}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.5"/>\n`;
    s += `<text x="${x0 + ml - 4}" y="${(y + 2.5).toFixed(1)}" text-anchor="end" font-size="6.5" fill="#666">${expLabel(e)}</text>\n`;
  }

  for (const hl of hLines) {
    const y = yOf(hl.value);
    s += `<line x1="${x0 + ml}" y1="${y.toFixed(1)}" x2="${x0 + ml + pw}" y2="${y.toFixed(1)}" stroke="${hl.color}" stroke-width="1" stroke-dasharray="${hl.dash ?? "6,3"}"/>\n`;
  }

  for (const sr of series) {
    const pts = sr.points
      .filter((p) => p.y > 0)
      .map((p) => `${xOf(p.x).toFixed(1)},${yOf(p.y).toFixed(1)}`)
      .join(" ");
    s += `<polyline fill="none" stroke="${sr.color}" stroke-width="${sr.width ?? 1.2}" ${sr.dash ? `stroke-dasharray="${sr.dash}" ` : ""}points="${pts}"/>\n`;
  }

  // Axes frame
  s += `<line x1="${x0 + ml}" y1="${y0 + mt}" x2="${x0 + ml}" y2="${y0 + mt + ph}" stroke="#333" stroke-width="0.7"/>\n`;
  s += `<line x1="${x0 + ml}" y1="${y0 + mt + ph}" x2="${x0 + ml + pw}" y2="${y0 + mt + ph}" stroke="#333" stroke-width="0.7"/>\n`;

  // X ticks (5 round-ish values)
  const xStepRough = xMax / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(xStepRough)));
  const xStep = ([1, 2, 5, 10].map((m) => m * mag).find((n) => n >= xStepRough) ?? xStepRough);
  for (let v = 0; v <= xMax + xStep * 0.01; v += xStep) {
    const x = xOf(v);
    s += `<line x1="${x.toFixed(1)}" y1="${y0 + mt + ph}" x2="${x.toFixed(1)}" y2="${y0 + mt + ph + 3}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${y0 + mt + ph + 11}" text-anchor="middle" font-size="6.5" fill="#666">${v}</text>\n`;
  }
  s += `<text x="${x0 + ml + pw / 2}" y="${y0 + PANEL_H - 6}" text-anchor="middle" font-size="8" fill="#444">${esc(opts.xLabel)}</text>\n`;
  s += `<text x="${x0 + 10}" y="${y0 + mt + ph / 2}" text-anchor="middle" font-size="8" fill="#444" transform="rotate(-90,${x0 + 10},${y0 + mt + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  // Legend
  const entries = [
    ...series,
    ...hLines.map((hl) => ({ color: hl.color, label: hl.label, dash: hl.dash ?? "6,3", width: 1 })),
  ];
  const legendW = Math.max(...entries.map((e) => e.label.length)) * 4.5 + 24;
  const lx = x0 + ml + pw - legendW;
  const ly = y0 + mt + 8;
  s += `<rect x="${lx - 4}" y="${ly - 6}" width="${legendW + 8}" height="${entries.length * 10 + 4}" rx="2" fill="white" fill-opacity="0.85"/>\n`;
  entries.forEach((e, i) => {
    const yy = ly + i * 10;
    s += `<line x1="${lx}" y1="${yy}" x2="${lx + 14}" y2="${yy}" stroke="${e.color}" stroke-width="${e.width ?? 1.2}" ${"dash" in e && e.dash ? `stroke-dasharray="${e.dash}" ` : ""}/>\n`;
    s += `<text x="${lx + 18}" y="${yy + 2.5}" font-size="6" fill="#444">${esc(e.label)}</text>\n`;
  });

  s += `</g>\n`;
  return s;
}

// ---------------------------------------------------------------------------
// Heatmap panel (objective landscape on a regular grid, ravine overlaid)
// ---------------------------------------------------------------------------

export interface HeatmapOpts {
  title: string;
  grid: { v: number; u: number; f: number }[]; // regular grid, any order
  ravine: { v: number; u: number }[];
  x0: number;
  y0: number;
}

/** Blue → yellow ramp over t in [0, 1]. */
export function heatColor(t: number): string {
  const c = Math.max(0, Math.min(1, t));
  const r = Math.round(30 + 225 * c);
  const g = Math.round(40 + 190 * c);
  const b = Math.round(140 - 100 * c);
  return `rgb(${r},${g},${b})`;
}

export function buildHeatmapPanel(opts: HeatmapOpts): string {
  const { grid, ravine, x0, y0 } = opts;
  const ml = 38, mr = 12, mt = 24, mb = 30;
  const pw = PANEL_W - ml - mr;
  const ph = PANEL_H - mt - mb;

  const vs = [...new Set(grid.map((g) => g.v))].sort((a, b) => a - b);
  const us = [...new Set(grid.map((g) => g.u))].sort((a, b) => a - b);
  const vMin = vs[0], vMax = vs[vs.length - 1];
  const uMin = us[0], uMax = us[us.length - 1];
  const cw = pw / vs.length;
  const ch = ph / us.length;
  const xOf = (v: number) => x0 + ml + ((v - vMin) / (vMax - vMin || 1)) * pw;
  const yOf = (u: number) => y0 + mt + ph - ((u - uMin) / (uMax - uMin || 1)) * ph;

  // Color by log10(f + eps) so the flat ravine floor stays visible.
  const EPS = 1e-9;
  const lfs = grid.map((g) => Math.log10(g.f + EPS));
  const lfMin = Math.min(...lfs);
  const lfMax = Math.max(...lfs);

  let s = `<g>\n`;
  s += `<text x="${x0 + ml}" y="${y0 + mt - 8}" font-size="9" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;

  for (const g of grid) {
    const t = (Math.log10(g.f + EPS) - lfMin) / (lfMax - lfMin || 1);
    s += `<rect x="${(xOf(g.v) - cw / 2).toFixed(1)}" y="${(yOf(g.u) - ch / 2).toFixed(1)}" width="${(cw + 0.2).toFixed(1)}" height="${(ch + 0.2).toFixed(1)}" fill="${heatColor(t)}"/>\n`;
  }

  const rav = ravine
    .map((p) => `${xOf(p.v).toFixed(1)},${yOf(p.u).toFixed(1)}`)
    .join(" ");
  s += `<polyline fill="none" stroke="#fff" stroke-width="1.5" points="${rav}"/>\n`;

  s += `<rect x="${x0 + ml}" y="${y0 + mt}" width="${pw}" height="${ph}" fill="none" stroke="#333" stroke-width="0.7"/>\n`;
  for (const v of [vMin, 0, vMax]) {
    s += `<text x="${xOf(v).toFixed(1)}" y="${y0 + mt + ph + 10}" text-anchor="middle" font-size="6.5" fill="#666">${v}</text>\n`;
  }
  for (const u of [uMin, 0, uMax]) {
    s += `<text x="${x0 + ml - 4}" y="${(yOf(u) + 2.5).toFixed(1)}" text-anchor="end" font-size="6.5" fill="#666">${u}</text>\n`;
  }
  s += `<text x="${x0 + ml + pw / 2}" y="${y0 + PANEL_H - 4}" text-anchor="middle" font-size="8" fill="#444">v</text>\n`;
  s += `<text x="${x0 + 10}" y="${y0 + mt + ph / 2}" text-anchor="middle" font-size="8" fill="#444" transform="rotate(-90,${x0 + 10},${y0 + mt + ph / 2})">u</text>\n`;
  s += `</g>\n`;
  return s;
}
