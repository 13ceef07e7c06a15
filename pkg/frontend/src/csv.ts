/**
 * Parsers for the CSV bundles emitted by the gdpolyak harness
 * (`gdpolyak figure-data --figure <id> --out <dir>`).
 *
 * Trace files have the fixed header  k,f,grad_norm,R,step,dist,G
 * where `step` is "gd" / "polyak" (empty on the terminal record) and `G`
 * (squared projected gradient) is empty unless recorded.
 *
 * Surface files are  v,u,f  on a regular grid; ravine files are  v,u.
 */

export interface TraceRow {
  k: number;
  f: number;
  grad_norm: number;
  R: number;
  step: string;
  dist: number;
  G: number | null;
}

export interface SurfaceRow {
  v: number;
  u: number;
  f: number;
}

export interface RavinePoint {
  v: number;
  u: number;
}

const TRACE_HEADER = "k,f,grad_norm,R,step,dist,G";
const SURFACE_HEADER = "v,u,f";
const RAVINE_HEADER = "v,u";

function lines(text: string, expectedHeader: string, what: string): string[] {
  const all = text.trim().split("\n");
  if (all.length === 0 || all[0].trim() !== expectedHeader) {
    throw new Error(
      `bad ${what} header: expected "${expectedHeader}", got "${all[0] ?? ""}"`
    );
  }
  return all.slice(1);
}

export function parseTrace(text: string): TraceRow[] {
  return lines(text, TRACE_HEADER, "trace").map((line, i) => {
    const [k, f, gn, r, step, dist, g] = line.split(",");
    const row: TraceRow = {
      k: parseInt(k, 10),
      f: parseFloat(f),
      grad_norm: parseFloat(gn),
      R: parseFloat(r),
      step: step ?? "",
      dist: parseFloat(dist),
      G: g === "" || g === undefined ? null : parseFloat(g),
    };
    if (!Number.isFinite(row.k) || !Number.isFinite(row.f)) {
      throw new Error(`bad trace row ${i + 1}: "${line}"`);
    }
    return row;
  });
}

export function parseSurface(text: string): SurfaceRow[] {
  return lines(text, SURFACE_HEADER, "surface").map((line, i) => {
    const [v, u, f] = line.split(",");
    const row = { v: parseFloat(v), u: parseFloat(u), f: parseFloat(f) };
    if (!Number.isFinite(row.v) || !Number.isFinite(row.u) || !Number.isFinite(row.f)) {
      throw new Error(`bad surface row ${i + 1}: "${line}"`);
    }
    return row;
  });
}

export function parseRavine(text: string): RavinePoint[] {
  return lines(text, RAVINE_HEADER, "ravine").map((line, i) => {
    const [v, u] = line.split(",");
    const row = { v: parseFloat(v), u: parseFloat(u) };
    if (!Number.isFinite(row.v) || !Number.isFinite(row.u)) {
      throw new Error(`bad ravine row ${i + 1}: "${line}"`);
    }
    return row;
  });
}
