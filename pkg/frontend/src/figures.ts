/**
 * Figure definitions: which files each figure id expects inside its input
 * bundle directory, and how those files are composed into one SVG.
 *
 * Bundle layout (produced by `gdpolyak figure-data --figure <id> --out <dir>`):
 *
 *   fig1 / fig2   <id>_surface.csv (v,u,f grid) + <id>_ravine.csv (v,u)
 *   fig3          fig3_<problem>_<method>.csv traces for the two 2-d quartics
 *                 with methods adaptive / block / gd / polyak
 *   fig4          fig4_<problem>_<method>.csv traces for the three benchmark
 *                 problems with methods adaptive / block / gd
 */

import { readFile } from "fs/promises";
import path from "path";

import { parseTrace, parseSurface, parseRavine, TraceRow } from "./csv.js";
import {
  Series,
  buildLogPanel,
  buildHeatmapPanel,
  wrapSvg,
  PANEL_W,
  PANEL_H,
} from "./svg.js";

export class UnknownFigure extends Error {}

const METHOD_COLORS: Record<string, string> = {
  adaptive: "#4361ee",
  gd: "#e63946",
  polyak: "#2d6a4f",
  block: "#f4a261",
};

interface CurvePanel {
  title: string;
  problem: string;
  methods: string[];
  metric: "dist" | "f";
  threshold: number;
  thresholdLabel: string;
}

const FIG3_PANELS: CurvePanel[] = [
  {
    title: "convex quartic",
    problem: "convex_quartic",
    methods: ["adaptive", "block", "gd", "polyak"],
    metric: "dist",
    threshold: 1e-6,
    thresholdLabel: "stop 1e-6",
  },
  {
    title: "nonconvex quartic",
    problem: "nonconvex_quartic",
    methods: ["adaptive", "block", "gd", "polyak"],
    metric: "dist",
    threshold: 1e-6,
    thresholdLabel: "stop 1e-6",
  },
];

const FIG4_PANELS: CurvePanel[] = [
  {
    title: "quartic Rosenbrock",
    problem: "quartic_rosenbrock",
    methods: ["adaptive", "block", "gd"],
    metric: "dist",
    threshold: 1e-7,
    thresholdLabel: "stop 1e-7",
  },
  {
    title: "quadratic sensing",
    problem: "quadratic_sensing",
    methods: ["adaptive", "block", "gd"],
    metric: "dist",
    threshold: 1e-5,
    thresholdLabel: "stop 1e-5",
  },
  {
    title: "single neuron",
    problem: "single_neuron",
    methods: ["adaptive", "block", "gd"],
    metric: "f",
    threshold: 1e-12,
    thresholdLabel: "stop 1e-12",
  },
];

function traceSeries(method: string, rows: TraceRow[], metric: "dist" | "f"): Series {
  return {
    points: rows.map((r) => ({ x: r.k, y: metric === "dist" ? r.dist : r.f })),
    color: METHOD_COLORS[method] ?? "#888",
    label: method,
    dash: method === "gd" ? "4,3" : undefined,
  };
}

async function readText(dir: string, name: string): Promise<string> {
  return readFile(path.join(dir, name), "utf-8");
}

async function renderCurveFigure(
  figureId: string,
  panels: CurvePanel[],
  inDir: string
): Promise<string> {
  let body = "";
  for (let i = 0; i < panels.length; i++) {
    const p = panels[i];
    const series: Series[] = [];
    for (const method of p.methods) {
      const text = await readText(inDir, `${figureId}_${p.problem}_${method}.csv`);
      series.push(traceSeries(method, parseTrace(text), p.metric));
    }
    body += buildLogPanel({
      title: p.title,
      xLabel: "iteration k",
      yLabel: p.metric === "dist" ? "distance to solution set" : "objective value",
      series,
      hLines: [{ value: p.threshold, color: "#888", label: p.thresholdLabel }],
      x0: i * PANEL_W,
      y0: 0,
    });
  }
  return wrapSvg(panels.length * PANEL_W, PANEL_H, body);
}

async function renderLandscapeFigure(figureId: string, inDir: string): Promise<string> {
  const surface = parseSurface(await readText(inDir, `${figureId}_surface.csv`));
  const ravine = parseRavine(await readText(inDir, `${figureId}_ravine.csv`));
  const title =
    figureId === "fig1" ? "convex quartic landscape" : "nonconvex quartic landscape";
  const body = buildHeatmapPanel({ title, grid: surface, ravine, x0: 0, y0: 0 });
  return wrapSvg(PANEL_W, PANEL_H, body);
}

export const FIGURE_IDS = ["fig1", "fig2", "fig3", "fig4"] as const;

export async function renderFigure(figureId: string, inDir: string): Promise<string> {
  switch (figureId) {
    case "fig1":
    case "fig2":
      return renderLandscapeFigure(figureId, inDir);
    case "fig3":
      return renderCurveFigure("fig3", FIG3_PANELS, inDir);
    case "fig4":
      return renderCurveFigure("fig4", FIG4_PANELS, inDir);
    default:
      throw new UnknownFigure(`unknown figure "${figureId}" (known: ${FIGURE_IDS.join(", ")})`);
  }
}
