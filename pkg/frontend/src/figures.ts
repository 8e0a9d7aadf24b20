/**
 * The four figure kinds rendered from experiment-record rows.
 *
 *  - trace: per-seed increment suprema across the threshold sweep
 *  - slope: log-log increment-vs-threshold fit with slope annotation and
 *    the -2 and -7/2 reference lines of the almost-conservation rates
 *  - hist:  sup-statistic histograms grouped by experiment tag (one group
 *    per non-resonant region for the verifier output)
 *  - gn:    distribution of inequality ratios
 */

import type { RecordRow } from "./schema.js";
import { HEIGHT, MARGIN, SvgDoc, WIDTH, color, fmt, linearScale } from "./svg.js";

export type FigureKind = "trace" | "slope" | "hist" | "gn";

export interface PlotSpec {
  kind: FigureKind;
  styleSeed: number;
  title?: string;
}

const PLOT_LEFT = MARGIN.left;
const PLOT_RIGHT = WIDTH - MARGIN.right;
const PLOT_TOP = MARGIN.top;
const PLOT_BOTTOM = HEIGHT - MARGIN.bottom;

function log2(v: number): number {
  return Math.log2(v);
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function fitLine(xs: number[], ys: number[]): { slope: number; intercept: number } {
  const n = xs.length;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (xs[i] - mx) ** 2;
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const slope = sxx > 0 ? sxy / sxx : 0;
  return { slope, intercept: my - slope * mx };
}

function scanRows(rows: RecordRow[]): RecordRow[] {
  const out = rows.filter(
    (r) => r.N_index !== null && r.e1_inc_sup !== null && r.e2_inc_sup !== null,
  );
  if (out.length === 0) {
    throw new Error("no sweep rows with N_index and increment columns in this CSV");
  }
  return out;
}

export function figureTrace(rows: RecordRow[], spec: PlotSpec): string {
  const data = scanRows(rows);
  const seeds = uniqueSorted(data.map((r) => r.seed ?? 0));
  const doc = new SvgDoc(spec.title ?? "increment suprema across the threshold sweep");
  const xsVals = data.map((r) => log2(r.N_index as number));
  const ysVals = data.flatMap((r) => [
    log2(Math.max(r.e1_inc_sup as number, 1e-300)),
    log2(Math.max(r.e2_inc_sup as number, 1e-300)),
  ]);
  const xs = linearScale(Math.min(...xsVals), Math.max(...xsVals), PLOT_LEFT, PLOT_RIGHT);
  const ys = linearScale(Math.min(...ysVals), Math.max(...ysVals), PLOT_BOTTOM, PLOT_TOP);
  doc.axes(xs, ys, "log2 N", "log2 sup-increment");
  seeds.forEach((seed, si) => {
    const mine = data
      .filter((r) => (r.seed ?? 0) === seed)
      .sort((a, b) => (a.N_index as number) - (b.N_index as number));
    const c1 = color(2 * si, spec.styleSeed);
    const c2 = color(2 * si + 1, spec.styleSeed);
    doc.polyline(
      mine.map((r) => [xs(log2(r.N_index as number)), ys(log2(Math.max(r.e1_inc_sup as number, 1e-300)))]),
      c1,
    );
    doc.polyline(
      mine.map((r) => [xs(log2(r.N_index as number)), ys(log2(Math.max(r.e2_inc_sup as number, 1e-300)))]),
      c2,
    );
    doc.text(PLOT_RIGHT - 4, PLOT_TOP + 14 + 24 * si, `seed ${seed}: dE1`, "end", 11, c1);
    doc.text(PLOT_RIGHT - 4, PLOT_TOP + 26 + 24 * si, `seed ${seed}: dE2`, "end", 11, c2);
  });
  return doc.render();
}

export function figureSlope(rows: RecordRow[], spec: PlotSpec): string {
  const data = scanRows(rows).filter((r) => (r.e2_inc_sup as number) > 0);
  const doc = new SvgDoc(spec.title ?? "corrected-energy increment vs threshold (log-log)");
  const px = data.map((r) => log2(r.N_index as number));
  const py = data.map((r) => log2(r.e2_inc_sup as number));
  const fit = fitLine(px, py);
  const refs = [-2, -3.5];
  const x0 = Math.min(...px);
  const x1 = Math.max(...px);
  const anchor = Math.max(...py.filter((_, i) => px[i] === x0));
  const allY = [
    ...py,
    ...refs.flatMap((s) => [anchor, anchor + s * (x1 - x0)]),
    fit.intercept + fit.slope * x0,
    fit.intercept + fit.slope * x1,
  ];
  const xs = linearScale(x0, x1, PLOT_LEFT, PLOT_RIGHT);
  const ys = linearScale(Math.min(...allY), Math.max(...allY), PLOT_BOTTOM, PLOT_TOP);
  doc.axes(xs, ys, "log2 N", "log2 sup |dE2|");
  for (const r of data) {
    doc.circle(xs(log2(r.N_index as number)), ys(log2(r.e2_inc_sup as number)), 3.5,
      color(0, spec.styleSeed));
  }
  doc.line(xs(x0), ys(fit.intercept + fit.slope * x0), xs(x1),
    ys(fit.intercept + fit.slope * x1), color(1, spec.styleSeed), 2);
  doc.text(PLOT_LEFT + 8, PLOT_TOP + 14, `fitted slope = ${fmt(fit.slope)}`, "start", 12,
    color(1, spec.styleSeed));
  refs.forEach((s, i) => {
    doc.line(xs(x0), ys(anchor), xs(x1), ys(anchor + s * (x1 - x0)), "#888888", 1.2,
      i === 0 ? "6 3" : "2 3");
    doc.text(xs(x1) - 4, ys(anchor + s * (x1 - x0)) - 6, `reference slope ${fmt(s)}`,
      "end", 11, "#666666");
  });
  return doc.render();
}

function groupTag(experiment: string): string {
  const i = experiment.indexOf("/");
  return i >= 0 ? experiment.slice(i + 1) : experiment;
}

export function figureHist(rows: RecordRow[], spec: PlotSpec): string {
  const data = rows.filter((r) => r.lam6_sup !== null);
  if (data.length === 0) {
    throw new Error("no rows with the sup-statistic column in this CSV");
  }
  const groups = [...new Set(data.map((r) => groupTag(r.experiment)))].sort();
  const doc = new SvgDoc(spec.title ?? "sup statistic by group");
  const vals = data.map((r) => r.lam6_sup as number);
  const vmax = Math.max(...vals, 1e-300);
  const ys = linearScale(0, vmax, PLOT_BOTTOM, PLOT_TOP);
  const xs = linearScale(0, groups.length, PLOT_LEFT, PLOT_RIGHT);
  doc.axes(xs, ys, "group", "sup statistic");
  const band = (PLOT_RIGHT - PLOT_LEFT) / Math.max(groups.length, 1);
  groups.forEach((g, gi) => {
    const mine = data.filter((r) => groupTag(r.experiment) === g);
    const sup = Math.max(...mine.map((r) => r.lam6_sup as number));
    const mean = mine.reduce((a, r) => a + (r.lam6_sup as number), 0) / mine.length;
    const x = PLOT_LEFT + gi * band;
    doc.rect(x + band * 0.18, ys(sup), band * 0.28, PLOT_BOTTOM - ys(sup),
      color(gi, spec.styleSeed));
    doc.rect(x + band * 0.54, ys(mean), band * 0.28, PLOT_BOTTOM - ys(mean), "#bbbbbb");
    doc.text(x + band / 2, PLOT_BOTTOM + 18, g.slice(0, 12), "middle", 10);
  });
  doc.text(PLOT_RIGHT - 4, PLOT_TOP + 14, "colored: sup, grey: mean", "end", 11, "#444444");
  return doc.render();
}

export function figureGn(rows: RecordRow[], spec: PlotSpec): string {
  const data = rows.filter((r) => r.experiment.startsWith("gn-check") && r.lam6_sup !== null);
  if (data.length === 0) {
    throw new Error("no inequality-ratio rows (gn-check) in this CSV");
  }
  const ratios = data.map((r) => r.lam6_sup as number);
  const doc = new SvgDoc(spec.title ?? "interpolation-inequality ratio distribution");
  const nBins = 20;
  const lo = 0;
  const hi = Math.max(1.05, Math.max(...ratios) * 1.02);
  const counts = new Array<number>(nBins).fill(0);
  for (const r of ratios) {
    const b = Math.min(nBins - 1, Math.floor(((r - lo) / (hi - lo)) * nBins));
    counts[b] += 1;
  }
  const xs = linearScale(lo, hi, PLOT_LEFT, PLOT_RIGHT);
  const ys = linearScale(0, Math.max(...counts, 1), PLOT_BOTTOM, PLOT_TOP);
  doc.axes(xs, ys, "ratio", "count");
  counts.forEach((c, i) => {
    const xA = xs(lo + (i * (hi - lo)) / nBins);
    const xB = xs(lo + ((i + 1) * (hi - lo)) / nBins);
    if (c > 0) doc.rect(xA + 1, ys(c), xB - xA - 2, PLOT_BOTTOM - ys(c), color(0, spec.styleSeed));
  });
  doc.line(xs(1.0), PLOT_TOP, xs(1.0), PLOT_BOTTOM, "#d1495b", 1.5, "5 3");
  doc.text(xs(1.0) + 4, PLOT_TOP + 14, "sharp constant", "start", 11, "#d1495b");
  return doc.render();
}

export function renderFigure(rows: RecordRow[], spec: PlotSpec): string {
  switch (spec.kind) {
    case "trace":
      return figureTrace(rows, spec);
    case "slope":
      return figureSlope(rows, spec);
    case "hist":
      return figureHist(rows, spec);
    case "gn":
      return figureGn(rows, spec);
  }
}
