/**
 * Aggregation of raw rows into plotted series.
 *
 * Error figures: one panel per dataset, one curve per algorithm, the y
 * value at each m being the mean avg_gap across trials. The timing
 * figure is a single panel of mean wall seconds per algorithm,
 * averaged across datasets and trials. Ordering is deterministic
 * (sorted datasets/algorithms, ascending m) so downstream artifacts
 * are byte-stable.
 */

import { ResultRow } from "./csv";

export type FigureKind = "error" | "zoom" | "timing";

export interface FigureSpec {
  csvPath: string;
  kind: FigureKind;
  outPath: string;
  /** zoom kind only: drop points with m above this (default 35) */
  mMax?: number;
}

export interface Series {
  algorithm: string;
  points: Array<{ m: number; y: number }>;
}

export interface Panel {
  title: string;
  yLabel: string;
  series: Series[];
  /** algorithms expected in this panel but absent from the data */
  missing: string[];
}

export const DEFAULT_ZOOM_M_MAX = 35;

function mean(values: number[]): number {
  let total = 0;
  for (const v of values) total += v;
  return total / values.length;
}

function groupMeans(
  rows: ResultRow[],
  value: (r: ResultRow) => number,
): Map<string, Map<number, number>> {
  const buckets = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    let byM = buckets.get(row.algorithm);
    if (!byM) {
      byM = new Map();
      buckets.set(row.algorithm, byM);
    }
    let cell = byM.get(row.m);
    if (!cell) {
      cell = [];
      byM.set(row.m, cell);
    }
    cell.push(value(row));
  }
  const out = new Map<string, Map<number, number>>();
  for (const [alg, byM] of buckets) {
    const means = new Map<number, number>();
    for (const [m, values] of byM) means.set(m, mean(values));
    out.set(alg, means);
  }
  return out;
}

function toSeries(meansByAlg: Map<string, Map<number, number>>, mMax?: number): Series[] {
  const series: Series[] = [];
  for (const algorithm of [...meansByAlg.keys()].sort()) {
    const byM = meansByAlg.get(algorithm)!;
    const points = [...byM.entries()]
      .filter(([m]) => mMax === undefined || m <= mMax)
      .sort(([a], [b]) => a - b)
      .map(([m, y]) => ({ m, y }));
    if (points.length > 0) series.push({ algorithm, points });
  }
  return series;
}

/** Build the figure's panels from raw rows per the figure kind. */
export function buildPanels(rows: ResultRow[], kind: FigureKind, mMax?: number): Panel[] {
  if (kind === "timing") {
    const series = toSeries(groupMeans(rows, (r) => r.wallNs / 1e9));
    return [{
      title: "runtime (all datasets)",
      yLabel: "mean wall time [s]",
      series,
      missing: [],
    }];
  }
  const cap = kind === "zoom" ? (mMax ?? DEFAULT_ZOOM_M_MAX) : undefined;
  const datasets = [...new Set(rows.map((r) => r.dataset))].sort();
  const allAlgorithms = [...new Set(rows.map((r) => r.algorithm))].sort();
  const panels: Panel[] = [];
  for (const dataset of datasets) {
    const subset = rows.filter((r) => r.dataset === dataset);
    const series = toSeries(groupMeans(subset, (r) => r.avgGap), cap);
    const present = new Set(series.map((s) => s.algorithm));
    panels.push({
      title: dataset,
      yLabel: "mean gap per quantile",
      series,
      missing: allAlgorithms.filter((a) => !present.has(a)),
    });
  }
  return panels;
}
