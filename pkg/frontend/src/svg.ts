/**
 * Hand-rolled SVG rendering: a row-wrapped grid of panels, linear x
 * (number of quantiles) against log-scale y, one colored curve per
 * algorithm with a shared legend per panel.
 */

import { Panel, Series } from "./series";

const PANEL_W = 420;
const PANEL_H = 300;
const MARGIN = { top: 36, right: 18, bottom: 46, left: 70 };
const PANELS_PER_ROW = 3;

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtTick(v: number): string {
  if (v >= 1000 || v < 0.01) return v.toExponential(0).replace("e+", "e");
  return String(v);
}

interface Scale {
  (v: number): number;
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  return (v) => outLo + ((v - lo) / span) * (outHi - outLo);
}

function collectYs(series: Series[]): number[] {
  const ys: number[] = [];
  for (const s of series) for (const p of s.points) ys.push(p.y);
  return ys;
}

/**
 * Log-position helper: zero values cannot sit on a log axis, so they
 * are drawn at half the smallest positive value (the manifest keeps
 * exact numbers; this affects geometry only).
 */
function logFloor(ys: number[]): number {
  const positive = ys.filter((y) => y > 0);
  if (positive.length === 0) return 0.1;
  return Math.min(...positive) / 2;
}

function renderPanel(panel: Panel, index: number, colors: Map<string, string>): string {
  const ox = (index % PANELS_PER_ROW) * PANEL_W;
  const oy = Math.floor(index / PANELS_PER_ROW) * PANEL_H;
  const plotX0 = MARGIN.left;
  const plotX1 = PANEL_W - MARGIN.right;
  const plotY0 = PANEL_H - MARGIN.bottom;
  const plotY1 = MARGIN.top;

  const parts: string[] = [];
  parts.push(`<g class="panel" data-dataset="${esc(panel.title)}" transform="translate(${ox},${oy})">`);
  parts.push(`<text x="${PANEL_W / 2}" y="18" text-anchor="middle" font-size="14" font-weight="bold">${esc(panel.title)}</text>`);

  const ms = panel.series.flatMap((s) => s.points.map((p) => p.m));
  const ys = collectYs(panel.series);
  if (ms.length === 0) {
    parts.push(`<text class="warning" x="${PANEL_W / 2}" y="${PANEL_H / 2}" text-anchor="middle" fill="#b00" font-size="12">no data</text>`);
    parts.push("</g>");
    return parts.join("\n");
  }

  const floor = logFloor(ys);
  const safeLog = (y: number) => Math.log10(Math.max(y, floor));
  const yLo = Math.floor(Math.min(...ys.map(safeLog)));
  const yHi = Math.ceil(Math.max(...ys.map(safeLog), yLo + 1e-9) + 1e-9);
  const xScale = linearScale(Math.min(...ms), Math.max(...ms), plotX0, plotX1);
  const yScale = linearScale(yLo, yHi, plotY0, plotY1);

  // frame and y grid at powers of ten
  parts.push(`<rect x="${plotX0}" y="${plotY1}" width="${plotX1 - plotX0}" height="${plotY0 - plotY1}" fill="none" stroke="#333"/>`);
  for (let e = yLo; e <= yHi; e++) {
    const y = yScale(e);
    parts.push(`<line x1="${plotX0}" y1="${y}" x2="${plotX1}" y2="${y}" stroke="#ddd"/>`);
    parts.push(`<text x="${plotX0 - 6}" y="${y + 4}" text-anchor="end" font-size="10">${fmtTick(10 ** e)}</text>`);
  }
  const mLo = Math.min(...ms);
  const mHi = Math.max(...ms);
  const xTickCount = Math.min(6, new Set(ms).size);
  for (let i = 0; i < xTickCount; i++) {
    const m = mLo + ((mHi - mLo) * i) / Math.max(xTickCount - 1, 1);
    const x = xScale(m);
    parts.push(`<line x1="${x}" y1="${plotY0}" x2="${x}" y2="${plotY0 + 4}" stroke="#333"/>`);
    parts.push(`<text x="${x}" y="${plotY0 + 16}" text-anchor="middle" font-size="10">${Math.round(m)}</text>`);
  }
  parts.push(`<text x="${(plotX0 + plotX1) / 2}" y="${PANEL_H - 10}" text-anchor="middle" font-size="11">number of quantiles m</text>`);
  parts.push(`<text transform="translate(16,${(plotY0 + plotY1) / 2}) rotate(-90)" text-anchor="middle" font-size="11">${esc(panel.yLabel)} (log)</text>`);

  for (const series of panel.series) {
    const color = colors.get(series.algorithm) ?? "#000";
    const d = series.points
      .map((p, i) => `${i === 0 ? "M" : "L"}${xScale(p.m).toFixed(2)},${yScale(safeLog(p.y)).toFixed(2)}`)
      .join(" ");
    parts.push(`<path class="curve" data-algorithm="${esc(series.algorithm)}" d="${d}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    for (const p of series.points) {
      parts.push(`<circle cx="${xScale(p.m).toFixed(2)}" cy="${yScale(safeLog(p.y)).toFixed(2)}" r="2.4" fill="${color}"/>`);
    }
  }

  // legend
  let ly = plotY1 + 8;
  for (const series of panel.series) {
    const color = colors.get(series.algorithm) ?? "#000";
    parts.push(`<line x1="${plotX1 - 86}" y1="${ly}" x2="${plotX1 - 66}" y2="${ly}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${plotX1 - 60}" y="${ly + 4}" font-size="11">${esc(series.algorithm)}</text>`);
    ly += 15;
  }
  if (panel.missing.length > 0) {
    parts.push(`<text class="warning" x="${plotX0 + 6}" y="${plotY1 + 12}" fill="#b00" font-size="11">missing: ${esc(panel.missing.join(", "))}</text>`);
  }
  parts.push("</g>");
  return parts.join("\n");
}

export function renderSvg(panels: Panel[]): string {
  const algorithms = [...new Set(panels.flatMap((p) => p.series.map((s) => s.algorithm)))].sort();
  const colors = new Map(algorithms.map((a, i) => [a, PALETTE[i % PALETTE.length]]));
  const cols = Math.min(panels.length, PANELS_PER_ROW);
  const rows = Math.ceil(panels.length / PANELS_PER_ROW);
  const width = cols * PANEL_W;
  const height = rows * PANEL_H;
  const body = panels.map((p, i) => renderPanel(p, i, colors)).join("\n");
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">
<rect width="${width}" height="${height}" fill="white"/>
${body}
</svg>
`;
}
