/**
 * Sidecar manifest: a byte-stable text dump of exactly what was
 * plotted. Assertions in tests (and reproducibility diffing) work on
 * this file, since image bytes may legitimately differ between
 * rasterizer versions.
 */

import { Panel } from "./series";

export const MANIFEST_HEADER = "# dpq-plot manifest v1";

/** Shortest round-trip decimal form; stable for identical doubles. */
function num(x: number): string {
  return String(x);
}

export function renderManifest(kind: string, panels: Panel[]): string {
  const lines: string[] = [MANIFEST_HEADER, `kind=${kind}`];
  for (const panel of panels) {
    lines.push(`panel=${panel.title}`);
    if (panel.missing.length > 0) {
      lines.push(`missing=${panel.missing.join(";")}`);
    }
    for (const series of panel.series) {
      lines.push(`series=${series.algorithm}`);
      for (const { m, y } of series.points) {
        lines.push(`${m},${num(y)}`);
      }
    }
  }
  return lines.join("\n") + "\n";
}

export interface ManifestSeries {
  panel: string;
  algorithm: string;
  points: Array<{ m: number; y: number }>;
}

/** Inverse of renderManifest, for assertion-style tests. */
export function parseManifest(text: string): ManifestSeries[] {
  const lines = text.split("\n");
  if (lines[0] !== MANIFEST_HEADER) {
    throw new Error(`not a dpq-plot manifest: ${JSON.stringify(lines[0])}`);
  }
  const out: ManifestSeries[] = [];
  let panel = "";
  let current: ManifestSeries | null = null;
  for (const line of lines.slice(1)) {
    if (line === "") continue;
    if (line.startsWith("kind=") || line.startsWith("missing=")) continue;
    if (line.startsWith("panel=")) {
      panel = line.slice("panel=".length);
    } else if (line.startsWith("series=")) {
      current = { panel, algorithm: line.slice("series=".length), points: [] };
      out.push(current);
    } else {
      const [m, y] = line.split(",");
      if (!current) throw new Error(`data before any series: ${line}`);
      current.points.push({ m: Number(m), y: Number(y) });
    }
  }
  return out;
}
