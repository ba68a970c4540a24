/**
 * End-to-end figure production: CSV -> panels -> image file plus the
 * byte-stable sidecar manifest (`<out>.manifest.txt`).
 */

import { promises as fs } from "fs";

import { parseResultsCsv } from "./csv";
import { renderManifest } from "./manifest";
import { buildPanels, FigureSpec } from "./series";
import { renderSvg } from "./svg";

export interface RenderResult {
  outPath: string;
  manifestPath: string;
  panelCount: number;
  /** panels that miss at least one algorithm's curve */
  missing: Array<{ panel: string; algorithms: string[] }>;
}

export function manifestPathFor(outPath: string): string {
  return `${outPath}.manifest.txt`;
}

async function writeImage(outPath: string, svg: string): Promise<void> {
  if (outPath.toLowerCase().endsWith(".png")) {
    const { Resvg } = await import("@resvg/resvg-js");
    const png = new Resvg(svg).render().asPng();
    await fs.writeFile(outPath, png);
  } else {
    await fs.writeFile(outPath, svg, "utf8");
  }
}

export async function render(spec: FigureSpec): Promise<RenderResult> {
  const text = await fs.readFile(spec.csvPath, "utf8");
  const rows = parseResultsCsv(text);
  const panels = buildPanels(rows, spec.kind, spec.mMax);
  const svg = renderSvg(panels);
  await writeImage(spec.outPath, svg);
  const manifestPath = manifestPathFor(spec.outPath);
  await fs.writeFile(manifestPath, renderManifest(spec.kind, panels), "utf8");
  return {
    outPath: spec.outPath,
    manifestPath,
    panelCount: panels.length,
    missing: panels
      .filter((p) => p.missing.length > 0)
      .map((p) => ({ panel: p.title, algorithms: p.missing })),
  };
}
