#!/usr/bin/env node
/**
 * dpq-plot: render benchmark figures from a v1 results CSV.
 *
 * Usage:
 *   dpq-plot --csv results.csv --kind error|zoom|timing --out fig.png
 *            [--m-max 35]
 *
 * `.png` outputs rasterize through resvg; any other extension gets the
 * SVG source. Exit 1 on malformed input; missing series only produce
 * a warning annotation in the figure.
 */

import { CsvFormatError } from "./csv";
import { render } from "./render";
import { DEFAULT_ZOOM_M_MAX, FigureKind, FigureSpec } from "./series";

const KINDS: FigureKind[] = ["error", "zoom", "timing"];

export function parseArgs(argv: string[]): FigureSpec {
  let csvPath: string | undefined;
  let kind: FigureKind | undefined;
  let outPath: string | undefined;
  let mMax: number | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new Error(`${arg} needs a value`);
      return argv[++i];
    };
    switch (arg) {
      case "--csv":
        csvPath = next();
        break;
      case "--kind": {
        const value = next();
        if (!KINDS.includes(value as FigureKind)) {
          throw new Error(`--kind must be one of ${KINDS.join("|")}, got ${value}`);
        }
        kind = value as FigureKind;
        break;
      }
      case "--out":
        outPath = next();
        break;
      case "--m-max":
        mMax = Number(next());
        if (!Number.isFinite(mMax) || mMax < 1) throw new Error("--m-max must be >= 1");
        break;
      case "--help":
      case "-h":
        throw new Error("help");
      default:
        throw new Error(`unknown argument ${arg}`);
    }
  }
  if (!csvPath || !kind || !outPath) {
    throw new Error("required: --csv <file> --kind error|zoom|timing --out <image>");
  }
  return { csvPath, kind, outPath, mMax: mMax ?? DEFAULT_ZOOM_M_MAX };
}

const USAGE =
  "usage: dpq-plot --csv results.csv --kind error|zoom|timing --out fig.png [--m-max N]";

export async function main(argv: string[]): Promise<number> {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(`${USAGE}\nerror: ${(err as Error).message}`);
    return 1;
  }
  try {
    const result = await render(spec);
    for (const entry of result.missing) {
      console.warn(`warning: panel ${entry.panel} is missing series: ` +
        entry.algorithms.join(", "));
    }
    console.log(`wrote ${result.outPath} (${result.panelCount} panels) ` +
      `and ${result.manifestPath}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvFormatError) {
      console.error(`error: malformed CSV: ${err.message}`);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 1;
  }
}

/* istanbul ignore next */
if (require.main === module) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
