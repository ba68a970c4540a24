/**
 * Reader for the v1 benchmark results CSV.
 *
 * Format contract:
 *   line 1: `# dpq-results v1`
 *   line 2: `dataset,algorithm,m,trial,avg_gap,err_max,wall_ns,seed`
 *   data:   one row per (dataset, algorithm, m, trial)
 */

export interface ResultRow {
  dataset: string;
  algorithm: string;
  m: number;
  trial: number;
  avgGap: number;
  errMax: number;
  wallNs: number;
  seed: string; // 64-bit tokens overflow doubles; kept verbatim
}

export const HEADER_COMMENT = "# dpq-results v1";
export const COLUMNS = "dataset,algorithm,m,trial,avg_gap,err_max,wall_ns,seed";

export class CsvFormatError extends Error {}

function parseNumber(text: string, line: number, column: string): number {
  const value = Number(text);
  if (text.trim() === "" || Number.isNaN(value)) {
    throw new CsvFormatError(`line ${line}: ${column} is not a number: ${JSON.stringify(text)}`);
  }
  return value;
}

export function parseResultsCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/);
  if ((lines[0] ?? "").trim() !== HEADER_COMMENT) {
    throw new CsvFormatError(
      `not a dpq-results v1 file (first line ${JSON.stringify(lines[0] ?? "")})`);
  }
  if ((lines[1] ?? "").trim() !== COLUMNS) {
    throw new CsvFormatError(
      `unexpected column header ${JSON.stringify(lines[1] ?? "")}`);
  }
  const rows: ResultRow[] = [];
  for (let i = 2; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "" || line.startsWith("#")) continue;
    const parts = line.split(",");
    if (parts.length !== 8) {
      throw new CsvFormatError(`line ${i + 1}: expected 8 fields, got ${parts.length}`);
    }
    rows.push({
      dataset: parts[0],
      algorithm: parts[1],
      m: parseNumber(parts[2], i + 1, "m"),
      trial: parseNumber(parts[3], i + 1, "trial"),
      avgGap: parseNumber(parts[4], i + 1, "avg_gap"),
      errMax: parseNumber(parts[5], i + 1, "err_max"),
      wallNs: parseNumber(parts[6], i + 1, "wall_ns"),
      seed: parts[7],
    });
  }
  if (rows.length === 0) {
    throw new CsvFormatError("no data rows");
  }
  return rows;
}
