/**
 * The fixed experiment-record CSV schema owned by the Python package.
 * Parsing is strict: a header mismatch is reported as a column diff and
 * rendering refuses to proceed.
 */

export const CSV_HEADER = [
  "experiment",
  "seed",
  "s",
  "N_index",
  "lambda",
  "t_window",
  "e1_inc_sup",
  "e2_inc_sup",
  "lam6_sup",
  "h1_iu_sup",
  "slope_e1",
  "slope_e2",
  "guard_frac",
  "wall_ms",
] as const;

export type ColumnName = (typeof CSV_HEADER)[number];

export interface RecordRow {
  experiment: string;
  seed: number | null;
  s: number | null;
  N_index: number | null;
  lambda: number | null;
  t_window: number | null;
  e1_inc_sup: number | null;
  e2_inc_sup: number | null;
  lam6_sup: number | null;
  h1_iu_sup: number | null;
  slope_e1: number | null;
  slope_e2: number | null;
  guard_frac: number | null;
  wall_ms: number | null;
}

export class SchemaError extends Error {
  readonly missing: string[];
  readonly unexpected: string[];

  constructor(found: string[]) {
    const expected = CSV_HEADER as readonly string[];
    const missing = expected.filter((c) => !found.includes(c));
    const unexpected = found.filter((c) => !expected.includes(c as ColumnName));
    super(
      "CSV header does not match the experiment-record schema\n" +
        `  expected: ${expected.join(",")}\n` +
        `  found:    ${found.join(",")}\n` +
        `  missing columns:    ${missing.length ? missing.join(",") : "(none)"}\n` +
        `  unexpected columns: ${unexpected.length ? unexpected.join(",") : "(none)"}`,
    );
    this.missing = missing;
    this.unexpected = unexpected;
  }
}

function parseCell(raw: string): number | null {
  if (raw === "") return null;
  const v = Number(raw);
  if (Number.isNaN(v)) {
    throw new Error(`unparseable numeric cell: ${JSON.stringify(raw)}`);
  }
  return v;
}

/** Parse an experiment-record CSV document; throws SchemaError on mismatch. */
export function parseRecords(text: string): RecordRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError([]);
  }
  const header = lines[0].split(",");
  const expected = CSV_HEADER as readonly string[];
  if (header.length !== expected.length || header.some((h, i) => h !== expected[i])) {
    throw new SchemaError(header);
  }
  return lines.slice(1).map((line, k) => {
    const cells = line.split(",");
    if (cells.length !== expected.length) {
      throw new Error(`row ${k + 1} has ${cells.length} cells, expected ${expected.length}`);
    }
    return {
      experiment: cells[0],
      seed: parseCell(cells[1]),
      s: parseCell(cells[2]),
      N_index: parseCell(cells[3]),
      lambda: parseCell(cells[4]),
      t_window: parseCell(cells[5]),
      e1_inc_sup: parseCell(cells[6]),
      e2_inc_sup: parseCell(cells[7]),
      lam6_sup: parseCell(cells[8]),
      h1_iu_sup: parseCell(cells[9]),
      slope_e1: parseCell(cells[10]),
      slope_e2: parseCell(cells[11]),
      guard_frac: parseCell(cells[12]),
      wall_ms: parseCell(cells[13]),
    };
  });
}
