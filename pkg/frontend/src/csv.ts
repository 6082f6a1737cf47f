/**
 * Minimal CSV reader for the numeric tables emitted by the hjbgap CLI.
 *
 * The files are plain comma-separated values with a single header row and
 * no quoting, so a split-based parser is sufficient. Columns requested by
 * the caller must exist; rows must exist; everything else is reported as
 * a typed error so the CLI can exit nonzero with a clear message.
 */

export class MissingColumnError extends Error {
  constructor(public readonly column: string, file: string) {
    super(`column "${column}" missing from ${file}`);
    this.name = "MissingColumnError";
  }
}

export class EmptyDataError extends Error {
  constructor(file: string) {
    super(`no data rows in ${file}`);
    this.name = "EmptyDataError";
  }
}

export interface Table {
  header: string[];
  /** One entry per data row, keyed by column name. Empty cells are NaN. */
  rows: Record<string, number>[];
}

export function parseCsv(
  text: string,
  requiredColumns: string[],
  file: string,
): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new EmptyDataError(file);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  for (const col of requiredColumns) {
    if (!header.includes(col)) {
      throw new MissingColumnError(col, file);
    }
  }
  const rows: Record<string, number>[] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    const row: Record<string, number> = {};
    header.forEach((name, i) => {
      const cell = (cells[i] ?? "").trim();
      row[name] = cell === "" ? NaN : Number(cell);
    });
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new EmptyDataError(file);
  }
  return { header, rows };
}

/** Distinct values of a column, preserving first-seen order. */
export function distinct(table: Table, column: string): number[] {
  const seen: number[] = [];
  for (const row of table.rows) {
    if (!seen.includes(row[column])) {
      seen.push(row[column]);
    }
  }
  return seen;
}
