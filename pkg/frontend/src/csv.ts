import * as fs from "fs";

export class SchemaError extends Error {}

export interface Table {
  columns: string[];
  rows: number[][];
}

/** Parse a simple comma-separated numeric CSV with a header row. */
export function readCsv(path: string): Table {
  if (!fs.existsSync(path)) {
    throw new SchemaError(`input file not found: ${path}`);
  }
  const text = fs.readFileSync(path, "utf-8").trim();
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 1) {
    throw new SchemaError("empty CSV");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(`row ${i} has ${parts.length} fields, expected ${columns.length}`);
    }
    rows.push(parts.map(Number));
  }
  return { columns, rows };
}

/** Require exactly the given columns (order included); name the offender. */
export function requireColumns(table: Table, expected: string[]): void {
  for (const name of expected) {
    if (!table.columns.includes(name)) {
      throw new SchemaError(`missing column: ${name}`);
    }
  }
  for (const name of table.columns) {
    if (!expected.includes(name)) {
      throw new SchemaError(`unexpected column: ${name}`);
    }
  }
}

export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`missing column: ${name}`);
  }
  return table.rows.map((r) => r[idx]);
}
