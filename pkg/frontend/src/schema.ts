/**
 * CSV schemas for the simulator's outputs and strict validation against them.
 *
 * Headers are an exact, ordered contract; any drift fails loudly with a
 * diagnostic that names the offending column.
 */

import Papa from "papaparse";

export type FigureKind = "pattern_cut" | "snr_sweep" | "asa_sweep";

export type ColumnType = "number" | "string";

export interface ColumnSpec {
  name: string;
  type: ColumnType;
}

export const SCHEMAS: Record<FigureKind, ColumnSpec[]> = {
  pattern_cut: [
    { name: "strategy", type: "string" },
    { name: "model", type: "string" },
    { name: "pol_in", type: "string" },
    { name: "pol_out", type: "string" },
    { name: "theta_out_deg", type: "number" },
    { name: "gain_db", type: "number" },
  ],
  snr_sweep: [
    { name: "freq_ghz", type: "number" },
    { name: "n_side", type: "number" },
    { name: "strategy", type: "string" },
    { name: "snr_db", type: "number" },
  ],
  asa_sweep: [
    { name: "asa_deg", type: "number" },
    { name: "model", type: "string" },
    { name: "seed", type: "number" },
    { name: "snr_db", type: "number" },
  ],
};

export type Row = Record<string, number | string>;

export class SchemaError extends Error {
  constructor(message: string, readonly column?: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** Parse CSV text and validate it against the schema for `kind`. */
export function parseCsv(kind: FigureKind, text: string): Row[] {
  const schema = SCHEMAS[kind];
  if (schema === undefined) {
    throw new SchemaError(`unknown figure kind '${kind}'`);
  }
  if (text.trim() === "") {
    throw new SchemaError("empty file: expected a header row");
  }
  const parsed = Papa.parse<string[]>(text.trim(), {
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`malformed CSV: ${e.message} (row ${e.row ?? "?"})`);
  }
  const lines = parsed.data;
  const header = lines[0];
  for (let i = 0; i < schema.length; i++) {
    if (i >= header.length) {
      throw new SchemaError(
        `header is missing column '${schema[i].name}' at position ${i + 1}`,
        schema[i].name,
      );
    }
    if (header[i] !== schema[i].name) {
      throw new SchemaError(
        `header mismatch at position ${i + 1}: expected column '${schema[i].name}', found '${header[i]}'`,
        schema[i].name,
      );
    }
  }
  if (header.length > schema.length) {
    throw new SchemaError(
      `unexpected extra column '${header[schema.length]}'`,
      header[schema.length],
    );
  }

  const rows: Row[] = [];
  for (let r = 1; r < lines.length; r++) {
    const cells = lines[r];
    if (cells.length !== schema.length) {
      throw new SchemaError(
        `row ${r + 1} has ${cells.length} cells, expected ${schema.length}`,
      );
    }
    const row: Row = {};
    for (let c = 0; c < schema.length; c++) {
      const { name, type } = schema[c];
      if (type === "number") {
        const value = Number(cells[c]);
        if (!Number.isFinite(value)) {
          throw new SchemaError(
            `row ${r + 1}: column '${name}' is not a finite number: '${cells[c]}'`,
            name,
          );
        }
        row[name] = value;
      } else {
        row[name] = cells[c];
      }
    }
    rows.push(row);
  }
  return rows;
}
