/**
 * File-level rendering: read a schema-checked CSV, produce an SVG or PNG.
 *
 * SVG output is byte-deterministic for identical inputs; PNG output is the
 * same SVG rasterized.
 */

import { promises as fs } from "fs";
import path from "path";
import sharp from "sharp";

import { FigureOptions, RENDERERS } from "./figures";
import { FigureKind, SCHEMAS, SchemaError, parseCsv } from "./schema";

export interface PlotSpec {
  kind: FigureKind;
  input: string;
  output: string;
  title?: string;
}

export function renderSvgText(kind: FigureKind, csvText: string, opts: FigureOptions = {}): string {
  const rows = parseCsv(kind, csvText);
  return RENDERERS[kind](rows, opts);
}

export async function render(spec: PlotSpec): Promise<void> {
  if (!(spec.kind in SCHEMAS)) {
    throw new SchemaError(
      `unknown figure kind '${spec.kind}' (expected one of ${Object.keys(SCHEMAS).join(", ")})`,
    );
  }
  const csvText = await fs.readFile(spec.input, "utf-8");
  const svg = renderSvgText(spec.kind, csvText, { title: spec.title });
  const ext = path.extname(spec.output).toLowerCase();
  if (ext === ".svg") {
    await fs.writeFile(spec.output, svg, "utf-8");
  } else if (ext === ".png") {
    const png = await sharp(Buffer.from(svg)).png().toBuffer();
    await fs.writeFile(spec.output, png);
  } else {
    throw new SchemaError(`unsupported output extension '${ext}' (use .svg or .png)`);
  }
}
