#!/usr/bin/env node
/**
 * Figure renderer for the cascade simulator's CSV outputs.
 *
 *   render --kind pattern_cut --in out/pattern_cut.csv --out figure.svg
 *
 * Kinds: pattern_cut, snr_sweep, asa_sweep. The output extension selects the
 * format (.svg or .png). Exit codes: 0 success, 1 I/O failure, 2 usage or
 * schema error.
 */

import { render } from "./render";
import { FigureKind, SCHEMAS, SchemaError } from "./schema";

interface Args {
  kind: FigureKind;
  input: string;
  output: string;
  title?: string;
}

const USAGE =
  "usage: render --kind <pattern_cut|snr_sweep|asa_sweep> --in <csv> --out <svg|png> [--title <text>]";

export function parseArgs(argv: string[]): Args {
  if (argv.length === 0 || argv[0] !== "render") {
    throw new SchemaError(`expected the 'render' command\n${USAGE}`);
  }
  const values: Record<string, string> = {};
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new SchemaError(`malformed arguments near '${flag}'\n${USAGE}`);
    }
    values[flag.slice(2)] = value;
  }
  for (const required of ["kind", "in", "out"]) {
    if (!(required in values)) {
      throw new SchemaError(`missing --${required}\n${USAGE}`);
    }
  }
  if (!(values.kind in SCHEMAS)) {
    throw new SchemaError(
      `unknown figure kind '${values.kind}' (expected one of ${Object.keys(SCHEMAS).join(", ")})`,
    );
  }
  return {
    kind: values.kind as FigureKind,
    input: values.in,
    output: values.out,
    title: values.title,
  };
}

export async function main(argv: string[]): Promise<number> {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`riscade-figures: ${(err as Error).message}`);
    return 2;
  }
  try {
    await render({ kind: args.kind, input: args.input, output: args.output, title: args.title });
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`riscade-figures: ${err.message}`);
      return 2;
    }
    console.error(`riscade-figures: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

if (require.main === module) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
