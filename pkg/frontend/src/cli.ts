/**
 * Batch renderer: experiment-record CSV in, deterministic SVG out.
 *
 * Exit codes: 0 rendered, 1 bad arguments, 2 schema mismatch (the column
 * diff is printed to stderr).
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { renderFigure, type FigureKind } from "./figures.js";
import { SchemaError, parseRecords } from "./schema.js";

const KINDS: FigureKind[] = ["trace", "slope", "hist", "gn"];

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        input: { type: "string", short: "i", multiple: true },
        kind: { type: "string", short: "k" },
        output: { type: "string", short: "o" },
        "style-seed": { type: "string", default: "0" },
        title: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (e) {
    console.error(`argument error: ${(e as Error).message}`);
    return 1;
  }
  if (args.values.help) {
    console.log(
      "usage: render --input records.csv [--input more.csv] --kind trace|slope|hist|gn " +
        "--output figure.svg [--style-seed N] [--title TEXT]",
    );
    return 0;
  }
  const inputs = args.values.input ?? [];
  const kind = args.values.kind as FigureKind | undefined;
  const output = args.values.output;
  if (inputs.length === 0 || !kind || !output) {
    console.error("required: --input, --kind, --output (see --help)");
    return 1;
  }
  if (!KINDS.includes(kind)) {
    console.error(`unknown figure kind ${JSON.stringify(kind)}; expected ${KINDS.join("|")}`);
    return 1;
  }
  const styleSeed = Number(args.values["style-seed"]);
  if (!Number.isInteger(styleSeed) || styleSeed < 0) {
    console.error("--style-seed must be a nonnegative integer");
    return 1;
  }
  try {
    const rows = inputs.flatMap((p) => parseRecords(readFileSync(p, "utf-8")));
    const svg = renderFigure(rows, { kind, styleSeed, title: args.values.title });
    writeFileSync(output, svg);
    console.log(`${kind} figure: ${rows.length} rows -> ${output}`);
    return 0;
  } catch (e) {
    if (e instanceof SchemaError) {
      console.error(e.message);
      return 2;
    }
    console.error(`render error: ${(e as Error).message}`);
    return 2;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
