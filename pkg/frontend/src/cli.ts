#!/usr/bin/env node
import * as fs from "fs";
import { SchemaError } from "./csv";
import { Kind, render, SCHEMAS } from "./render";

function usage(): void {
  console.error("usage: plots <cdf-compare|convergence|kernel-heatmap> --in FILE --out FILE [--title STR]");
}

export function main(argv: string[]): number {
  const args = argv.slice(2);
  if (args.length < 1) {
    usage();
    return 1;
  }
  const kind = args[0] as Kind;
  if (!(kind in SCHEMAS)) {
    console.error(`unknown kind: ${args[0]}`);
    usage();
    return 1;
  }
  let input: string | undefined;
  let output: string | undefined;
  let title: string | undefined;
  for (let i = 1; i < args.length; i += 2) {
    const key = args[i];
    const val = args[i + 1];
    if (val === undefined) {
      usage();
      return 1;
    }
    if (key === "--in") input = val;
    else if (key === "--out") output = val;
    else if (key === "--title") title = val;
    else {
      console.error(`unknown flag: ${key}`);
      usage();
      return 1;
    }
  }
  if (!input || !output) {
    usage();
    return 1;
  }
  try {
    const svg = render(kind, input, title);
    fs.writeFileSync(output, svg);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv));
}
