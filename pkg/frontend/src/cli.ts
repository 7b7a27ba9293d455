#!/usr/bin/env node
import * as fs from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { parseAsymmetry, parseBeta, parseDensity, parseVariance, SchemaError } from "./csv";
import { renderAsymmetry, renderHeatmap, renderLogLogVariance } from "./panels";

export interface PlotJob {
  kind: "heatmap" | "loglog-variance" | "asymmetry";
  inputs: string[];
  output: string;
}

/** Render one job to its output path; re-rendering is idempotent. */
export function runJob(job: PlotJob): void {
  fs.writeFileSync(job.output, renderJob(job.kind, job.inputs));
}

export function renderJob(kind: string, inputs: string[]): string {
  switch (kind) {
    case "heatmap": {
      const rows = parseDensity(fs.readFileSync(inputs[0], "utf8"));
      return renderHeatmap(rows);
    }
    case "loglog-variance": {
      const rows = parseVariance(fs.readFileSync(inputs[0], "utf8"));
      const betas = inputs[1] ? parseBeta(fs.readFileSync(inputs[1], "utf8")) : [];
      return renderLogLogVariance(rows, betas);
    }
    case "asymmetry": {
      const rows = parseAsymmetry(fs.readFileSync(inputs[0], "utf8"));
      return renderAsymmetry(rows);
    }
    default:
      throw new SchemaError(`unknown panel kind '${kind}'`);
  }
}

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option("kind", {
      choices: ["heatmap", "loglog-variance", "asymmetry"] as const,
      demandOption: true,
      describe: "panel to render",
    })
    .option("in", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "input CSV path(s); loglog-variance takes variance.csv [beta.csv]",
    })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .strict()
    .parseSync();
  try {
    runJob({ kind: args.kind, inputs: args.in as string[], output: args.out });
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(hideBin(process.argv)));
}
