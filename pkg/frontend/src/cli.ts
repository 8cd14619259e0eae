#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { CsvFormatError } from "./csv";
import { DirectionFilter, renderFigures } from "./render";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .scriptName("render_figures")
    .command("$0 <csv> <prefix>", "render sum-rate figures from a sweep CSV", (y) =>
      y
        .positional("csv", { type: "string", describe: "sweep results CSV" })
        .positional("prefix", { type: "string", describe: "output path prefix for the SVG panels" })
    )
    .option("direction", {
      choices: ["ul", "dl", "both"] as const,
      default: "both" as DirectionFilter,
      describe: "which link direction(s) to render",
    })
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    })
    .parseSync();

  try {
    const written = renderFigures(args.csv as string, args.prefix as string, args.direction);
    for (const file of written) {
      console.log(file);
    }
    return 0;
  } catch (err) {
    if (err instanceof CsvFormatError) {
      console.error(`render_figures: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  try {
    process.exit(main(hideBin(process.argv)));
  } catch (err) {
    console.error(`render_figures: ${(err as Error).message}`);
    process.exit(2);
  }
}
