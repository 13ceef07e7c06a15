#!/usr/bin/env node
/**
 * gdpolyak-figures CLI
 *
 *   render --figure <fig1|fig2|fig3|fig4> --in <bundle-dir> --out <file.svg>
 *
 * Reads the CSV bundle written by `gdpolyak figure-data` and writes one SVG.
 * If any expected input file is missing or malformed the command exits
 * nonzero and does not create the output file.
 */

import { writeFile } from "fs/promises";
import { pathToFileURL } from "url";

import { renderFigure, UnknownFigure, FIGURE_IDS } from "./figures.js";

const USAGE =
  `usage: gdpolyak-figures render --figure <${FIGURE_IDS.join("|")}> ` +
  `--in <bundle-dir> --out <file.svg>`;

function parseArgs(argv: string[]): { figure: string; inDir: string; out: string } {
  if (argv[0] !== "render") {
    throw new Error(`unknown command "${argv[0] ?? ""}"\n${USAGE}`);
  }
  const opts: Record<string, string> = {};
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(`bad argument "${flag}"\n${USAGE}`);
    }
    opts[flag.slice(2)] = value;
  }
  for (const key of ["figure", "in", "out"]) {
    if (!(key in opts)) throw new Error(`missing --${key}\n${USAGE}`);
  }
  return { figure: opts["figure"], inDir: opts["in"], out: opts["out"] };
}

export async function runCli(argv: string[]): Promise<number> {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }

  let svg: string;
  try {
    // Render fully before touching the output path: a missing or malformed
    // input must not leave a partial output file behind.
    svg = await renderFigure(args.figure, args.inDir);
  } catch (err) {
    const e = err as NodeJS.ErrnoException;
    if (err instanceof UnknownFigure) {
      console.error(e.message);
      return 2;
    }
    console.error(`cannot render ${args.figure}: ${e.message}`);
    return 1;
  }

  await writeFile(args.out, svg);
  console.log(`SVG → ${args.out}`);
  return 0;
}

const isMain =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (isMain) {
  runCli(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
