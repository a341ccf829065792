/** CLI: render simulator CSV outputs into figures.
 *
 * Usage:
 *   main.js radial  --hist H1.csv [H2.csv ...] [--density D.csv] --out FIG.svg
 *   main.js heatmap --input PLANAR.csv [--bandwidth H] --out FIG.{png,svg}
 *   main.js scatter --input CLOUD.csv [--window W] --out FIG.svg
 *
 * Exits 1 on usage errors and 2 on schema mismatches or I/O failures.
 */

import { writeFileSync } from "node:fs";

import { SchemaError } from "./csv.js";
import { render, type FigureSpec } from "./figures.js";

class UsageError extends Error {}

function parseArgs(argv: string[]): FigureSpec {
  if (argv.length === 0) throw new UsageError("missing subcommand (radial|heatmap|scatter)");
  const [cmd, ...rest] = argv;
  const flags = new Map<string, string[]>();
  let current: string | null = null;
  for (const tok of rest) {
    if (tok.startsWith("--")) {
      current = tok.slice(2);
      if (!flags.has(current)) flags.set(current, []);
    } else if (current !== null) {
      flags.get(current)!.push(tok);
    } else {
      throw new UsageError(`unexpected positional argument ${tok}`);
    }
  }
  const single = (name: string, required = false): string | undefined => {
    const vals = flags.get(name);
    if (!vals || vals.length === 0) {
      if (required) throw new UsageError(`--${name} is required`);
      return undefined;
    }
    if (vals.length > 1) throw new UsageError(`--${name} takes one value`);
    return vals[0];
  };
  const out = single("out", true)!;
  switch (cmd) {
    case "radial": {
      const hist = flags.get("hist") ?? [];
      if (hist.length === 0) throw new UsageError("radial needs --hist FILE [FILE ...]");
      return {
        kind: "radial_overlay",
        inputs: hist,
        densityInput: single("density"),
        output: out,
      };
    }
    case "heatmap": {
      const bandwidth = single("bandwidth");
      return {
        kind: "heatmap",
        inputs: [single("input", true)!],
        bandwidth: bandwidth === undefined ? undefined : Number(bandwidth),
        output: out,
      };
    }
    case "scatter": {
      const window = single("window");
      return {
        kind: "scatter",
        inputs: [single("input", true)!],
        window: window === undefined ? undefined : Number(window),
        output: out,
      };
    }
    default:
      throw new UsageError(`unknown subcommand ${cmd}`);
  }
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 1;
  }
  try {
    const figure = render(spec);
    writeFileSync(spec.output, figure.bytes);
    console.log(`wrote ${spec.output} (${figure.format}, ${figure.bytes.length} bytes)`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 2;
  }
}

if (process.argv[1] && process.argv[1].endsWith("main.js")) {
  process.exit(main(process.argv.slice(2)));
}
