// CLI: render --csv <path> --x delta_db --group user,n,k_db --out fig.svg
// Exit codes: 0 success, 1 data/render error, 2 usage error.

import * as fs from "fs";
import { parseSweepCsv } from "./csv";
import { DEFAULT_Y_FLOOR, buildFigure } from "./figure";
import { renderSvg } from "./svg";

const USAGE =
  "usage: render --csv <path> --out <path.svg> " +
  "[--x delta_db|gamma_bar_db] [--group user,n,k_db] [--y-floor 1e-6]";

interface Args {
  csv: string;
  out: string;
  x: "delta_db" | "gamma_bar_db";
  group: string[];
  yFloor: number;
}

export function parseArgs(argv: string[]): Args {
  if (argv[0] !== "render") {
    throw new UsageError(`unknown command "${argv[0] ?? ""}"\n${USAGE}`);
  }
  const opts = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new UsageError(`bad argument "${flag}"\n${USAGE}`);
    }
    opts.set(flag.slice(2), value);
  }
  const known = new Set(["csv", "out", "x", "group", "y-floor"]);
  for (const key of opts.keys()) {
    if (!known.has(key)) throw new UsageError(`unknown flag --${key}\n${USAGE}`);
  }
  const csv = opts.get("csv");
  const out = opts.get("out");
  if (!csv || !out) throw new UsageError(`--csv and --out are required\n${USAGE}`);
  const x = opts.get("x") ?? "delta_db";
  if (x !== "delta_db" && x !== "gamma_bar_db") {
    throw new UsageError(`--x must be delta_db or gamma_bar_db\n${USAGE}`);
  }
  const yFloor = Number(opts.get("y-floor") ?? DEFAULT_Y_FLOOR);
  return {
    csv,
    out,
    x,
    group: (opts.get("group") ?? "user,n,k_db").split(",").map((c) => c.trim()),
    yFloor,
  };
}

export class UsageError extends Error {}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 2;
  }
  try {
    const text = fs.readFileSync(args.csv, "utf-8");
    const rows = parseSweepCsv(text);
    const fig = buildFigure(rows, {
      xKind: args.x,
      groupBy: args.group,
      yFloor: args.yFloor,
    });
    const svg = renderSvg(fig);
    if (!args.out.endsWith(".svg")) {
      process.stderr.write(
        `note: output is SVG (vector); writing SVG content to ${args.out}\n`,
      );
    }
    fs.writeFileSync(args.out, svg);
    process.stdout.write(
      `wrote ${args.out}: ${fig.series.length} series, ` +
        `y decades [1e${fig.yDecades[0]}, 1e${fig.yDecades[1]}]\n`,
    );
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
