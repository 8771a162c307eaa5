// Pure figure model: rows -> grouped series with a log-10 BER axis.
// Everything here is deterministic in the CSV content, so re-rendering the
// same file yields the identical figure.

import { GROUPABLE, SweepRow, fmtNum } from "./csv";

export interface FigureSpec {
  xKind: "delta_db" | "gamma_bar_db";
  groupBy: string[];
  yFloor: number;
}

export interface SeriesPoint {
  x: number;
  berSim: number;
  ci99: number;
  bepTheory: number;
  /** true when ber_sim is exactly 0 and sits clamped at the y floor */
  floored: boolean;
}

export interface Series {
  key: string;
  label: string;
  points: SeriesPoint[];
}

export interface Figure {
  xKind: string;
  xLabel: string;
  yFloor: number;
  series: Series[];
  xDomain: [number, number];
  /** decade exponents, inclusive */
  yDecades: [number, number];
}

export const DEFAULT_Y_FLOOR = 1e-6;

export function buildFigure(rows: SweepRow[], spec: FigureSpec): Figure {
  const missing = spec.groupBy.filter((c) => !(c in GROUPABLE));
  if (missing.length > 0) {
    throw new Error(
      `unknown group column(s): ${missing.join(", ")} ` +
        `(known: ${Object.keys(GROUPABLE).join(", ")})`,
    );
  }
  if (!(spec.yFloor > 0)) {
    throw new Error(`y floor must be positive, got ${spec.yFloor}`);
  }
  const selected = rows.filter((r) => r.xKind === spec.xKind);
  if (selected.length === 0) {
    throw new Error(`empty selection: no rows with x_kind = ${spec.xKind}`);
  }

  const groups = new Map<string, SweepRow[]>();
  for (const row of selected) {
    const key = spec.groupBy.map((c) => GROUPABLE[c](row)).join("|");
    const bucket = groups.get(key);
    if (bucket) bucket.push(row);
    else groups.set(key, [row]);
  }

  const series: Series[] = [...groups.entries()]
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([key, bucket]) => ({
      key,
      label: spec.groupBy
        .map((c, i) => `${c}=${key.split("|")[i]}`)
        .join(" "),
      points: bucket
        .slice()
        .sort((a, b) => a.xDb - b.xDb)
        .map((r) => ({
          x: r.xDb,
          berSim: r.berSim === 0 ? spec.yFloor : r.berSim,
          ci99: r.ci99,
          bepTheory: r.bepTheory,
          floored: r.berSim === 0,
        })),
    }));

  const xs = selected.map((r) => r.xDb);
  const ys = series.flatMap((s) =>
    s.points.flatMap((p) =>
      [p.berSim, Number.isNaN(p.bepTheory) ? p.berSim : p.bepTheory].map(
        (v) => Math.max(v, spec.yFloor),
      ),
    ),
  );
  const yLo = Math.floor(Math.log10(Math.min(...ys, spec.yFloor)));
  const yHi = Math.ceil(Math.log10(Math.max(...ys, spec.yFloor * 10)));
  return {
    xKind: spec.xKind,
    xLabel: spec.xKind === "delta_db" ? "delta [dB]" : "average SNR [dB]",
    yFloor: spec.yFloor,
    series,
    xDomain: [Math.min(...xs), Math.max(...xs)],
    yDecades: [yLo, yHi === yLo ? yLo + 1 : yHi],
  };
}

export function seriesCount(fig: Figure): number {
  return fig.series.length;
}

export function seriesLabelFor(groupBy: string[], row: SweepRow): string {
  return groupBy.map((c) => `${c}=${GROUPABLE[c](row)}`).join(" ");
}

export { fmtNum };
