// Parser for the sweep-harness CSV interface. The header is a fixed
// contract; anything else is rejected loudly.

export const CSV_HEADER =
  "scheme,user,k_db,n,x_db,x_kind,ber_sim,ci99,bep_theory,bep_se,bits,wall_s";

export interface SweepRow {
  scheme: string;
  user: string;
  kDb: number;
  n: number;
  xDb: number;
  xKind: string;
  berSim: number;
  ci99: number;
  bepTheory: number;
  bepSe: number;
  bits: number;
  wallS: number;
}

/** Columns that may appear in --group, keyed by their CSV names. */
export const GROUPABLE: Record<string, (row: SweepRow) => string> = {
  scheme: (r) => r.scheme,
  user: (r) => r.user,
  k_db: (r) => fmtNum(r.kDb),
  n: (r) => String(r.n),
  x_kind: (r) => r.xKind,
};

export function fmtNum(x: number): string {
  return Number.isInteger(x) ? String(x) : String(x);
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0 || lines[0] !== CSV_HEADER) {
    throw new Error(
      `malformed header: expected "${CSV_HEADER}", got "${lines[0] ?? ""}"`,
    );
  }
  return lines.slice(1).map((line, i) => {
    const f = line.split(",");
    if (f.length !== 12) {
      throw new Error(`row ${i + 2}: expected 12 fields, got ${f.length}`);
    }
    return {
      scheme: f[0],
      user: f[1],
      kDb: num(f[2], i),
      n: num(f[3], i),
      xDb: num(f[4], i),
      xKind: f[5],
      berSim: num(f[6], i),
      ci99: num(f[7], i),
      bepTheory: num(f[8], i),
      bepSe: num(f[9], i),
      bits: num(f[10], i),
      wallS: num(f[11], i),
    };
  });
}

function num(field: string, rowIndex: number): number {
  // NaN is a legitimate value (e.g. no theory column for PD-NOMA rows)
  if (field === "nan") return NaN;
  const value = Number(field);
  if (field === "" || Number.isNaN(value)) {
    throw new Error(`row ${rowIndex + 2}: not a number: "${field}"`);
  }
  return value;
}
