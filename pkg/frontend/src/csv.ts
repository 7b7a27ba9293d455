import Papa from "papaparse";

export class SchemaError extends Error {}

export interface DensityRow {
  t: number;
  site: number;
  value: number;
}

export interface VarianceRow {
  t: number;
  sigma: number;
  delta_sigma: number;
  norm: number;
  energy: number;
}

export interface BetaRow {
  window_lo: number;
  window_hi: number;
  beta: number;
  r_squared: number;
}

export interface AsymmetryRow {
  t: number;
  j: number;
  delta_n: number;
}

/** Parse a CSV with an exact header; mismatches name the offending columns. */
export function parseTable(text: string, expected: string[], label: string): Record<string, number>[] {
  if (text.trim() === "") {
    throw new SchemaError(`${label}: empty file`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${label}: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new SchemaError(`${label}: empty file`);
  }
  const header = rows[0];
  const missing = expected.filter((c) => !header.includes(c));
  const extra = header.filter((c) => !expected.includes(c));
  if (missing.length > 0 || extra.length > 0) {
    throw new SchemaError(
      `${label}: header mismatch; missing [${missing.join(", ")}], unexpected [${extra.join(", ")}]`,
    );
  }
  const index = expected.map((c) => header.indexOf(c));
  const out: Record<string, number>[] = [];
  for (let i = 1; i < rows.length; i++) {
    const row = rows[i];
    if (row.length !== header.length) {
      throw new SchemaError(`${label}: row ${i + 1} has ${row.length} fields, expected ${header.length}`);
    }
    const rec: Record<string, number> = {};
    for (let c = 0; c < expected.length; c++) {
      const raw = row[index[c]];
      const num = Number(raw);
      if (!Number.isFinite(num)) {
        throw new SchemaError(`${label}: row ${i + 1}, column '${expected[c]}': cannot parse '${raw}'`);
      }
      rec[expected[c]] = num;
    }
    out.push(rec);
  }
  return out;
}

export function parseDensity(text: string): DensityRow[] {
  return parseTable(text, ["t", "site", "value"], "density.csv") as unknown as DensityRow[];
}

export function parseVariance(text: string): VarianceRow[] {
  return parseTable(
    text,
    ["t", "sigma", "delta_sigma", "norm", "energy"],
    "variance.csv",
  ) as unknown as VarianceRow[];
}

export function parseBeta(text: string): BetaRow[] {
  return parseTable(text, ["window_lo", "window_hi", "beta", "r_squared"], "beta.csv") as unknown as BetaRow[];
}

export function parseAsymmetry(text: string): AsymmetryRow[] {
  return parseTable(text, ["t", "j", "delta_n"], "asymmetry.csv") as unknown as AsymmetryRow[];
}
