import { describe, expect, it } from "vitest";

import { parseBeta, parseDensity, parseVariance, SchemaError } from "../src/csv";

describe("csv parsing", () => {
  it("parses a density table", () => {
    const rows = parseDensity("t,site,value\n0.0,1,0.5\n0.0,2,1.0\n");
    expect(rows).toHaveLength(2);
    expect(rows[1].site).toBe(2);
    expect(rows[1].value).toBe(1.0);
  });

  it("names missing and unexpected columns", () => {
    expect(() => parseDensity("t,position,value\n0,1,0.5\n")).toThrowError(/missing \[site\]/);
    expect(() => parseDensity("t,position,value\n0,1,0.5\n")).toThrowError(/unexpected \[position\]/);
  });

  it("reports unparseable numbers with row and column", () => {
    expect(() => parseVariance("t,sigma,delta_sigma,norm,energy\n0,a,0,1,0\n")).toThrowError(
      /row 2, column 'sigma'/,
    );
  });

  it("rejects ragged rows", () => {
    expect(() => parseBeta("window_lo,window_hi,beta,r_squared\n0.5,3.0,2.0\n")).toThrowError(SchemaError);
  });

  it("rejects empty files", () => {
    expect(() => parseDensity("")).toThrowError(/empty/);
  });
});
