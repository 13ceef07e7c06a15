import { describe, expect, it } from "vitest";

import { parseTrace, parseSurface, parseRavine } from "../src/csv.js";

const TRACE = [
  "k,f,grad_norm,R,step,dist,G",
  "0,0.5,1.4142135623730951,0.3968502629920499,polyak,0.70710678118654757,",
  "1,0.03125,0.35355339059327379,0.12599210498948732,gd,0.35355339059327379,0.125",
  "2,0.0078125,0.1767766952966369,0.078745066189285764,,0.25,",
].join("\n");

describe("parseTrace", () => {
  it("round-trips the trace schema", () => {
    const rows = parseTrace(TRACE);
    expect(rows).toHaveLength(3);
    expect(rows[0].k).toBe(0);
    expect(rows[0].step).toBe("polyak");
    expect(rows[0].G).toBeNull();
    expect(rows[1].G).toBeCloseTo(0.125, 15);
    expect(rows[2].step).toBe("");
    expect(rows[1].dist).toBe(0.35355339059327379);
  });

  it("rejects a wrong header", () => {
    expect(() => parseTrace("k,f,grad\n0,1,2")).toThrow(/bad trace header/);
  });

  it("rejects a non-numeric row", () => {
    expect(() => parseTrace("k,f,grad_norm,R,step,dist,G\nx,y,z,w,gd,q,")).toThrow(
      /bad trace row 1/
    );
  });
});

describe("parseSurface / parseRavine", () => {
  it("parses grid and curve files", () => {
    const surf = parseSurface("v,u,f\n-1,-1,2.5\n0,0,0\n1,1,2.5");
    expect(surf).toHaveLength(3);
    expect(surf[0]).toEqual({ v: -1, u: -1, f: 2.5 });

    const rav = parseRavine("v,u\n-1,-1\n0,0");
    expect(rav[1]).toEqual({ v: 0, u: 0 });
  });

  it("rejects wrong headers", () => {
    expect(() => parseSurface("a,b,c\n1,2,3")).toThrow(/bad surface header/);
    expect(() => parseRavine("v,u,f\n1,2,3")).toThrow(/bad ravine header/);
  });
});
