/** Parsing and schema validation for the simulator's CSV outputs. */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  header: string[];
  rows: number[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split("\n").filter((ln) => ln.length > 0);
  if (lines.length === 0) throw new SchemaError("empty CSV file");
  const header = lines[0].split(",");
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(`row ${i} has ${parts.length} fields, expected ${header.length}`);
    }
    const row = parts.map(Number);
    if (row.some((v) => Number.isNaN(v))) {
      throw new SchemaError(`row ${i} contains a non-numeric field`);
    }
    rows.push(row);
  }
  return { header, rows };
}

function requireHeader(table: Table, expected: string[], what: string): void {
  if (
    table.header.length !== expected.length ||
    expected.some((h, i) => table.header[i] !== h)
  ) {
    throw new SchemaError(
      `${what}: expected columns ${expected.join(",")}, got ${table.header.join(",")}`,
    );
  }
}

export interface RadialHistogram {
  rLo: number[];
  rHi: number[];
  mass: number[];
  density: number[];
}

export interface PlanarGrid {
  /** sorted distinct cell-centre coordinates (the grid is square) */
  xs: number[];
  ys: number[];
  /** density[ix][iy] */
  density: number[][];
  cellSize: number;
}

export interface Cloud {
  re: number[];
  im: number[];
  weight: number;
}

export interface DensityCurve {
  r: number[];
  rho: number[];
  radialDensity: number[];
}

export function readTable(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"));
}

export function readRadial(path: string): RadialHistogram {
  const t = readTable(path);
  requireHeader(t, ["r_lo", "r_hi", "mass", "density"], path);
  return {
    rLo: t.rows.map((r) => r[0]),
    rHi: t.rows.map((r) => r[1]),
    mass: t.rows.map((r) => r[2]),
    density: t.rows.map((r) => r[3]),
  };
}

export function readPlanar(path: string): PlanarGrid {
  const t = readTable(path);
  requireHeader(t, ["cell_x", "cell_y", "mass", "density"], path);
  const xs = [...new Set(t.rows.map((r) => r[0]))].sort((a, b) => a - b);
  const ys = [...new Set(t.rows.map((r) => r[1]))].sort((a, b) => a - b);
  if (xs.length * ys.length !== t.rows.length) {
    throw new SchemaError(`${path}: cells do not form a full grid`);
  }
  const xi = new Map(xs.map((v, i) => [v, i]));
  const yi = new Map(ys.map((v, i) => [v, i]));
  const density = xs.map(() => new Array<number>(ys.length).fill(0));
  for (const row of t.rows) {
    density[xi.get(row[0])!][yi.get(row[1])!] = row[3];
  }
  const cellSize = xs.length > 1 ? xs[1] - xs[0] : 1;
  return { xs, ys, density, cellSize };
}

export function readCloud(path: string): Cloud {
  const t = readTable(path);
  requireHeader(t, ["re", "im", "weight"], path);
  return {
    re: t.rows.map((r) => r[0]),
    im: t.rows.map((r) => r[1]),
    weight: t.rows.length > 0 ? t.rows[0][2] : 1,
  };
}

export function readDensityCurve(path: string): DensityCurve {
  const t = readTable(path);
  requireHeader(t, ["r", "rho", "radial_density"], path);
  return {
    r: t.rows.map((r) => r[0]),
    rho: t.rows.map((r) => r[1]),
    radialDensity: t.rows.map((r) => r[2]),
  };
}
