/** The three figure kinds: radial overlay, smoothed heatmap, raw scatter. */

import { basename } from "node:path";

import { LIMIT_COLOR, SERIES_COLORS, rgbCss, viridis } from "./color.js";
import {
  readCloud,
  readDensityCurve,
  readPlanar,
  readRadial,
  type PlanarGrid,
} from "./csv.js";
import { encodePng } from "./png.js";
import { silvermanBandwidth, smoothGrid } from "./smoothing.js";
import { Frame, SvgDoc, drawAxes, trimNumber } from "./svg.js";

export type FigureKind = "radial_overlay" | "heatmap" | "scatter";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  /** limit-density curve file (radial overlay only) */
  densityInput?: string;
  output: string;
  /** Gaussian bandwidth in data units (heatmap only; Silverman when absent) */
  bandwidth?: number;
  /** half-width of the displayed square window (scatter; data max otherwise) */
  window?: number;
}

export interface RenderedFigure {
  bytes: Buffer;
  format: "svg" | "png";
}

const WIDTH = 640;
const HEIGHT = 480;
const MARGINS = { left: 56, right: 16, top: 28, bottom: 40 };

function frameFor(x0: number, x1: number, y0: number, y1: number): Frame {
  return new Frame(x0, x1, y0, y1, WIDTH, HEIGHT, MARGINS);
}

export function renderRadialOverlay(spec: FigureSpec): RenderedFigure {
  if (spec.inputs.length === 0) throw new Error("radial overlay needs histogram inputs");
  const hists = spec.inputs.map((p) => ({ name: basename(p), hist: readRadial(p) }));
  const curve = spec.densityInput ? readDensityCurve(spec.densityInput) : undefined;

  // empirical radial profile: bin mass per unit radius, drawn as steps
  const series = hists.map(({ name, hist }) => {
    const pts: Array<[number, number]> = [];
    for (let i = 0; i < hist.mass.length; i++) {
      const v = hist.mass[i] / (hist.rHi[i] - hist.rLo[i]);
      pts.push([hist.rLo[i], v], [hist.rHi[i], v]);
    }
    return { name, pts };
  });

  let xMax = Math.max(...hists.map(({ hist }) => hist.rHi[hist.rHi.length - 1]));
  let yMax = Math.max(...series.flatMap(({ pts }) => pts.map(([, v]) => v)));
  if (curve) {
    xMax = Math.max(xMax, ...curve.r);
    yMax = Math.max(yMax, ...curve.radialDensity);
  }
  const frame = frameFor(0, xMax, 0, yMax * 1.05);
  const doc = new SvgDoc(WIDTH, HEIGHT);
  series.forEach(({ pts }, i) => {
    doc.polyline(
      pts.map(([x, y]) => [frame.px(x), frame.py(y)]),
      SERIES_COLORS[i % SERIES_COLORS.length],
    );
  });
  if (curve) {
    doc.polyline(
      curve.r.map((r, i) => [frame.px(r), frame.py(curve.radialDensity[i])] as [number, number]),
      LIMIT_COLOR,
      2.0,
    );
  }
  drawAxes(doc, frame, "r", "mass per unit radius");
  series.forEach(({ name }, i) => {
    const y = MARGINS.top + 14 * i;
    doc.line(WIDTH - 170, y, WIDTH - 150, y, SERIES_COLORS[i % SERIES_COLORS.length], 2);
    doc.text(WIDTH - 144, y + 4, name.replace(/_radial\.(csv|json)$/, ""), 10, "start");
  });
  if (curve) {
    const y = MARGINS.top + 14 * series.length;
    doc.line(WIDTH - 170, y, WIDTH - 150, y, LIMIT_COLOR, 2);
    doc.text(WIDTH - 144, y + 4, "limit density", 10, "start");
  }
  return { bytes: Buffer.from(doc.render(), "utf8"), format: "svg" };
}

function smoothedGrid(spec: FigureSpec, grid: PlanarGrid): { values: number[][]; bw: number } {
  const bw =
    spec.bandwidth !== undefined
      ? spec.bandwidth
      : silvermanBandwidth(grid.xs, grid.ys, grid.density);
  const values = smoothGrid(grid.density, bw / grid.cellSize);
  return { values, bw };
}

export function renderHeatmap(spec: FigureSpec): RenderedFigure {
  if (spec.inputs.length !== 1) throw new Error("heatmap takes exactly one planar input");
  const grid = readPlanar(spec.inputs[0]);
  const { values } = smoothedGrid(spec, grid);
  const vMax = Math.max(...values.map((col) => Math.max(...col)));
  const scale = vMax > 0 ? 1 / vMax : 1;

  if (spec.output.endsWith(".png")) {
    // one pixel per cell; y points up, PNG rows go down
    const nx = grid.xs.length;
    const ny = grid.ys.length;
    const rgb = new Uint8Array(nx * ny * 3);
    for (let j = 0; j < ny; j++) {
      for (let i = 0; i < nx; i++) {
        const [r, g, b] = viridis(values[i][ny - 1 - j] * scale);
        const o = (j * nx + i) * 3;
        rgb[o] = r;
        rgb[o + 1] = g;
        rgb[o + 2] = b;
      }
    }
    return { bytes: encodePng(nx, ny, rgb), format: "png" };
  }

  const half = grid.cellSize / 2;
  const x0 = grid.xs[0] - half;
  const x1 = grid.xs[grid.xs.length - 1] + half;
  const frame = frameFor(x0, x1, grid.ys[0] - half, grid.ys[grid.ys.length - 1] + half);
  const doc = new SvgDoc(WIDTH, HEIGHT);
  const w = frame.px(grid.xs[0] + half) - frame.px(grid.xs[0] - half) + 0.25;
  const h = frame.py(grid.ys[0] - half) - frame.py(grid.ys[0] + half) + 0.25;
  for (let i = 0; i < grid.xs.length; i++) {
    for (let j = 0; j < grid.ys.length; j++) {
      doc.rect(
        frame.px(grid.xs[i] - half),
        frame.py(grid.ys[j] + half),
        w,
        h,
        rgbCss(viridis(values[i][j] * scale)),
      );
    }
  }
  drawAxes(doc, frame, "Re", "Im");
  doc.text(WIDTH - 20, MARGINS.top - 8, `max ${trimNumber(vMax)}`, 10, "end");
  return { bytes: Buffer.from(doc.render(), "utf8"), format: "svg" };
}

export function renderScatter(spec: FigureSpec): RenderedFigure {
  if (spec.inputs.length !== 1) throw new Error("scatter takes exactly one cloud input");
  const cloud = readCloud(spec.inputs[0]);
  const window =
    spec.window ??
    Math.max(1e-9, ...cloud.re.map(Math.abs), ...cloud.im.map(Math.abs));
  const frame = frameFor(-window, window, -window, window);
  const doc = new SvgDoc(WIDTH, HEIGHT);
  const radius = cloud.re.length > 20_000 ? 0.6 : 1.4;
  for (let i = 0; i < cloud.re.length; i++) {
    if (Math.abs(cloud.re[i]) > window || Math.abs(cloud.im[i]) > window) continue;
    doc.circle(frame.px(cloud.re[i]), frame.py(cloud.im[i]), radius, "#1f3b70", 0.55);
  }
  drawAxes(doc, frame, "Re", "Im");
  return { bytes: Buffer.from(doc.render(), "utf8"), format: "svg" };
}

export function render(spec: FigureSpec): RenderedFigure {
  switch (spec.kind) {
    case "radial_overlay":
      return renderRadialOverlay(spec);
    case "heatmap":
      return renderHeatmap(spec);
    case "scatter":
      return renderScatter(spec);
  }
}
