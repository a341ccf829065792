/** Minimal deterministic SVG document builder. */

export interface Margins {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

const FMT = (v: number): string => {
  const s = v.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
};

export function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  polyline(points: Array<[number, number]>, stroke: string, strokeWidth = 1.5): void {
    const pts = points.map(([x, y]) => `${FMT(x)},${FMT(y)}`).join(" ");
    this.parts.push(
      `<polyline fill="none" stroke="${stroke}" stroke-width="${strokeWidth}" points="${pts}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${FMT(x1)}" y1="${FMT(y1)}" x2="${FMT(x2)}" y2="${FMT(y2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${FMT(x)}" y="${FMT(y)}" width="${FMT(w)}" height="${FMT(h)}" fill="${fill}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string, opacity = 1): void {
    const op = opacity < 1 ? ` fill-opacity="${opacity}"` : "";
    this.parts.push(`<circle cx="${FMT(cx)}" cy="${FMT(cy)}" r="${FMT(r)}" fill="${fill}"${op}/>`);
  }

  text(x: number, y: number, content: string, size = 11, anchor = "middle"): void {
    this.parts.push(
      `<text x="${FMT(x)}" y="${FMT(y)}" font-family="sans-serif" font-size="${size}" text-anchor="${anchor}">${escapeText(content)}</text>`,
    );
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
      `<rect x="0" y="0" width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

/** Affine map from data coordinates to pixel coordinates (y flipped). */
export class Frame {
  constructor(
    readonly x0: number,
    readonly x1: number,
    readonly y0: number,
    readonly y1: number,
    readonly width: number,
    readonly height: number,
    readonly margins: Margins,
  ) {}

  px(x: number): number {
    const inner = this.width - this.margins.left - this.margins.right;
    return this.margins.left + ((x - this.x0) / (this.x1 - this.x0)) * inner;
  }

  py(y: number): number {
    const inner = this.height - this.margins.top - this.margins.bottom;
    return this.height - this.margins.bottom - ((y - this.y0) / (this.y1 - this.y0)) * inner;
  }
}

export function niceTicks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const rawStep = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const mult of [1, 2, 2.5, 5, 10]) {
    if (mag * mult >= rawStep) {
      step = mag * mult;
      break;
    }
  }
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
    ticks.push(Math.abs(t) < step / 1e6 ? 0 : t);
  }
  return ticks;
}

export function drawAxes(
  doc: SvgDoc,
  frame: Frame,
  xLabel: string,
  yLabel: string,
): void {
  const xa = frame.py(frame.y0);
  const ya = frame.px(frame.x0);
  doc.line(frame.px(frame.x0), xa, frame.px(frame.x1), xa, "black");
  doc.line(ya, frame.py(frame.y0), ya, frame.py(frame.y1), "black");
  for (const t of niceTicks(frame.x0, frame.x1)) {
    const x = frame.px(t);
    doc.line(x, xa, x, xa + 4, "black");
    doc.text(x, xa + 16, trimNumber(t));
  }
  for (const t of niceTicks(frame.y0, frame.y1)) {
    const y = frame.py(t);
    doc.line(ya - 4, y, ya, y, "black");
    doc.text(ya - 7, y + 3.5, trimNumber(t), 11, "end");
  }
  doc.text((frame.px(frame.x0) + frame.px(frame.x1)) / 2, frame.height - 6, xLabel);
  doc.text(14, frame.margins.top - 8, yLabel, 11, "start");
}

export function trimNumber(v: number): string {
  const s = v.toPrecision(4);
  return String(Number(s));
}
