/** Minimal SVG assembly: scales, axes, and document plumbing. */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const MARGINS: Margins = { top: 36, right: 70, bottom: 46, left: 58 };

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export class LinearScale {
  constructor(
    readonly lo: number,
    readonly hi: number,
    readonly rangeLo: number,
    readonly rangeHi: number,
  ) {}

  map(x: number): number {
    const f = (x - this.lo) / (this.hi - this.lo || 1);
    return this.rangeLo + f * (this.rangeHi - this.rangeLo);
  }

  ticks(n = 5): number[] {
    const span = this.hi - this.lo;
    if (span <= 0) return [this.lo];
    const step = niceStep(span / n);
    const start = Math.ceil(this.lo / step) * step;
    const out: number[] = [];
    for (let v = start; v <= this.hi + 1e-12 * span; v += step) {
      out.push(Number(v.toPrecision(12)));
    }
    return out;
  }
}

export class LogScale {
  constructor(
    readonly lo: number,
    readonly hi: number,
    readonly rangeLo: number,
    readonly rangeHi: number,
  ) {}

  map(x: number): number {
    const f = (Math.log10(x) - Math.log10(this.lo)) / (Math.log10(this.hi) - Math.log10(this.lo) || 1);
    return this.rangeLo + f * (this.rangeHi - this.rangeLo);
  }

  ticks(): number[] {
    const out: number[] = [];
    const d0 = Math.ceil(Math.log10(this.lo) - 1e-12);
    const d1 = Math.floor(Math.log10(this.hi) + 1e-12);
    for (let d = d0; d <= d1; d++) out.push(Math.pow(10, d));
    return out;
  }
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2 * mag;
  if (r < 7.5) return 5 * mag;
  return 10 * mag;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) return Number(v.toPrecision(6)).toString();
  return v.toExponential(0).replace("e", "e");
}

export interface Frame {
  width: number;
  height: number;
  plotLeft: number;
  plotRight: number;
  plotTop: number;
  plotBottom: number;
}

export function frame(width: number, height: number, m: Margins = MARGINS): Frame {
  return {
    width,
    height,
    plotLeft: m.left,
    plotRight: width - m.right,
    plotTop: m.top,
    plotBottom: height - m.bottom,
  };
}

export function xAxis(f: Frame, scale: LinearScale | LogScale, label: string): string {
  const parts: string[] = [];
  parts.push(
    `<line x1="${f.plotLeft}" y1="${f.plotBottom}" x2="${f.plotRight}" y2="${f.plotBottom}" stroke="black"/>`,
  );
  for (const v of scale.ticks()) {
    const x = scale.map(v);
    parts.push(`<line x1="${x.toFixed(2)}" y1="${f.plotBottom}" x2="${x.toFixed(2)}" y2="${f.plotBottom + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${x.toFixed(2)}" y="${f.plotBottom + 18}" font-size="11" text-anchor="middle">${fmtTick(v)}</text>`,
    );
  }
  const cx = (f.plotLeft + f.plotRight) / 2;
  parts.push(`<text x="${cx}" y="${f.height - 8}" font-size="12" text-anchor="middle">${esc(label)}</text>`);
  return parts.join("\n");
}

export function yAxis(f: Frame, scale: LinearScale | LogScale, label: string): string {
  const parts: string[] = [];
  parts.push(`<line x1="${f.plotLeft}" y1="${f.plotTop}" x2="${f.plotLeft}" y2="${f.plotBottom}" stroke="black"/>`);
  for (const v of scale.ticks()) {
    const y = scale.map(v);
    parts.push(`<line x1="${f.plotLeft - 5}" y1="${y.toFixed(2)}" x2="${f.plotLeft}" y2="${y.toFixed(2)}" stroke="black"/>`);
    parts.push(
      `<text x="${f.plotLeft - 8}" y="${(y + 4).toFixed(2)}" font-size="11" text-anchor="end">${fmtTick(v)}</text>`,
    );
  }
  const cy = (f.plotTop + f.plotBottom) / 2;
  parts.push(
    `<text x="14" y="${cy}" font-size="12" text-anchor="middle" transform="rotate(-90 14 ${cy})">${esc(label)}</text>`,
  );
  return parts.join("\n");
}

export function document(f: Frame, title: string, body: string): string {
  return [
    `<?xml version="1.0" encoding="UTF-8"?>`,
    `<svg xmlns="http://www.w3.org/2000/svg" width="${f.width}" height="${f.height}" viewBox="0 0 ${f.width} ${f.height}">`,
    `<rect width="${f.width}" height="${f.height}" fill="white"/>`,
    `<text x="${(f.plotLeft + f.plotRight) / 2}" y="22" font-size="14" text-anchor="middle" font-weight="bold">${esc(title)}</text>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
