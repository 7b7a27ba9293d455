import { AsymmetryRow, BetaRow, DensityRow, VarianceRow } from "./csv";
import { slice_color, viridis } from "./color";
import { LinearScale, LogScale, document as svgDocument, frame, xAxis, yAxis } from "./svg";

const LOG_FLOOR = 1e-9; // log axes are clipped below this

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

/** Density heatmap: time increases up the vertical axis, sites horizontal. */
export function renderHeatmap(rows: DensityRow[], title = "Rydberg density"): string {
  const times = uniqueSorted(rows.map((r) => r.t));
  const sites = uniqueSorted(rows.map((r) => r.site));
  const f = frame(640, 480);
  const x = new LinearScale(sites[0] - 0.5, sites[sites.length - 1] + 0.5, f.plotLeft, f.plotRight);
  const y = new LinearScale(times[0], times[times.length - 1] || 1, f.plotBottom, f.plotTop);
  const siteIndex = new Map(sites.map((s, i) => [s, i]));
  const timeIndex = new Map(times.map((t, i) => [t, i]));
  const cellW = (f.plotRight - f.plotLeft) / sites.length;
  const cellH = (f.plotBottom - f.plotTop) / Math.max(times.length - 1, 1);
  const cells: string[] = [];
  for (const r of rows) {
    const xi = siteIndex.get(r.site)!;
    const ti = timeIndex.get(r.t)!;
    const px = f.plotLeft + xi * cellW;
    const py = y.map(r.t) - cellH / 2;
    cells.push(
      `<rect x="${px.toFixed(2)}" y="${py.toFixed(2)}" width="${(cellW + 0.5).toFixed(2)}" ` +
        `height="${(cellH + 0.5).toFixed(2)}" fill="${viridis(r.value)}"/>`,
    );
  }
  // colour bar, fixed to the [0, 1] density scale
  const bar: string[] = [];
  const barX = f.plotRight + 18;
  for (let i = 0; i < 40; i++) {
    const v = 1 - i / 39;
    const py = f.plotTop + ((f.plotBottom - f.plotTop) * i) / 40;
    bar.push(
      `<rect x="${barX}" y="${py.toFixed(2)}" width="14" height="${((f.plotBottom - f.plotTop) / 40 + 0.5).toFixed(2)}" fill="${viridis(v)}"/>`,
    );
  }
  bar.push(`<text x="${barX + 18}" y="${f.plotTop + 6}" font-size="10">1</text>`);
  bar.push(`<text x="${barX + 18}" y="${f.plotBottom + 2}" font-size="10">0</text>`);
  const body = [
    cells.join("\n"),
    bar.join("\n"),
    xAxis(f, x, "site"),
    yAxis(f, y, "time (1/rabi)"),
  ].join("\n");
  return svgDocument(f, title, body);
}

/** Log-log variance growth with fitted power-law overlays and annotations. */
export function renderLogLogVariance(
  rows: VarianceRow[],
  betas: BetaRow[] = [],
  title = "variance growth",
): string {
  const pts = rows.filter((r) => r.t > 0 && r.delta_sigma > LOG_FLOOR);
  if (pts.length === 0) {
    const f = frame(560, 440);
    return svgDocument(f, title, `<text x="200" y="200" font-size="12">no points above the log floor</text>`);
  }
  const f = frame(560, 440);
  const ts = pts.map((r) => r.t);
  const ds = pts.map((r) => r.delta_sigma);
  const x = new LogScale(Math.min(...ts), Math.max(...ts), f.plotLeft, f.plotRight);
  const y = new LogScale(Math.max(Math.min(...ds), LOG_FLOOR), Math.max(...ds), f.plotBottom, f.plotTop);
  const dots = pts
    .map((r) => `<circle cx="${x.map(r.t).toFixed(2)}" cy="${y.map(r.delta_sigma).toFixed(2)}" r="2.4" fill="rgb(40,60,150)"/>`)
    .join("\n");
  const overlays: string[] = [];
  betas.forEach((b, i) => {
    const inWin = pts.filter((r) => r.t >= b.window_lo && r.t <= b.window_hi);
    if (inWin.length === 0) return;
    const anchor = inWin[Math.floor(inWin.length / 2)];
    const t0 = Math.max(b.window_lo, Math.min(...ts));
    const t1 = Math.min(b.window_hi, Math.max(...ts));
    const val = (t: number) => anchor.delta_sigma * Math.pow(t / anchor.t, b.beta);
    overlays.push(
      `<line x1="${x.map(t0).toFixed(2)}" y1="${y.map(Math.max(val(t0), LOG_FLOOR)).toFixed(2)}" ` +
        `x2="${x.map(t1).toFixed(2)}" y2="${y.map(Math.max(val(t1), LOG_FLOOR)).toFixed(2)}" ` +
        `stroke="${slice_color(i, Math.max(betas.length, 2))}" stroke-width="2" stroke-dasharray="6 3"/>`,
    );
    overlays.push(
      `<text x="${(x.map(t1) + 4).toFixed(2)}" y="${y.map(Math.max(val(t1), LOG_FLOOR)).toFixed(2)}" ` +
        `font-size="12" fill="${slice_color(i, Math.max(betas.length, 2))}">beta = ${b.beta.toFixed(2)}</text>`,
    );
  });
  const body = [
    dots,
    overlays.join("\n"),
    xAxis(f, x, "time (1/rabi)"),
    yAxis(f, y, "delta sigma"),
  ].join("\n");
  return svgDocument(f, title, body);
}

/** Reflection asymmetry per time slice. */
export function renderAsymmetry(rows: AsymmetryRow[], title = "expansion asymmetry"): string {
  const times = uniqueSorted(rows.map((r) => r.t));
  const js = uniqueSorted(rows.map((r) => r.j));
  const f = frame(560, 440);
  const values = rows.map((r) => r.delta_n);
  const span = Math.max(Math.max(...values.map(Math.abs)), 1e-12);
  const x = new LinearScale(js[0], js[js.length - 1] || 1, f.plotLeft, f.plotRight);
  const y = new LinearScale(-1.1 * span, 1.1 * span, f.plotBottom, f.plotTop);
  const zero = `<line x1="${f.plotLeft}" y1="${y.map(0).toFixed(2)}" x2="${f.plotRight}" y2="${y.map(0).toFixed(2)}" stroke="#999" stroke-dasharray="3 3"/>`;
  const lines: string[] = [];
  times.forEach((t, i) => {
    const slice = rows.filter((r) => r.t === t).sort((a, b) => a.j - b.j);
    const path = slice.map((r, k) => `${k === 0 ? "M" : "L"}${x.map(r.j).toFixed(2)},${y.map(r.delta_n).toFixed(2)}`).join(" ");
    lines.push(`<path d="${path}" fill="none" stroke="${slice_color(i, times.length)}" stroke-width="1.6"/>`);
  });
  const legend = times
    .filter((_, i) => i % Math.max(1, Math.floor(times.length / 5)) === 0)
    .map((t, i) => `<text x="${f.plotRight - 64}" y="${f.plotTop + 14 + 14 * i}" font-size="10" fill="${slice_color(times.indexOf(t), times.length)}">t = ${t}</text>`)
    .join("\n");
  const body = [zero, lines.join("\n"), legend, xAxis(f, x, "j"), yAxis(f, y, "delta n_j")].join("\n");
  return svgDocument(f, title, body);
}
