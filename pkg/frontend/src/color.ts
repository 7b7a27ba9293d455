/** Compact viridis approximation; input clamped to [0, 1]. */

const STOPS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function viridis(x: number): string {
  const v = Math.max(0, Math.min(1, x));
  const pos = v * (STOPS.length - 1);
  const i = Math.min(STOPS.length - 2, Math.floor(pos));
  const f = pos - i;
  const rgb = [0, 1, 2].map((c) => Math.round(STOPS[i][c] * (1 - f) + STOPS[i + 1][c] * f));
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

/** Categorical colors for time slices and overlay lines. */
export function slice_color(i: number, n: number): string {
  if (n <= 1) return "rgb(60,80,180)";
  const f = i / (n - 1);
  const r = Math.round(40 + 180 * f);
  const g = Math.round(70 + 40 * (1 - f));
  const b = Math.round(200 - 150 * f);
  return `rgb(${r},${g},${b})`;
}
