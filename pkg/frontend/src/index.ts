export { parseAsymmetry, parseBeta, parseDensity, parseVariance, parseTable, SchemaError } from "./csv";
export { renderAsymmetry, renderHeatmap, renderLogLogVariance } from "./panels";
export { renderJob, runJob } from "./cli";
export type { PlotJob } from "./cli";
export { viridis } from "./color";
