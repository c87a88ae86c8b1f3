import { column, readCsv, requireColumns, SchemaError, Table } from "./csv";
import { Figure, linearScale, logScale, niceTicks, PALETTE } from "./svg";

export type Kind = "cdf-compare" | "convergence" | "kernel-heatmap";

export const SCHEMAS: Record<Kind, string[]> = {
  "cdf-compare": ["ell", "empirical", "exact", "fredholm", "abs_diff"],
  convergence: ["epsilon", "s", "discrete_det", "limit_det", "abs_diff"],
  "kernel-heatmap": ["index", "L", "chi", "peak"],
};

/** Overlay the empirical, exact, and Fredholm CDF columns as step lines. */
function renderCdfCompare(table: Table, title: string): string {
  const ell = column(table, "ell");
  const series: [string, number[]][] = [
    ["empirical", column(table, "empirical")],
    ["exact", column(table, "exact")],
    ["fredholm", column(table, "fredholm")],
  ];
  const fig = new Figure(title);
  const a = fig.plotArea();
  const xs = linearScale(Math.min(...ell), Math.max(...ell), a.x0, a.x1);
  const ys = linearScale(0, 1, a.y0, a.y1);
  fig.axes(xs, ys, "ell", "CDF", niceTicks(xs.min, xs.max), niceTicks(0, 1));
  series.forEach(([label, vals], i) => {
    const pts: [number, number][] = [];
    for (let k = 0; k < ell.length; k++) {
      if (k > 0) pts.push([xs(ell[k]), ys(vals[k - 1])]); // step
      pts.push([xs(ell[k]), ys(vals[k])]);
    }
    fig.polyline(pts, PALETTE[i], 1.8, i === 0 ? "" : i === 1 ? "6,3" : "2,3");
    for (let k = 0; k < ell.length; k++) fig.circle(xs(ell[k]), ys(vals[k]), 2.2, PALETTE[i]);
  });
  fig.legend(series.map(([label], i) => [label, PALETTE[i]] as [string, string]));
  return fig.render();
}

/** Per-epsilon sup |discrete - limit| on log-log axes. */
function renderConvergence(table: Table, title: string): string {
  const eps = column(table, "epsilon");
  const diff = column(table, "abs_diff");
  const sup = new Map<number, number>();
  for (let i = 0; i < eps.length; i++) {
    sup.set(eps[i], Math.max(sup.get(eps[i]) ?? 0, diff[i]));
  }
  const pairs = [...sup.entries()].sort((p, q) => p[0] - q[0]);
  const fig = new Figure(title);
  const a = fig.plotArea();
  const xvals = pairs.map((p) => p[0]);
  const yvals = pairs.map((p) => Math.max(p[1], 1e-16));
  const xs = logScale(Math.min(...xvals) / 1.3, Math.max(...xvals) * 1.3, a.x0, a.x1);
  const ys = logScale(Math.min(...yvals) / 2, Math.max(...yvals) * 2, a.y0, a.y1);
  const xticks = xvals;
  const yticks = [...new Set(yvals.map((v) => Math.pow(10, Math.floor(Math.log10(v)))))];
  fig.axes(xs, ys, "epsilon (log)", "sup |discrete - limit| (log)", xticks, yticks);
  fig.polyline(
    pairs.map((p) => [xs(p[0]), ys(Math.max(p[1], 1e-16))] as [number, number]),
    PALETTE[0],
    1.8
  );
  for (const p of pairs) fig.circle(xs(p[0]), ys(Math.max(p[1], 1e-16)), 3, PALETTE[0]);
  return fig.render();
}

/** Rasterize the joint (L, chi) sample counts as a grayscale cell grid. */
function renderKernelHeatmap(table: Table, title: string): string {
  const ls = column(table, "L");
  const cs = column(table, "chi");
  const lmax = Math.max(...ls, 1);
  const cmax = Math.max(...cs, 1);
  const counts = new Map<string, number>();
  let peak = 0;
  for (let i = 0; i < ls.length; i++) {
    const key = `${ls[i]},${cs[i]}`;
    const v = (counts.get(key) ?? 0) + 1;
    counts.set(key, v);
    peak = Math.max(peak, v);
  }
  const fig = new Figure(title);
  const a = fig.plotArea();
  const xs = linearScale(-0.5, lmax + 0.5, a.x0, a.x1);
  const ys = linearScale(-0.5, cmax + 0.5, a.y0, a.y1);
  const cw = xs(1) - xs(0);
  const ch = ys(1) - ys(0); // negative: y axis points up
  const keys = [...counts.keys()].sort();
  for (const key of keys) {
    const [l, c] = key.split(",").map(Number);
    const frac = counts.get(key)! / peak;
    const shade = Math.round(255 - 215 * Math.sqrt(frac));
    const hex = shade.toString(16).padStart(2, "0");
    fig.rect(xs(l - 0.5), ys(c + 0.5), cw, -ch, `#${hex}${hex}ff`);
  }
  fig.axes(xs, ys, "L", "chi", niceTicks(0, lmax), niceTicks(0, cmax));
  return fig.render();
}

export function render(kind: Kind, inputPath: string, title?: string): string {
  const table = readCsv(inputPath);
  requireColumns(table, SCHEMAS[kind]);
  const name = title ?? kind;
  switch (kind) {
    case "cdf-compare":
      return renderCdfCompare(table, name);
    case "convergence":
      return renderConvergence(table, name);
    case "kernel-heatmap":
      return renderKernelHeatmap(table, name);
    default:
      throw new SchemaError(`unknown kind ${kind as string}`);
  }
}
