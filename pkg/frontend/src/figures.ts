/**
 * The three figure kinds, each a pure CSV-rows-to-SVG-string function.
 *
 * Pattern cuts: one curve per (model, polarization pair) over exit angle.
 * Size sweep: one curve per (frequency, strategy) over panel side.
 * Spread sweep: per-model mean SNR over the configured angle spreads, with
 * the per-seed scatter behind the means.
 */

import { FigureKind, Row } from "./schema";
import { LinearScale, PALETTE, SvgChart, padded } from "./svg";

export interface FigureOptions {
  title?: string;
  width?: number;
  height?: number;
}

type GroupKey = string;

function groupBy(rows: Row[], keyOf: (r: Row) => GroupKey): Map<GroupKey, Row[]> {
  const out = new Map<GroupKey, Row[]>();
  for (const row of rows) {
    const key = keyOf(row);
    const bucket = out.get(key);
    if (bucket === undefined) {
      out.set(key, [row]);
    } else {
      bucket.push(row);
    }
  }
  return out;
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

function emptyFigure(chart: SvgChart, xLabel: string, yLabel: string, title: string): string {
  chart.title(title);
  const x = new LinearScale(0, 1, chart.plotLeft, chart.plotRight);
  const y = new LinearScale(0, 1, chart.plotBottom, chart.plotTop);
  chart.axes(x, y, xLabel, yLabel);
  chart.note("no data rows");
  return chart.render();
}

export function renderPatternCut(rows: Row[], opts: FigureOptions = {}): string {
  const chart = new SvgChart(opts.width ?? 760, opts.height ?? 420);
  const title = opts.title ?? "Panel gain cut: phase models and polarizations";
  if (rows.length === 0) {
    return emptyFigure(chart, "exit zenith (deg, signed)", "relative gain (dB)", title);
  }
  const thetas = rows.map((r) => r.theta_out_deg as number);
  const gains = rows.map((r) => r.gain_db as number);
  // The cut floor is far below anything informative; clamp the view.
  const [gLo, gHi] = extent(gains.map((g) => Math.max(g, -80)));
  const x = new LinearScale(...padded(...extent(thetas), 0.02), chart.plotLeft, chart.plotRight);
  const y = new LinearScale(...padded(gLo, gHi), chart.plotBottom, chart.plotTop);

  chart.title(title);
  chart.axes(x, y, "exit zenith (deg, signed)", "relative gain (dB)");

  const groups = groupBy(rows, (r) => `${r.model} ${r.pol_in}${r.pol_out}`);
  const keys = [...groups.keys()].sort();
  const legend: Array<{ label: string; color: string; dash?: string }> = [];
  keys.forEach((key, i) => {
    const color = PALETTE[i % PALETTE.length];
    const dash = key.startsWith("ideal") ? "5,3" : undefined;
    const pts = groups
      .get(key)!
      .slice()
      .sort((a, b) => (a.theta_out_deg as number) - (b.theta_out_deg as number))
      .map(
        (r) =>
          [x.map(r.theta_out_deg as number), y.map(Math.max(r.gain_db as number, -80))] as [
            number,
            number,
          ],
      );
    chart.polyline(pts, color, { dash });
    legend.push({ label: key, color, dash });
  });
  chart.legend(legend);
  return chart.render();
}

export function renderSnrSweep(rows: Row[], opts: FigureOptions = {}): string {
  const chart = new SvgChart(opts.width ?? 760, opts.height ?? 420);
  const title = opts.title ?? "Received SNR vs panel size";
  if (rows.length === 0) {
    return emptyFigure(chart, "panel side (elements)", "SNR (dB)", title);
  }
  // Panel sides grow geometrically; place them on a log2 axis.
  const sides = rows.map((r) => Math.log2(r.n_side as number));
  const snrs = rows.map((r) => r.snr_db as number);
  const x = new LinearScale(...padded(...extent(sides), 0.04), chart.plotLeft, chart.plotRight);
  const y = new LinearScale(...padded(...extent(snrs)), chart.plotBottom, chart.plotTop);

  chart.title(title);
  const tickSides = [...new Set(rows.map((r) => r.n_side as number))].sort((a, b) => a - b);
  chart.axes(
    x,
    y,
    "panel side (elements, log scale)",
    "SNR (dB)",
    tickSides.map((s) => Math.log2(s)),
    tickSides.map((s) => String(s)),
  );

  const groups = groupBy(rows, (r) => `${r.freq_ghz} GHz ${r.strategy}`);
  const keys = [...groups.keys()].sort();
  const legend: Array<{ label: string; color: string; dash?: string }> = [];
  keys.forEach((key, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = groups
      .get(key)!
      .slice()
      .sort((a, b) => (a.n_side as number) - (b.n_side as number))
      .map(
        (r) => [x.map(Math.log2(r.n_side as number)), y.map(r.snr_db as number)] as [number, number],
      );
    chart.polyline(pts, color, { markers: true });
    legend.push({ label: key, color });
  });
  chart.legend(legend);
  return chart.render();
}

export function renderAsaSweep(rows: Row[], opts: FigureOptions = {}): string {
  const chart = new SvgChart(opts.width ?? 760, opts.height ?? 420);
  const title = opts.title ?? "Received SNR vs incidence angle spread";
  if (rows.length === 0) {
    return emptyFigure(chart, "azimuth spread of arrival (deg)", "SNR (dB)", title);
  }
  const spreads = rows.map((r) => r.asa_deg as number);
  const snrs = rows.map((r) => r.snr_db as number);
  const x = new LinearScale(...padded(...extent(spreads), 0.08), chart.plotLeft, chart.plotRight);
  const y = new LinearScale(...padded(...extent(snrs)), chart.plotBottom, chart.plotTop);

  chart.title(title);
  const xTicks = [...new Set(spreads)].sort((a, b) => a - b);
  chart.axes(x, y, "azimuth spread of arrival (deg)", "SNR (dB)", xTicks);

  const byModel = groupBy(rows, (r) => String(r.model));
  const models = [...byModel.keys()].sort();
  const legend: Array<{ label: string; color: string; dash?: string }> = [];
  models.forEach((model, i) => {
    const color = PALETTE[i % PALETTE.length];
    const modelRows = byModel.get(model)!;
    // Faint per-seed scatter behind the mean curve.
    for (const r of modelRows) {
      const px = x.map(r.asa_deg as number) + (i === 0 ? -2 : 2);
      chart.polyline([[px, y.map(r.snr_db as number)]], color + "55");
    }
    const bySpread = groupBy(modelRows, (r) => String(r.asa_deg));
    const pts = [...bySpread.entries()]
      .map(([spread, bucket]) => {
        const mean = bucket.reduce((acc, r) => acc + (r.snr_db as number), 0) / bucket.length;
        return [Number(spread), mean] as [number, number];
      })
      .sort((a, b) => a[0] - b[0])
      .map(([spread, mean]) => [x.map(spread), y.map(mean)] as [number, number]);
    chart.polyline(pts, color, { markers: true, width: 2 });
    legend.push({ label: `${model} (mean)`, color });
  });
  chart.legend(legend);
  return chart.render();
}

export const RENDERERS: Record<FigureKind, (rows: Row[], opts?: FigureOptions) => string> = {
  pattern_cut: renderPatternCut,
  snr_sweep: renderSnrSweep,
  asa_sweep: renderAsaSweep,
};
