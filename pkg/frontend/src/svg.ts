/**
 * Minimal deterministic SVG chart primitives: linear scales, axes with tick
 * labels, polylines with markers, and a legend. Numbers are formatted with a
 * fixed precision so identical inputs yield identical bytes.
 */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
  "#bcbd22",
  "#e377c2",
];

const fmt = (x: number): string => {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  return Number(x.toFixed(2)).toString();
};

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class LinearScale {
  constructor(
    readonly d0: number,
    readonly d1: number,
    readonly r0: number,
    readonly r1: number,
  ) {}

  map(x: number): number {
    if (this.d1 === this.d0) return (this.r0 + this.r1) / 2;
    return this.r0 + ((x - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }

  /** Round-valued ticks covering the domain, at most `n` of them. */
  ticks(n = 6): number[] {
    if (this.d1 === this.d0) return [this.d0];
    const span = this.d1 - this.d0;
    const step = Math.pow(10, Math.floor(Math.log10(span / n)));
    const candidates = [step, 2 * step, 2.5 * step, 5 * step, 10 * step];
    const chosen = candidates.find((s) => span / s <= n) ?? 10 * step;
    const out: number[] = [];
    for (
      let t = Math.ceil(this.d0 / chosen) * chosen;
      t <= this.d1 + 1e-9 * span;
      t += chosen
    ) {
      out.push(Number(t.toPrecision(12)));
    }
    return out;
  }
}

/** Pad a [lo, hi] extent by a fraction on both sides (never collapses). */
export function padded(lo: number, hi: number, frac = 0.05): [number, number] {
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  const pad = (hi - lo) * frac;
  return [lo - pad, hi + pad];
}

export class SvgChart {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
    readonly margins: Margins = { top: 34, right: 24, bottom: 44, left: 62 },
  ) {}

  get plotLeft(): number {
    return this.margins.left;
  }
  get plotRight(): number {
    return this.width - this.margins.right;
  }
  get plotTop(): number {
    return this.margins.top;
  }
  get plotBottom(): number {
    return this.height - this.margins.bottom;
  }

  title(text: string): void {
    this.parts.push(
      `<text x="${fmt(this.width / 2)}" y="20" text-anchor="middle" font-size="14" font-weight="bold">${esc(text)}</text>`,
    );
  }

  axes(
    x: LinearScale,
    y: LinearScale,
    xLabel: string,
    yLabel: string,
    xTickValues?: number[],
    xTickLabels?: string[],
  ): void {
    const xs = xTickValues ?? x.ticks();
    const ys = y.ticks();
    for (const t of ys) {
      const py = y.map(t);
      this.parts.push(
        `<line x1="${fmt(this.plotLeft)}" y1="${fmt(py)}" x2="${fmt(this.plotRight)}" y2="${fmt(py)}" stroke="#ddd" stroke-width="0.5"/>`,
        `<text x="${fmt(this.plotLeft - 8)}" y="${fmt(py + 3.5)}" text-anchor="end" font-size="10">${esc(String(t))}</text>`,
      );
    }
    xs.forEach((t, i) => {
      const px = x.map(t);
      const label = xTickLabels ? xTickLabels[i] : String(t);
      this.parts.push(
        `<line x1="${fmt(px)}" y1="${fmt(this.plotBottom)}" x2="${fmt(px)}" y2="${fmt(this.plotBottom + 4)}" stroke="#333"/>`,
        `<text x="${fmt(px)}" y="${fmt(this.plotBottom + 16)}" text-anchor="middle" font-size="10">${esc(label)}</text>`,
      );
    });
    this.parts.push(
      `<rect x="${fmt(this.plotLeft)}" y="${fmt(this.plotTop)}" width="${fmt(this.plotRight - this.plotLeft)}" height="${fmt(this.plotBottom - this.plotTop)}" fill="none" stroke="#333"/>`,
      `<text x="${fmt((this.plotLeft + this.plotRight) / 2)}" y="${fmt(this.height - 10)}" text-anchor="middle" font-size="12">${esc(xLabel)}</text>`,
      `<text transform="translate(14,${fmt((this.plotTop + this.plotBottom) / 2)}) rotate(-90)" text-anchor="middle" font-size="12">${esc(yLabel)}</text>`,
    );
  }

  polyline(
    points: Array<[number, number]>,
    color: string,
    opts: { dash?: string; markers?: boolean; width?: number } = {},
  ): void {
    if (points.length === 0) return;
    const attr = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
    const pts = points.map(([px, py]) => `${fmt(px)},${fmt(py)}`).join(" ");
    if (points.length > 1) {
      this.parts.push(
        `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${opts.width ?? 1.5}"${attr}/>`,
      );
    }
    if (opts.markers || points.length === 1) {
      for (const [px, py] of points) {
        this.parts.push(`<circle cx="${fmt(px)}" cy="${fmt(py)}" r="2.5" fill="${color}"/>`);
      }
    }
  }

  legend(entries: Array<{ label: string; color: string; dash?: string }>): void {
    const x0 = this.plotRight - 150;
    let y0 = this.plotTop + 12;
    for (const { label, color, dash } of entries) {
      const attr = dash ? ` stroke-dasharray="${dash}"` : "";
      this.parts.push(
        `<line x1="${fmt(x0)}" y1="${fmt(y0 - 3)}" x2="${fmt(x0 + 22)}" y2="${fmt(y0 - 3)}" stroke="${color}" stroke-width="1.5"${attr}/>`,
        `<text x="${fmt(x0 + 28)}" y="${fmt(y0)}" font-size="10">${esc(label)}</text>`,
      );
      y0 += 14;
    }
  }

  note(text: string): void {
    this.parts.push(
      `<text x="${fmt((this.plotLeft + this.plotRight) / 2)}" y="${fmt((this.plotTop + this.plotBottom) / 2)}" text-anchor="middle" font-size="12" fill="#888">${esc(text)}</text>`,
    );
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}
