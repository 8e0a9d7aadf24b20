/**
 * Minimal deterministic SVG scaffolding: fixed canvas, fixed-precision
 * coordinate formatting, no timestamps, no randomness.  The style seed
 * only rotates a fixed palette so identical inputs give identical bytes.
 */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { left: 64, right: 24, top: 36, bottom: 48 };

const PALETTE = ["#1f6fb2", "#d1495b", "#3d8f5f", "#8a5fb0", "#c88a2d", "#4a4a4a"];

export function color(i: number, styleSeed: number): string {
  return PALETTE[(i + styleSeed) % PALETTE.length];
}

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const s = v.toPrecision(6);
  return s.includes(".") || s.includes("e") ? s.replace(/\.?0+($|e)/, "$1") : s;
}

export interface Scale {
  (v: number): number;
  readonly min: number;
  readonly max: number;
}

export function linearScale(min: number, max: number, outMin: number, outMax: number): Scale {
  const span = max - min || 1;
  const f = ((v: number) => outMin + ((v - min) / span) * (outMax - outMin)) as Scale;
  Object.defineProperty(f, "min", { value: min });
  Object.defineProperty(f, "max", { value: max });
  return f;
}

export function ticks(min: number, max: number, count = 5): number[] {
  const span = max - min || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const start = Math.ceil(min / s) * s;
  const out: number[] = [];
  for (let v = start; v <= max + 1e-12 * span; v += s) out.push(Number(v.toPrecision(12)));
  return out;
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
      `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-family="monospace" font-size="14">${escapeXml(title)}</text>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1.5, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`);
  }

  text(x: number, y: number, s: string, anchor = "start", size = 11, fill = "#222222"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-family="monospace" font-size="${size}" fill="${fill}">${escapeXml(s)}</text>`,
    );
  }

  axes(xs: Scale, ys: Scale, xLabel: string, yLabel: string): void {
    const { left, top } = MARGIN;
    const right = WIDTH - MARGIN.right;
    const bottom = HEIGHT - MARGIN.bottom;
    this.line(left, bottom, right, bottom, "#000000", 1);
    this.line(left, top, left, bottom, "#000000", 1);
    for (const t of ticks(xs.min, xs.max)) {
      const x = xs(t);
      this.line(x, bottom, x, bottom + 4, "#000000", 1);
      this.text(x, bottom + 18, fmt(t), "middle");
    }
    for (const t of ticks(ys.min, ys.max)) {
      const y = ys(t);
      this.line(left - 4, y, left, y, "#000000", 1);
      this.text(left - 8, y + 4, fmt(t), "end");
    }
    this.text((left + right) / 2, HEIGHT - 10, xLabel, "middle", 12);
    this.parts.push(
      `<text x="16" y="${(top + bottom) / 2}" text-anchor="middle" font-family="monospace" font-size="12" transform="rotate(-90 16 ${(top + bottom) / 2})">${escapeXml(yLabel)}</text>`,
    );
  }

  render(): string {
    return [...this.parts, "</svg>"].join("\n") + "\n";
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
