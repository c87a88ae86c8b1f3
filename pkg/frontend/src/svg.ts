/** Minimal deterministic SVG scene builder: fixed styling, fixed float
 * formatting, no timestamps, so identical inputs give identical bytes. */

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 64, right: 24, top: 40, bottom: 48 };

export const PALETTE = ["#1f6b8b", "#d1495b", "#66a182", "#8d6a9f"];

export function fmt(x: number): string {
  if (!isFinite(x)) return "0";
  const s = x.toPrecision(6);
  return s.includes(".") ? s.replace(/\.?0+$/, "").replace(/\.?0+e/, "e") : s;
}

export interface Scale {
  (v: number): number;
  min: number;
  max: number;
}

export function linearScale(min: number, max: number, lo: number, hi: number): Scale {
  const span = max - min || 1;
  const f = ((v: number) => lo + ((v - min) / span) * (hi - lo)) as Scale;
  f.min = min;
  f.max = max;
  return f;
}

export function logScale(min: number, max: number, lo: number, hi: number): Scale {
  const lmin = Math.log10(min);
  const lmax = Math.log10(max);
  const span = lmax - lmin || 1;
  const f = ((v: number) => lo + ((Math.log10(v) - lmin) / span) * (hi - lo)) as Scale;
  f.min = min;
  f.max = max;
  return f;
}

export class Figure {
  parts: string[] = [];

  constructor(public title: string) {}

  plotArea(): { x0: number; x1: number; y0: number; y1: number } {
    return {
      x0: MARGIN.left,
      x1: WIDTH - MARGIN.right,
      y0: HEIGHT - MARGIN.bottom,
      y1: MARGIN.top,
    };
  }

  polyline(points: [number, number][], color: string, width = 1.5, dash = ""): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="${width}"${d} points="${pts}"/>`
    );
  }

  circle(x: number, y: number, r: number, color: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`
    );
  }

  text(x: number, y: number, s: string, anchor = "middle", size = 12): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-family="sans-serif" ` +
        `font-size="${size}" fill="#222">${escapeXml(s)}</text>`
    );
  }

  axes(xs: Scale, ys: Scale, xlabel: string, ylabel: string, xticks: number[], yticks: number[]): void {
    const a = this.plotArea();
    this.parts.push(
      `<line x1="${a.x0}" y1="${a.y0}" x2="${a.x1}" y2="${a.y0}" stroke="#222" stroke-width="1"/>`
    );
    this.parts.push(
      `<line x1="${a.x0}" y1="${a.y0}" x2="${a.x0}" y2="${a.y1}" stroke="#222" stroke-width="1"/>`
    );
    for (const t of xticks) {
      const px = xs(t);
      this.parts.push(`<line x1="${fmt(px)}" y1="${a.y0}" x2="${fmt(px)}" y2="${a.y0 + 5}" stroke="#222"/>`);
      this.text(px, a.y0 + 18, fmt(t));
    }
    for (const t of yticks) {
      const py = ys(t);
      this.parts.push(`<line x1="${a.x0 - 5}" y1="${fmt(py)}" x2="${a.x0}" y2="${fmt(py)}" stroke="#222"/>`);
      this.text(a.x0 - 8, py + 4, fmt(t), "end");
    }
    this.text((a.x0 + a.x1) / 2, HEIGHT - 12, xlabel);
    this.parts.push(
      `<text x="16" y="${(a.y0 + a.y1) / 2}" text-anchor="middle" font-family="sans-serif" ` +
        `font-size="12" fill="#222" transform="rotate(-90 16 ${(a.y0 + a.y1) / 2})">${escapeXml(ylabel)}</text>`
    );
  }

  legend(entries: [string, string][]): void {
    const a = this.plotArea();
    entries.forEach(([label, color], i) => {
      const y = a.y1 + 14 + 16 * i;
      this.parts.push(`<line x1="${a.x1 - 150}" y1="${y - 4}" x2="${a.x1 - 126}" y2="${y - 4}" stroke="${color}" stroke-width="2"/>`);
      this.text(a.x1 - 120, y, label, "start", 11);
    });
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n` +
      `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-family="sans-serif" ` +
      `font-size="15" fill="#111">${escapeXml(this.title)}</text>\n` +
      this.parts.join("\n") +
      `\n</svg>\n`
    );
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function niceTicks(min: number, max: number, n = 6): number[] {
  const span = max - min || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = span / (n * step);
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const lo = Math.ceil(min / s) * s;
  const out: number[] = [];
  for (let v = lo; v <= max + 1e-12; v += s) {
    out.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return out;
}
