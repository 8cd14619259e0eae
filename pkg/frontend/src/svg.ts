/**
 * Minimal deterministic SVG line charts with error bars.
 *
 * The output contains no timestamps, ids, or library-generated state, so
 * rendering the same data twice yields byte-identical files.
 */

export interface SeriesPoint {
  x: number;
  y: number;
  se: number;
}

export interface Series {
  label: string;
  color: string;
  points: SeriesPoint[];
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  width?: number;
  height?: number;
}

const MARGIN = { top: 42, right: 150, bottom: 52, left: 72 };

function fmtCoord(v: number): string {
  return (Math.round(v * 100) / 100).toFixed(2);
}

function fmtTick(v: number): string {
  const rounded = Math.round(v * 1e6) / 1e6;
  return String(rounded);
}

function niceTicks(min: number, max: number, count = 5): number[] {
  const span = max - min;
  if (span <= 0) return [min];
  const step0 = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const norm = step0 / mag;
  const step = mag * (norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10);
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function lineChartSvg(spec: ChartSpec): string {
  const width = spec.width ?? 780;
  const height = spec.height ?? 520;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = spec.series.flatMap((s) => s.points.map((p) => p.x));
  const yTops = spec.series.flatMap((s) => s.points.map((p) => p.y + p.se));
  let xMin = Math.min(...xs);
  let xMax = Math.max(...xs);
  if (!(xMax > xMin)) {
    xMin -= 1;
    xMax += 1;
  }
  const yMin = 0; // sum rates are non-negative; anchor the axis at zero
  let yMax = Math.max(...yTops);
  if (!(yMax > yMin)) yMax = 1;
  yMax *= 1.05;

  const sx = (x: number) => MARGIN.left + ((x - xMin) / (xMax - xMin)) * plotW;
  const sy = (y: number) => MARGIN.top + plotH - ((y - yMin) / (yMax - yMin)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${fmtCoord(MARGIN.left + plotW / 2)}" y="24" text-anchor="middle" ` +
      `font-size="16" fill="#111">${escapeXml(spec.title)}</text>`
  );

  // gridlines and ticks
  for (const t of niceTicks(yMin, yMax)) {
    const y = fmtCoord(sy(t));
    parts.push(
      `<line x1="${fmtCoord(MARGIN.left)}" y1="${y}" x2="${fmtCoord(MARGIN.left + plotW)}" ` +
        `y2="${y}" stroke="#dddddd" stroke-width="1"/>`
    );
    parts.push(
      `<text x="${fmtCoord(MARGIN.left - 8)}" y="${fmtCoord(sy(t) + 4)}" text-anchor="end" ` +
        `font-size="12" fill="#333">${fmtTick(t)}</text>`
    );
  }
  for (const t of niceTicks(xMin, xMax, 6)) {
    const x = fmtCoord(sx(t));
    parts.push(
      `<line x1="${x}" y1="${fmtCoord(MARGIN.top + plotH)}" x2="${x}" ` +
        `y2="${fmtCoord(MARGIN.top + plotH + 5)}" stroke="#333333" stroke-width="1"/>`
    );
    parts.push(
      `<text x="${x}" y="${fmtCoord(MARGIN.top + plotH + 20)}" text-anchor="middle" ` +
        `font-size="12" fill="#333">${fmtTick(t)}</text>`
    );
  }

  // axes
  const x0 = fmtCoord(MARGIN.left);
  const y0 = fmtCoord(MARGIN.top + plotH);
  parts.push(`<line x1="${x0}" y1="${fmtCoord(MARGIN.top)}" x2="${x0}" y2="${y0}" stroke="#333333" stroke-width="1"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${fmtCoord(MARGIN.left + plotW)}" y2="${y0}" stroke="#333333" stroke-width="1"/>`);
  parts.push(
    `<text x="${fmtCoord(MARGIN.left + plotW / 2)}" y="${fmtCoord(height - 14)}" ` +
      `text-anchor="middle" font-size="13" fill="#111">${escapeXml(spec.xLabel)}</text>`
  );
  parts.push(
    `<text x="20" y="${fmtCoord(MARGIN.top + plotH / 2)}" text-anchor="middle" font-size="13" ` +
      `fill="#111" transform="rotate(-90 20 ${fmtCoord(MARGIN.top + plotH / 2)})">${escapeXml(spec.yLabel)}</text>`
  );

  // series: error bars, line, markers
  for (const s of spec.series) {
    parts.push(`<g class="series" data-label="${escapeXml(s.label)}">`);
    for (const p of s.points) {
      const x = fmtCoord(sx(p.x));
      const yLo = fmtCoord(sy(Math.max(p.y - p.se, yMin)));
      const yHi = fmtCoord(sy(p.y + p.se));
      parts.push(`<line x1="${x}" y1="${yLo}" x2="${x}" y2="${yHi}" stroke="${s.color}" stroke-width="1"/>`);
      for (const yCap of [yLo, yHi]) {
        parts.push(
          `<line x1="${fmtCoord(sx(p.x) - 4)}" y1="${yCap}" x2="${fmtCoord(sx(p.x) + 4)}" ` +
            `y2="${yCap}" stroke="${s.color}" stroke-width="1"/>`
        );
      }
    }
    const pts = s.points.map((p) => `${fmtCoord(sx(p.x))},${fmtCoord(sy(p.y))}`).join(" ");
    parts.push(`<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="2"/>`);
    for (const p of s.points) {
      parts.push(`<circle cx="${fmtCoord(sx(p.x))}" cy="${fmtCoord(sy(p.y))}" r="3" fill="${s.color}"/>`);
    }
    parts.push(`</g>`);
  }

  // legend
  const legendX = MARGIN.left + plotW + 14;
  spec.series.forEach((s, i) => {
    const y = MARGIN.top + 10 + i * 22;
    parts.push(
      `<line x1="${fmtCoord(legendX)}" y1="${fmtCoord(y)}" x2="${fmtCoord(legendX + 24)}" ` +
        `y2="${fmtCoord(y)}" stroke="${s.color}" stroke-width="2"/>`
    );
    parts.push(
      `<text x="${fmtCoord(legendX + 30)}" y="${fmtCoord(y + 4)}" font-size="12" fill="#111">` +
        `${escapeXml(s.label)}</text>`
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
