// SVG renderer for the figure model: theory as lines, simulated BER as
// markers with 99% CI whiskers, log-scaled y axis. String-built and fully
// deterministic.

import { Figure, Series, SeriesPoint } from "./figure";

const WIDTH = 880;
const HEIGHT = 540;
const MARGIN = { top: 24, right: 230, bottom: 52, left: 72 };

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
  "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#aec7e8", "#ff9896",
];

interface Scales {
  x: (v: number) => number;
  y: (v: number) => number;
}

function makeScales(fig: Figure): Scales {
  const [x0, x1] = fig.xDomain;
  const [e0, e1] = fig.yDecades;
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const xSpan = x1 - x0 || 1;
  return {
    x: (v) => MARGIN.left + ((v - x0) / xSpan) * plotW,
    y: (v) => {
      const e = Math.log10(Math.max(v, fig.yFloor));
      return MARGIN.top + ((e1 - e) / (e1 - e0)) * plotH;
    },
  };
}

function fmt(v: number): string {
  return v.toFixed(2);
}

function axisLayer(fig: Figure, s: Scales): string {
  const [e0, e1] = fig.yDecades;
  const parts: string[] = [];
  const xRight = WIDTH - MARGIN.right;
  const yBottom = HEIGHT - MARGIN.bottom;
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${xRight - MARGIN.left}"` +
      ` height="${yBottom - MARGIN.top}" fill="none" stroke="#333"/>`,
  );
  for (let e = e0; e <= e1; e++) {
    const y = s.y(10 ** e);
    parts.push(
      `<line class="log-tick" x1="${MARGIN.left}" y1="${fmt(y)}"` +
        ` x2="${xRight}" y2="${fmt(y)}" stroke="#ddd"/>`,
      `<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end"` +
        ` font-size="12">1e${e}</text>`,
    );
  }
  const [x0, x1] = fig.xDomain;
  const nTicks = 8;
  for (let i = 0; i <= nTicks; i++) {
    const v = x0 + ((x1 - x0) * i) / nTicks;
    const x = s.x(v);
    parts.push(
      `<line x1="${fmt(x)}" y1="${yBottom}" x2="${fmt(x)}" y2="${yBottom + 5}"` +
        ` stroke="#333"/>`,
      `<text x="${fmt(x)}" y="${yBottom + 20}" text-anchor="middle"` +
        ` font-size="12">${Number(v.toFixed(2))}</text>`,
    );
  }
  parts.push(
    `<text x="${(MARGIN.left + xRight) / 2}" y="${HEIGHT - 12}"` +
      ` text-anchor="middle" font-size="13">${fig.xLabel}</text>`,
    `<text transform="translate(18,${(MARGIN.top + yBottom) / 2}) rotate(-90)"` +
      ` text-anchor="middle" font-size="13">bit error rate</text>`,
  );
  return parts.join("\n");
}

function seriesLayer(series: Series, colour: string, s: Scales,
                     yFloor: number): string {
  const parts: string[] = [];
  const linePts = series.points
    .filter((p) => !Number.isNaN(p.bepTheory))
    .map((p) => `${fmt(s.x(p.x))},${fmt(s.y(Math.max(p.bepTheory, yFloor)))}`);
  if (linePts.length > 1) {
    parts.push(
      `<polyline class="theory" fill="none" stroke="${colour}"` +
        ` stroke-width="1.5" points="${linePts.join(" ")}"/>`,
    );
  }
  for (const p of series.points) {
    parts.push(markers(p, colour, s, yFloor));
  }
  return parts.join("\n");
}

function markers(p: SeriesPoint, colour: string, s: Scales,
                 yFloor: number): string {
  const x = s.x(p.x);
  const parts: string[] = [];
  if (!p.floored && p.ci99 > 0) {
    const hi = s.y(p.berSim + p.ci99);
    const lo = s.y(Math.max(p.berSim - p.ci99, yFloor));
    parts.push(
      `<line class="ci" x1="${fmt(x)}" y1="${fmt(hi)}" x2="${fmt(x)}"` +
        ` y2="${fmt(lo)}" stroke="${colour}" stroke-width="1"/>`,
    );
  }
  // zero-BER points stay visible at the floor as open markers
  const fill = p.floored ? "white" : colour;
  const cls = p.floored ? "sim floored" : "sim";
  parts.push(
    `<circle class="${cls}" cx="${fmt(x)}" cy="${fmt(s.y(p.berSim))}" r="3.5"` +
      ` fill="${fill}" stroke="${colour}" stroke-width="1.2"/>`,
  );
  return parts.join("\n");
}

function legendLayer(fig: Figure): string {
  const x = WIDTH - MARGIN.right + 14;
  const parts: string[] = [];
  fig.series.forEach((series, i) => {
    const y = MARGIN.top + 14 + i * 18;
    const colour = PALETTE[i % PALETTE.length];
    parts.push(
      `<line x1="${x}" y1="${y - 4}" x2="${x + 22}" y2="${y - 4}"` +
        ` stroke="${colour}" stroke-width="2"/>`,
      `<circle cx="${x + 11}" cy="${y - 4}" r="3" fill="${colour}"/>`,
      `<text x="${x + 28}" y="${y}" font-size="11">${series.label}</text>`,
    );
  });
  return parts.join("\n");
}

export function renderSvg(fig: Figure): string {
  const s = makeScales(fig);
  const layers = fig.series
    .map((series, i) => seriesLayer(series, PALETTE[i % PALETTE.length], s,
                                    fig.yFloor))
    .join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}"` +
      ` height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}"` +
      ` data-y-scale="log10" data-series="${fig.series.length}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    axisLayer(fig, s),
    layers,
    legendLayer(fig),
    `</svg>`,
  ].join("\n");
}
