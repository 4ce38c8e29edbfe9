/**
 * Render a sampling-stats document: share histograms for the per-system
 * population with standard-basis reference lines, plus a scatter of rppt
 * against the E2 detection share annotated with the Pearson coefficient
 * recomputed from the per-system reports (never copied from the file).
 */

import { BLACK, BLUE, Canvas, Color, GRAY, GREEN, ORANGE, PINK, WHITE } from './canvas';
import { LINE_HEIGHT } from './font';
import { pearson, StatsDoc } from './statsfile';

const PANEL_W = 330;
const PANEL_H = 150;
const MARGIN = 22;
const GAP = 34;

export interface StatsRenderResult {
  canvas: Canvas;
  /** Pearson of rppt vs e2_ppt recomputed from the systems; null if degenerate. */
  scatterCorrelation: number | null;
  annotations: string[];
}

interface Series {
  key: 'rppt' | 'e2_ppt' | 'e3_ppt';
  label: string;
  color: Color;
}

const SERIES: Series[] = [
  { key: 'rppt', label: 'RPPT', color: BLUE },
  { key: 'e2_ppt', label: 'E2/PPT', color: PINK },
  { key: 'e3_ppt', label: 'E3/PPT', color: GREEN },
];

function histogram(values: number[], lo: number, hi: number, bins: number): number[] {
  const counts = new Array(bins).fill(0);
  const span = hi - lo || 1;
  for (const v of values) {
    let b = Math.floor(((v - lo) / span) * bins);
    if (b < 0) b = 0;
    if (b >= bins) b = bins - 1;
    counts[b]++;
  }
  return counts;
}

function drawHistPanel(
  canvas: Canvas,
  x: number,
  y: number,
  values: number[],
  reference: number,
  series: Series,
): void {
  canvas.strokeRect(x, y, PANEL_W, PANEL_H, GRAY);
  const lo = Math.min(...values, reference);
  const hi = Math.max(...values, reference);
  const pad = 0.06 * (hi - lo || 0.1);
  const vLo = lo - pad;
  const vHi = hi + pad;
  const bins = Math.min(40, Math.max(8, Math.floor(values.length / 4)));
  const counts = histogram(values, vLo, vHi, bins);
  const peak = Math.max(...counts, 1);
  const innerH = PANEL_H - 26;
  const binW = (PANEL_W - 2) / bins;
  counts.forEach((n, b) => {
    if (n === 0) return;
    const h = Math.max(1, Math.round((n / peak) * innerH));
    canvas.fillRect(Math.round(x + 1 + b * binW), y + PANEL_H - 1 - h, Math.max(1, Math.floor(binW - 1)), h, series.color);
  });
  // standard-basis reference line
  const rx = Math.round(x + 1 + ((reference - vLo) / (vHi - vLo)) * (PANEL_W - 2));
  canvas.vline(rx, y + 1, PANEL_H - 2, ORANGE);
  canvas.drawText(x + 4, y + 4, `${series.label} (REF ${reference.toFixed(4)})`, BLACK);
  canvas.drawText(x + 4, y + 4 + LINE_HEIGHT, `${values.length} SYSTEMS`, GRAY);
}

export function renderStats(doc: StatsDoc): StatsRenderResult {
  const systems = doc.systems;
  const ref = doc.standard_reference;
  const single = systems.length < 2;

  const width = MARGIN * 2 + PANEL_W * 2 + GAP;
  const height = MARGIN * 2 + PANEL_H * 3 + GAP * 2 + LINE_HEIGHT * 2;
  const canvas = new Canvas(width, height, WHITE);

  canvas.drawText(MARGIN, MARGIN - 14, 'PER-SYSTEM DETECTION SHARES VS STANDARD-BASIS REFERENCE', BLACK);

  SERIES.forEach((series, i) => {
    const values = systems.map((s) => s[series.key]);
    drawHistPanel(canvas, MARGIN, MARGIN + i * (PANEL_H + GAP), values, ref[series.key], series);
  });

  // scatter panel: rppt vs e2_ppt
  const sx = MARGIN + PANEL_W + GAP;
  const sy = MARGIN;
  const sw = PANEL_W;
  const sh = PANEL_H * 2 + GAP;
  canvas.strokeRect(sx, sy, sw, sh, GRAY);
  const xs = systems.map((s) => s.rppt);
  const ys = systems.map((s) => s.e2_ppt);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);
  const xSpan = xHi - xLo || 0.05;
  const ySpan = yHi - yLo || 0.05;
  const px = (v: number) => Math.round(sx + 10 + ((v - xLo) / xSpan) * (sw - 20));
  const py = (v: number) => Math.round(sy + sh - 10 - ((v - yLo) / ySpan) * (sh - 20));
  canvas.fillRect(sx + 1, sy + 1, sw - 2, sh - 2, WHITE);
  for (let i = 0; i < xs.length; i++) canvas.dot(px(xs[i]), py(ys[i]), 2, BLUE);
  canvas.strokeRect(sx, sy, sw, sh, GRAY);
  canvas.drawText(sx + 4, sy + sh + 5, 'RPPT', GRAY);
  canvas.drawText(sx + 4, sy - 10, 'E2/PPT VS RPPT', BLACK);

  let scatterCorrelation: number | null = null;
  const annotations: string[] = [];
  if (!single) {
    try {
      scatterCorrelation = pearson(xs, ys);
    } catch {
      scatterCorrelation = null;
    }
  }
  const corrLine =
    scatterCorrelation === null
      ? 'CORRELATION OMITTED (DEGENERATE SAMPLE)'
      : `PEARSON R(RPPT, E2/PPT) = ${scatterCorrelation.toFixed(6)}`;
  annotations.push(corrLine);
  canvas.drawText(sx + 4, sy + 6, corrLine, BLACK);

  // textual summary footer from the per-system values (re-derived, not copied)
  const mean = (vals: number[]) => vals.reduce((s, v) => s + v, 0) / vals.length;
  const footer = `MEAN RPPT ${mean(xs).toFixed(4)}, REFERENCE RPPT ${ref.rppt.toFixed(4)}`;
  annotations.push(footer);
  canvas.drawText(MARGIN, height - MARGIN + 4, footer, BLACK);
  const legendY = height - MARGIN + 4 + LINE_HEIGHT;
  canvas.fillRect(MARGIN, legendY, 8, 8, ORANGE);
  canvas.drawText(MARGIN + 12, legendY, 'STANDARD-BASIS REFERENCE LINE', GRAY);

  return { canvas, scatterCorrelation, annotations };
}
