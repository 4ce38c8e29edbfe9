/**
 * Render a slice-scan grid as a colored raster: one cell per grid point,
 * green = NPT, blue = PPT not detected by E2, pink = PPT & E2, background =
 * invalid. The witness-detected region of the original figure is omitted
 * (no inequality available); the legend says so. Legend counts are derived
 * from the CSV flags and nothing else.
 */

import { BLACK, BLUE, Canvas, Color, GRAY, GREEN, LIGHT_GRAY, PINK, WHITE } from './canvas';
import { LINE_HEIGHT, textWidth } from './font';
import { countClasses, ScanCounts, ScanGrid } from './scanfile';

const MARGIN = 18;
const AXIS = 26;
const TARGET_PLOT = 560;

export interface ScanRenderResult {
  canvas: Canvas;
  counts: ScanCounts;
  legendLines: string[];
}

function fmt(x: number): string {
  return x.toFixed(2).replace(/\.00$/, '').replace(/(\.\d)0$/, '$1');
}

export function renderScan(grid: ScanGrid): ScanRenderResult {
  const counts = countClasses(grid);
  const na = grid.aValues.length;
  const nb = grid.bValues.length;
  const cell = Math.max(2, Math.floor(TARGET_PLOT / Math.max(na, nb)));
  const plotW = na * cell;
  const plotH = nb * cell;

  const legendLines = [
    `NPT ENTANGLED: ${counts.npt}`,
    `PPT, NOT DETECTED: ${counts.pptUndetected}`,
    `PPT & E2 DETECTED: ${counts.pptE2}`,
    `INVALID (BLANK): ${counts.invalid}`,
    `PPT & E3 DETECTED: ${counts.pptE3} (FLAG ONLY, NOT COLOR-MAPPED)`,
    'WITNESS REGION OMITTED (NO INEQUALITY AVAILABLE)',
  ];
  const legendH = legendLines.length * LINE_HEIGHT + 14;
  const width = MARGIN + AXIS + plotW + MARGIN;
  const height = MARGIN + plotH + AXIS + legendH + MARGIN;
  const canvas = new Canvas(Math.max(width, 430), height, WHITE);

  const x0 = MARGIN + AXIS;
  const y0 = MARGIN;

  // plot background marks the invalid region
  canvas.fillRect(x0, y0, plotW, plotH, WHITE);
  const colorOf = (r: { ppt: boolean; e2: boolean }): Color => (!r.ppt ? GREEN : r.e2 ? PINK : BLUE);
  for (let ai = 0; ai < na; ai++) {
    for (let bi = 0; bi < nb; bi++) {
      const i = grid.index[ai][bi];
      if (i < 0) continue;
      const row = grid.rows[i];
      if (!row.valid) continue;
      // b grows upward
      canvas.fillRect(x0 + ai * cell, y0 + (nb - 1 - bi) * cell, cell, cell, colorOf(row));
    }
  }
  canvas.strokeRect(x0 - 1, y0 - 1, plotW + 2, plotH + 2, GRAY);

  // axis labels: coordinate extremes
  canvas.drawText(x0, y0 + plotH + 6, fmt(grid.aValues[0]), BLACK);
  const aMaxLabel = fmt(grid.aValues[na - 1]);
  canvas.drawText(x0 + plotW - textWidth(aMaxLabel), y0 + plotH + 6, aMaxLabel, BLACK);
  const aTitle = 'A';
  canvas.drawText(x0 + Math.floor(plotW / 2) - 2, y0 + plotH + 6, aTitle, GRAY);
  canvas.drawText(2, y0 + plotH - 7, fmt(grid.bValues[0]), BLACK);
  canvas.drawText(2, y0, fmt(grid.bValues[nb - 1]), BLACK);
  canvas.drawText(2, y0 + Math.floor(plotH / 2) - 3, 'B', GRAY);

  // legend with swatches
  let ly = y0 + plotH + AXIS;
  const swatches: (Color | null)[] = [GREEN, BLUE, PINK, LIGHT_GRAY, null, null];
  legendLines.forEach((line, i) => {
    const sw = swatches[i];
    if (sw) {
      canvas.fillRect(x0 - AXIS, ly, 8, 8, sw);
      canvas.strokeRect(x0 - AXIS, ly, 8, 8, GRAY);
    }
    canvas.drawText(x0 - AXIS + 12, ly, line, BLACK);
    ly += LINE_HEIGHT;
  });

  return { canvas, counts, legendLines };
}
