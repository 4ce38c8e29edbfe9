/** Tiny RGBA raster canvas with PNG export (via pngjs) and bitmap text. */

import * as fs from 'fs';
import { PNG } from 'pngjs';
import { GLYPH_H, GLYPH_W, glyphRows } from './font';

export type Color = readonly [number, number, number];

export const WHITE: Color = [255, 255, 255];
export const BLACK: Color = [20, 20, 20];
export const GRAY: Color = [130, 130, 130];
export const LIGHT_GRAY: Color = [225, 225, 225];
// Region colors: green = NPT, blue = PPT not detected, pink = PPT & E2.
export const GREEN: Color = [46, 160, 67];
export const BLUE: Color = [58, 110, 220];
export const PINK: Color = [235, 100, 180];
export const ORANGE: Color = [240, 140, 30];

export class Canvas {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, background: Color = WHITE) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4);
    this.fillRect(0, 0, width, height, background);
  }

  setPixel(x: number, y: number, c: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.data[i] = c[0];
    this.data[i + 1] = c[1];
    this.data[i + 2] = c[2];
    this.data[i + 3] = 255;
  }

  fillRect(x: number, y: number, w: number, h: number, c: Color): void {
    const x1 = Math.max(0, x);
    const y1 = Math.max(0, y);
    const x2 = Math.min(this.width, x + w);
    const y2 = Math.min(this.height, y + h);
    for (let yy = y1; yy < y2; yy++) {
      for (let xx = x1; xx < x2; xx++) {
        const i = (yy * this.width + xx) * 4;
        this.data[i] = c[0];
        this.data[i + 1] = c[1];
        this.data[i + 2] = c[2];
        this.data[i + 3] = 255;
      }
    }
  }

  hline(x: number, y: number, w: number, c: Color): void {
    this.fillRect(x, y, w, 1, c);
  }

  vline(x: number, y: number, h: number, c: Color): void {
    this.fillRect(x, y, 1, h, c);
  }

  strokeRect(x: number, y: number, w: number, h: number, c: Color): void {
    this.hline(x, y, w, c);
    this.hline(x, y + h - 1, w, c);
    this.vline(x, y, h, c);
    this.vline(x + w - 1, y, h, c);
  }

  /** Filled disc, used for scatter markers. */
  dot(cx: number, cy: number, r: number, c: Color): void {
    for (let dy = -r; dy <= r; dy++) {
      for (let dx = -r; dx <= r; dx++) {
        if (dx * dx + dy * dy <= r * r) this.setPixel(cx + dx, cy + dy, c);
      }
    }
  }

  drawText(x: number, y: number, text: string, c: Color = BLACK, scale = 1): void {
    let cx = x;
    for (const ch of text) {
      const rows = glyphRows(ch);
      for (let ry = 0; ry < GLYPH_H; ry++) {
        for (let rx = 0; rx < GLYPH_W; rx++) {
          if (rows[ry][rx] === '1') {
            this.fillRect(cx + rx * scale, y + ry * scale, scale, scale, c);
          }
        }
      }
      cx += (GLYPH_W + 1) * scale;
    }
  }

  toPng(): Buffer {
    const png = new PNG({ width: this.width, height: this.height });
    Buffer.from(this.data).copy(png.data);
    return PNG.sync.write(png);
  }

  writePng(path: string): void {
    fs.writeFileSync(path, this.toPng());
  }
}
