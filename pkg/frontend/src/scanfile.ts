/**
 * Slice-scan CSV contract: header exactly `a,b,valid,ppt,e2,e3`, one row per
 * grid point, coordinates as decimals, flags as 0/1. Flags of invalid cells
 * are present but meaningless.
 */

import * as fs from 'fs';

export interface ScanRow {
  a: number;
  b: number;
  valid: boolean;
  ppt: boolean;
  e2: boolean;
  e3: boolean;
}

export interface ScanGrid {
  rows: ScanRow[];
  /** ascending unique coordinate values */
  aValues: number[];
  bValues: number[];
  /** row index into `rows` by [ai][bi] */
  index: number[][];
}

export interface ScanCounts {
  valid: number;
  invalid: number;
  npt: number;
  pptUndetected: number; // PPT and not flagged by E2
  pptE2: number; // PPT and flagged by E2
  pptE3: number; // PPT and flagged by E3 (not color-mapped)
}

export const SCAN_HEADER = 'a,b,valid,ppt,e2,e3';

function parseFlag(token: string, line: number, name: string): boolean {
  if (token === '0') return false;
  if (token === '1') return true;
  throw new Error(`line ${line}: ${name} flag must be 0 or 1, got '${token}'`);
}

export function parseScanCsv(text: string): ScanGrid {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) throw new Error('empty scan file');
  if (lines[0] !== SCAN_HEADER) {
    throw new Error(`bad header: expected '${SCAN_HEADER}', got '${lines[0]}'`);
  }
  const rows: ScanRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(',');
    if (parts.length !== 6) throw new Error(`line ${i + 1}: expected 6 fields, got ${parts.length}`);
    const a = Number(parts[0]);
    const b = Number(parts[1]);
    if (!Number.isFinite(a) || !Number.isFinite(b)) {
      throw new Error(`line ${i + 1}: non-numeric coordinates`);
    }
    rows.push({
      a,
      b,
      valid: parseFlag(parts[2], i + 1, 'valid'),
      ppt: parseFlag(parts[3], i + 1, 'ppt'),
      e2: parseFlag(parts[4], i + 1, 'e2'),
      e3: parseFlag(parts[5], i + 1, 'e3'),
    });
  }
  if (rows.length === 0) throw new Error('scan file has a header but no rows');

  const aValues = [...new Set(rows.map((r) => r.a))].sort((x, y) => x - y);
  const bValues = [...new Set(rows.map((r) => r.b))].sort((x, y) => x - y);
  const aIdx = new Map(aValues.map((v, i) => [v, i]));
  const bIdx = new Map(bValues.map((v, i) => [v, i]));
  const index: number[][] = aValues.map(() => bValues.map(() => -1));
  rows.forEach((r, i) => {
    index[aIdx.get(r.a)!][bIdx.get(r.b)!] = i;
  });
  return { rows, aValues, bValues, index };
}

export function readScanCsv(path: string): ScanGrid {
  return parseScanCsv(fs.readFileSync(path, 'utf8'));
}

/** Color-class counts derived purely from the CSV flags. */
export function countClasses(grid: ScanGrid): ScanCounts {
  const counts: ScanCounts = { valid: 0, invalid: 0, npt: 0, pptUndetected: 0, pptE2: 0, pptE3: 0 };
  for (const r of grid.rows) {
    if (!r.valid) {
      counts.invalid++;
      continue;
    }
    counts.valid++;
    if (!r.ppt) counts.npt++;
    else if (r.e2) counts.pptE2++;
    else counts.pptUndetected++;
    if (r.ppt && r.e3) counts.pptE3++;
  }
  return counts;
}
