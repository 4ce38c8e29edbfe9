/**
 * Sampling-stats JSON contract: config echo, a standard-basis reference
 * report, per-system reports with shares in [0, 1], a min/max/mean summary
 * and Pearson correlations (nullable for degenerate runs).
 *
 * Loading re-validates every report's internal consistency:
 * 0 <= both <= min(e2, e3) and union = e2 + e3 - both.
 */

import * as fs from 'fs';

export interface SystemReport {
  system_id: number;
  alpha_seed: number | null;
  rppt: number;
  e2_ppt: number;
  e3_ppt: number;
  both_ppt: number;
  union_ppt: number;
}

export interface StatsDoc {
  config: Record<string, unknown>;
  standard_reference: SystemReport;
  systems: SystemReport[];
  summary: Record<string, { min: number; max: number; mean: number }>;
  correlations: Record<string, number | null>;
}

const SHARE_KEYS = ['rppt', 'e2_ppt', 'e3_ppt', 'both_ppt', 'union_ppt'] as const;
const CONSISTENCY_TOL = 1e-12;

function asShare(value: unknown, what: string): number {
  if (typeof value !== 'number' || !Number.isFinite(value) || value < -1e-12 || value > 1 + 1e-12) {
    throw new Error(`${what} must be a number in [0, 1], got ${String(value)}`);
  }
  return value;
}

function validateReport(raw: unknown, what: string): SystemReport {
  if (typeof raw !== 'object' || raw === null) throw new Error(`${what} is not an object`);
  const rec = raw as Record<string, unknown>;
  for (const key of SHARE_KEYS) asShare(rec[key], `${what}.${key}`);
  const report = rec as unknown as SystemReport;
  if (report.both_ppt > Math.min(report.e2_ppt, report.e3_ppt) + CONSISTENCY_TOL) {
    throw new Error(`${what}: both_ppt exceeds min(e2_ppt, e3_ppt)`);
  }
  const union = report.e2_ppt + report.e3_ppt - report.both_ppt;
  if (Math.abs(report.union_ppt - union) > CONSISTENCY_TOL) {
    throw new Error(`${what}: union_ppt ${report.union_ppt} != e2 + e3 - both = ${union}`);
  }
  return report;
}

export function parseStatsJson(text: string): StatsDoc {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new Error(`not valid JSON: ${(err as Error).message}`);
  }
  if (typeof doc !== 'object' || doc === null) throw new Error('stats document is not an object');
  const d = doc as Record<string, unknown>;
  for (const key of ['config', 'standard_reference', 'systems', 'summary', 'correlations']) {
    if (!(key in d)) throw new Error(`missing key '${key}'`);
  }
  if (!Array.isArray(d.systems) || d.systems.length === 0) {
    throw new Error("'systems' must be a non-empty array");
  }
  const systems = d.systems.map((s, i) => validateReport(s, `systems[${i}]`));
  const reference = validateReport(d.standard_reference, 'standard_reference');
  return {
    config: d.config as Record<string, unknown>,
    standard_reference: reference,
    systems,
    summary: d.summary as StatsDoc['summary'],
    correlations: d.correlations as StatsDoc['correlations'],
  };
}

export function readStatsJson(path: string): StatsDoc {
  return parseStatsJson(fs.readFileSync(path, 'utf8'));
}

export function pearson(xs: number[], ys: number[]): number {
  if (xs.length !== ys.length || xs.length < 2) {
    throw new Error('pearson needs two equal-length arrays of length >= 2');
  }
  const mx = xs.reduce((s, v) => s + v, 0) / xs.length;
  const my = ys.reduce((s, v) => s + v, 0) / ys.length;
  let sxy = 0;
  let sxx = 0;
  let syy = 0;
  for (let i = 0; i < xs.length; i++) {
    const dx = xs[i] - mx;
    const dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx === 0 || syy === 0) throw new Error('correlation undefined for zero-variance input');
  return Math.max(-1, Math.min(1, sxy / Math.sqrt(sxx * syy)));
}

export interface CheckFailure {
  what: string;
  stored: number | null;
  derived: number | null;
}

/**
 * Re-derive every number the renderer displays (correlations and summary
 * rows) from the per-system reports; report mismatches beyond 1e-9.
 */
export function checkStats(doc: StatsDoc, tol = 1e-9): CheckFailure[] {
  const failures: CheckFailure[] = [];
  const col = (key: keyof SystemReport) => doc.systems.map((s) => s[key] as number);

  for (const key of SHARE_KEYS) {
    const values = col(key);
    const derived = {
      min: Math.min(...values),
      max: Math.max(...values),
      mean: values.reduce((s, v) => s + v, 0) / values.length,
    };
    const stored = doc.summary[key];
    for (const stat of ['min', 'max', 'mean'] as const) {
      if (!stored || typeof stored[stat] !== 'number') {
        failures.push({ what: `summary.${key}.${stat}`, stored: null, derived: derived[stat] });
      } else if (Math.abs(stored[stat] - derived[stat]) > tol) {
        failures.push({ what: `summary.${key}.${stat}`, stored: stored[stat], derived: derived[stat] });
      }
    }
  }

  for (const key of ['e2_ppt', 'e3_ppt', 'both_ppt'] as const) {
    const name = `rppt_${key}`;
    const stored = doc.correlations[name] ?? null;
    let derived: number | null = null;
    try {
      derived = pearson(col('rppt'), col(key));
    } catch {
      derived = null;
    }
    if (stored === null && derived === null) continue;
    if (stored === null || derived === null || Math.abs(stored - derived) > tol) {
      failures.push({ what: `correlations.${name}`, stored, derived });
    }
  }
  return failures;
}
