#!/usr/bin/env node
/**
 * render-stats INPUT.json -o OUT.png [--check]
 *
 * --check re-derives every displayed number (summary rows and correlations)
 * from the per-system reports and exits nonzero on any mismatch > 1e-9.
 */

import { renderStats } from './renderStats';
import { checkStats, readStatsJson } from './statsfile';

function usage(): never {
  process.stderr.write('usage: render-stats INPUT.json -o OUT.png [--check]\n');
  process.exit(2);
}

export function main(argv: string[]): number {
  let input: string | null = null;
  let output: string | null = null;
  let check = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === '-o' || arg === '--out') {
      output = argv[++i] ?? null;
    } else if (arg === '--check') {
      check = true;
    } else if (arg === '-h' || arg === '--help') {
      usage();
    } else if (input === null) {
      input = arg;
    } else {
      usage();
    }
  }
  if (!input || !output) usage();

  try {
    const doc = readStatsJson(input);
    if (check) {
      const failures = checkStats(doc);
      if (failures.length > 0) {
        for (const f of failures) {
          process.stderr.write(
            `check failed: ${f.what}: stored=${String(f.stored)} derived=${String(f.derived)}\n`,
          );
        }
        return 1;
      }
      process.stdout.write('check ok: all stored annotations match re-derived values\n');
    }
    const { canvas, scatterCorrelation } = renderStats(doc);
    canvas.writePng(output);
    const corr = scatterCorrelation === null ? 'omitted' : scatterCorrelation.toFixed(6);
    process.stdout.write(`systems=${doc.systems.length} pearson_rppt_e2=${corr}\n`);
    process.stdout.write(`wrote ${output} (${canvas.width}x${canvas.height})\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`render-stats: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
