#!/usr/bin/env node
/** render-scan INPUT.csv -o OUT.png : rasterize one slice-scan CSV. */

import { renderScan } from './renderScan';
import { readScanCsv } from './scanfile';

function usage(): never {
  process.stderr.write('usage: render-scan INPUT.csv -o OUT.png\n');
  process.exit(2);
}

export function main(argv: string[]): number {
  let input: string | null = null;
  let output: string | null = null;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === '-o' || arg === '--out') {
      output = argv[++i] ?? null;
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
    const grid = readScanCsv(input);
    const { canvas, counts } = renderScan(grid);
    canvas.writePng(output);
    process.stdout.write(
      `npt=${counts.npt} ppt_undetected=${counts.pptUndetected} ppt_e2=${counts.pptE2} ` +
        `ppt_e3=${counts.pptE3} valid=${counts.valid} invalid=${counts.invalid}\n`,
    );
    process.stdout.write(`wrote ${output} (${canvas.width}x${canvas.height})\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`render-scan: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
