/** Shared test fixture: the demo graph document, loaded from the repo fixtures. */

import { readFileSync } from 'node:fs';
import { fileURLToPath } from 'node:url';
import { dirname, join } from 'node:path';

import type { GraphDoc } from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));

export function demoGraphDoc(): GraphDoc {
  const path = join(here, '..', '..', 'tests', 'fixtures', 'demo.json');
  return JSON.parse(readFileSync(path, 'utf-8')) as GraphDoc;
}
