/**
 * End-to-end against the real backend: spawns the Python service with the
 * deterministic mock provider and drives the same override -> propagate ->
 * chat flow the unit tests run against the fake. Skips cleanly when the
 * backend cannot be started in this environment.
 */

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { spawn, ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join, dirname } from 'node:path';
import { fileURLToPath } from 'node:url';

import { ApiClient } from '../src/client.js';
import { EditorStore } from '../src/store.js';
import { demoGraphDoc } from './fixtures.js';

const PORT = 8917;
const BASE = `http://127.0.0.1:${PORT}`;
const TOKEN = 'frontend-integration';
const repoRoot = join(dirname(fileURLToPath(import.meta.url)), '..', '..');

let server: ChildProcess | null = null;
let dataDir: string | null = null;
let available = false;

async function waitForHealth(timeoutMs: number): Promise<boolean> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) return true;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  return false;
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), 'argugraph-frontend-'));
  try {
    server = spawn('python3', ['-m', 'argugraph.cli', 'serve', '--port', String(PORT)], {
      cwd: repoRoot,
      env: {
        ...process.env,
        ARGUGRAPH_LLM_PROVIDER: 'mock',
        ARGUGRAPH_DATA_DIR: dataDir,
        ARGUGRAPH_API_TOKEN: TOKEN,
      },
      stdio: 'ignore',
    });
    server.on('error', () => {
      available = false;
    });
    available = await waitForHealth(15000);
  } catch {
    available = false;
  }
}, 20000);

afterAll(() => {
  server?.kill();
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

describe('against the real service', () => {
  it('runs the override -> propagate -> chat flow over HTTP', async (ctx) => {
    if (!available) return ctx.skip();

    const client = new ApiClient({ baseUrl: BASE, token: TOKEN });
    await client.createGraph(demoGraphDoc());

    const store = new EditorStore(client);
    await store.loadGraph('demo');
    expect(store.getState().graph?.nodes).toHaveLength(4);

    const proposal = await store.requestClassification('D', 'B');
    expect(['support', 'attack']).toContain(proposal.relation);

    const edge = await store.overridePending('attack', 'weak');
    expect(edge.origin).toBe('human_override');
    expect(store.getState().staleNodeIds.has('B')).toBe(true);

    const result = await store.propagate();
    // the displayed number is exactly what the API reported
    expect(store.displayedScore('B')).toBe(result.scores['B']);
    expect(store.getState().staleNodeIds.size).toBe(0);
    // and the server agrees on a re-fetch
    const fetched = await client.getGraph('demo');
    const nodeB = fetched.graph.nodes.find((n) => n.id === 'B')!;
    expect(nodeB.credibility).toBe(result.scores['B']);

    const reply = await store.sendChat('how does it look now?');
    expect(reply.reply).toContain('4 claims');
    expect(reply.reply).toContain('3 edges');
    expect(reply.revision).toBe(store.getState().revision);
  }, 30000);

  it('auth is enforced by the real service', async (ctx) => {
    if (!available) return ctx.skip();
    const anonymous = new ApiClient({ baseUrl: BASE });
    await expect(anonymous.getGraph('demo')).rejects.toMatchObject({ status: 401 });
  });
});
