/**
 * End-to-end against the real search service: builds the fixture index, serves
 * it, and drives the typed client + renderers the way the page does. A second
 * server is configured with an unreachable rerank endpoint to exercise the
 * degraded path.
 */
import { ChildProcess, execFileSync, spawn } from 'node:child_process';
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from 'node:fs';
import { createServer } from 'node:net';
import { tmpdir } from 'node:os';
import { dirname, join, resolve } from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ConvSearchClient } from '../src/api.js';
import { SessionStore, turnViewFromResponse } from '../src/state.js';
import { renderApp, renderTurn } from '../src/render.js';

const repoRoot = resolve(dirname(fileURLToPath(import.meta.url)), '..', '..');
const fixtures = join(repoRoot, 'tests', 'fixtures');

const TURN_1 = 'I just had a breast biopsy for cancer. What are the most common types?';
const TURN_2 = 'How deadly is it?';

function freePort(): Promise<number> {
  return new Promise((resolvePort, reject) => {
    const srv = createServer();
    srv.on('error', reject);
    srv.listen(0, '127.0.0.1', () => {
      const { port } = srv.address() as { port: number };
      srv.close(() => resolvePort(port));
    });
  });
}

async function waitHealthy(client: ConvSearchClient, proc: ChildProcess): Promise<void> {
  for (let i = 0; i < 100; i += 1) {
    if (proc.exitCode !== null) throw new Error(`service exited early (code ${proc.exitCode})`);
    try {
      const health = await client.health();
      if (health.status === 'ok') return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error('service never became healthy');
}

function serve(indexPath: string, configPath: string, port: number): ChildProcess {
  return spawn(
    'python3',
    ['-m', 'convsearch.cli', 'serve', '--index', indexPath, '--config', configPath, '--port', String(port)],
    { cwd: repoRoot, stdio: 'ignore' },
  );
}

let workdir: string;
let normal: ChildProcess;
let degraded: ChildProcess;
let normalClient: ConvSearchClient;
let degradedClient: ConvSearchClient;

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), 'convsearch-ui-'));
  const indexPath = join(workdir, 'fixture.idx');
  execFileSync(
    'python3',
    ['-m', 'convsearch.cli', 'index', join(fixtures, 'corpus.jsonl'), '-o', indexPath],
    { cwd: repoRoot },
  );

  // Same fixture config, but the degraded variant points reranking at a port
  // nothing listens on.
  const baseConfig = JSON.parse(readFileSync(join(fixtures, 'config.json'), 'utf8'));
  const deadPort = await freePort();
  const degradedConfig = {
    ...baseConfig,
    reranker: 'http',
    rerank_url: `http://127.0.0.1:${deadPort}/rerank`,
    http_timeout: 0.5,
  };
  const degradedConfigPath = join(workdir, 'degraded.json');
  writeFileSync(degradedConfigPath, JSON.stringify(degradedConfig));

  const [normalPort, degradedPort] = [await freePort(), await freePort()];
  normal = serve(indexPath, join(fixtures, 'config.json'), normalPort);
  degraded = serve(indexPath, degradedConfigPath, degradedPort);
  normalClient = new ConvSearchClient(`http://127.0.0.1:${normalPort}`);
  degradedClient = new ConvSearchClient(`http://127.0.0.1:${degradedPort}`);
  await waitHealthy(normalClient, normal);
  await waitHealthy(degradedClient, degraded);
}, 60_000);

afterAll(() => {
  for (const proc of [normal, degraded]) proc?.kill();
  if (workdir) rmSync(workdir, { recursive: true, force: true });
});

describe('live session flow', () => {
  it('turn 2 carries session-provenance chips and a ranked passage list', async () => {
    const store = new SessionStore(normalClient);
    await store.newSession();
    expect(store.state.sessionId).toBeTruthy();
    await store.submitTurn(TURN_1);
    await store.submitTurn(TURN_2);
    expect(store.state.turns).toHaveLength(2);

    const turn2 = store.state.turns[1];
    const sessionChips = turn2.expansion.filter((e) => e.provenance === 'session');
    expect(sessionChips.length).toBeGreaterThanOrEqual(1);
    expect(turn2.results.length).toBeGreaterThan(0);
    expect(turn2.results.map((r) => r.rank)).toEqual(turn2.results.map((_, i) => i + 1));
    expect(turn2.degraded).toBe(false);

    const html = renderTurn(turn2, true);
    expect(html).toContain('data-provenance="session"');
    expect(html).toContain(`data-rank="1"`);
    expect(html).not.toContain('badge-degraded');
  });

  it('history round-trips: reload reproduces the submitted turns', async () => {
    const store = new SessionStore(normalClient);
    await store.newSession();
    await store.submitTurn(TURN_1);
    await store.submitTurn(TURN_2);
    const before = store.state.turns;
    await store.reload();
    expect(store.state.turns).toEqual(before);
  });

  it('a 404 on a deleted session surfaces as session-lost, not a crash', async () => {
    const store = new SessionStore(normalClient);
    await store.newSession();
    await normalClient.deleteSession(store.state.sessionId!);
    await store.submitTurn(TURN_1);
    expect(store.state.sessionLost).toBe(true);
    expect(renderApp(store.state)).toContain('new-session-retry');
  });
});

describe('dead rerank endpoint', () => {
  it('yields a degraded badge in the rendered turn, not an error', async () => {
    const { session_id } = await degradedClient.createSession();
    const response = await degradedClient.submitTurn(session_id, TURN_1);
    expect(response.degraded).toBe(true);
    expect(response.results.length).toBeGreaterThan(0);

    const html = renderTurn(turnViewFromResponse(TURN_1, response), true);
    expect(html).toContain('badge-degraded');
  }, 30_000);
});
