import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiError, ConvSearchClient } from '../src/api.js';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

const client = new ConvSearchClient('http://svc');

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('ConvSearchClient', () => {
  it('creates sessions', async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse({ session_id: 'abc' }, 201));
    vi.stubGlobal('fetch', fetchMock);
    expect(await client.createSession()).toEqual({ session_id: 'abc' });
    expect(fetchMock).toHaveBeenCalledWith('http://svc/sessions', { method: 'POST' });
  });

  it('posts turns with a json body', async () => {
    const payload = { turn_id: 't', rewritten: 'x', expansion: [], results: [], degraded: false };
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(payload));
    vi.stubGlobal('fetch', fetchMock);
    expect(await client.submitTurn('abc', 'How deadly is it?')).toEqual(payload);
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe('http://svc/sessions/abc/turns');
    expect(JSON.parse(init.body)).toEqual({ utterance: 'How deadly is it?' });
  });

  it('throws ApiError with status and detail on 404', async () => {
    vi.stubGlobal('fetch', vi.fn().mockResolvedValue(jsonResponse({ detail: 'unknown session x' }, 404)));
    await expect(client.getSession('x')).rejects.toMatchObject({ status: 404, message: 'unknown session x' });
  });

  it('wraps network failures as status 0', async () => {
    vi.stubGlobal('fetch', vi.fn().mockRejectedValue(new TypeError('fetch failed')));
    const err = await client.health().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(0);
  });

  it('handles 204 delete', async () => {
    vi.stubGlobal('fetch', vi.fn().mockResolvedValue(new Response(null, { status: 204 })));
    await expect(client.deleteSession('abc')).resolves.toBeUndefined();
  });
});
