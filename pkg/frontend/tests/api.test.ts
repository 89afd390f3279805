import { describe, expect, it } from 'vitest';

import { classifyRemote } from '../src/api.js';
import type { SelectionPayload } from '../src/types.js';

const payload: SelectionPayload = {
  text: 'covid vaccines cause magnetism',
  pageUrl: 'https://news.example/article',
  timestamp: '2024-05-01T10:00:00.000Z',
};

const okBody = {
  label: 'fake',
  p_fake: 0.9,
  model_id: 'nb:abc',
  elapsed_ms: 3.2,
  explanation: null,
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

describe('classifyRemote', () => {
  it('posts the selection text to /v1/classify and returns the verdict', async () => {
    let captured: { url: string; body: string } | null = null;
    const outcome = await classifyRemote(payload, 'http://host:1234/', {
      fetchFn: async (url, init) => {
        captured = { url: String(url), body: String(init?.body) };
        return jsonResponse(okBody);
      },
    });
    expect(captured).toEqual({
      url: 'http://host:1234/v1/classify',
      body: JSON.stringify({ text: payload.text }),
    });
    expect(outcome).toEqual({ ok: true, response: okBody });
  });

  it('maps 503 to a retryable service-unavailable banner', async () => {
    const outcome = await classifyRemote(payload, 'http://host', {
      fetchFn: async () => jsonResponse({ error: { code: 'model_not_loaded' } }, 503),
    });
    expect(outcome).toMatchObject({
      ok: false,
      kind: 'service_unavailable',
      retryable: true,
    });
    if (!outcome.ok) {
      expect(outcome.message).toContain('unavailable');
    }
  });

  it('maps 400 too_long to advice about a shorter selection', async () => {
    const outcome = await classifyRemote(payload, 'http://host', {
      fetchFn: async () => jsonResponse({ error: { code: 'too_long' } }, 400),
    });
    expect(outcome).toMatchObject({ ok: false, kind: 'too_long', retryable: false });
    if (!outcome.ok) {
      expect(outcome.message).toContain('shorter');
    }
  });

  it('maps 400 empty_text distinctly', async () => {
    const outcome = await classifyRemote(payload, 'http://host', {
      fetchFn: async () => jsonResponse({ error: { code: 'empty_text' } }, 400),
    });
    expect(outcome).toMatchObject({ ok: false, kind: 'empty_text' });
  });

  it('maps a connection failure to a retryable network banner', async () => {
    const outcome = await classifyRemote(payload, 'http://host', {
      fetchFn: async () => {
        throw new TypeError('fetch failed');
      },
    });
    expect(outcome).toMatchObject({ ok: false, kind: 'network', retryable: true });
  });

  it('aborts after the timeout and reports it', async () => {
    const outcome = await classifyRemote(payload, 'http://host', {
      timeoutMs: 20,
      fetchFn: (_url, init) =>
        new Promise((_resolve, reject) => {
          init?.signal?.addEventListener('abort', () =>
            reject(new DOMException('aborted', 'AbortError')));
        }),
    });
    expect(outcome).toMatchObject({ ok: false, kind: 'timeout', retryable: true });
  });

  it('rejects unreadable bodies', async () => {
    const outcome = await classifyRemote(payload, 'http://host', {
      fetchFn: async () => new Response('not json at all', { status: 200 }),
    });
    expect(outcome).toMatchObject({ ok: false, kind: 'bad_response' });
  });

  it('rejects replies missing the verdict fields', async () => {
    const outcome = await classifyRemote(payload, 'http://host', {
      fetchFn: async () => jsonResponse({ hello: 'world' }),
    });
    expect(outcome).toMatchObject({ ok: false, kind: 'bad_response' });
  });
});
