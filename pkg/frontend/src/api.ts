import type { ClassifyResponse, SelectionPayload } from './types.js';

export const DEFAULT_ENDPOINT = 'http://127.0.0.1:8080';
export const REQUEST_TIMEOUT_MS = 10_000;

export type FailureKind =
  | 'empty_text'
  | 'too_long'
  | 'service_unavailable'
  | 'timeout'
  | 'network'
  | 'bad_response';

export type ClassifyOutcome =
  | { ok: true; response: ClassifyResponse }
  | { ok: false; kind: FailureKind; message: string; retryable: boolean };

interface ClassifyOptions {
  fetchFn?: typeof fetch;
  timeoutMs?: number;
  signal?: AbortSignal;
}

function failure(kind: FailureKind, message: string, retryable = false): ClassifyOutcome {
  return { ok: false, kind, message, retryable };
}

/**
 * POST the selected text to the classification service and map every
 * failure mode (HTTP error codes, timeout, network loss, junk bodies) to a
 * distinct user-presentable outcome.
 */
export async function classifyRemote(
  payload: SelectionPayload,
  endpoint: string = DEFAULT_ENDPOINT,
  options: ClassifyOptions = {},
): Promise<ClassifyOutcome> {
  const fetchFn = options.fetchFn ?? fetch;
  const timeoutMs = options.timeoutMs ?? REQUEST_TIMEOUT_MS;

  const controller = new AbortController();
  const timer = setTimeout(() => controller.abort(), timeoutMs);
  if (options.signal) {
    options.signal.addEventListener('abort', () => controller.abort(), { once: true });
  }

  let httpResponse: Response;
  try {
    httpResponse = await fetchFn(`${endpoint.replace(/\/$/, '')}/v1/classify`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ text: payload.text }),
      signal: controller.signal,
    });
  } catch (error) {
    if (error instanceof DOMException && error.name === 'AbortError') {
      return failure('timeout', 'The service did not answer within 10 seconds.', true);
    }
    return failure('network', 'Could not reach the classification service.', true);
  } finally {
    clearTimeout(timer);
  }

  if (httpResponse.status === 503) {
    return failure('service_unavailable',
      'The classification service is unavailable. Is it running?', true);
  }

  let body: unknown;
  try {
    body = await httpResponse.json();
  } catch {
    return failure('bad_response', 'The service returned an unreadable reply.');
  }

  if (!httpResponse.ok) {
    const code = (body as { error?: { code?: string } })?.error?.code;
    if (code === 'too_long') {
      return failure('too_long', 'The selection is too long; try a shorter passage.');
    }
    if (code === 'empty_text') {
      return failure('empty_text', 'Nothing to classify in that selection.');
    }
    return failure('bad_response', `The service rejected the request (${httpResponse.status}).`);
  }

  const response = body as ClassifyResponse;
  if (typeof response?.p_fake !== 'number' || (response.label !== 'fake' && response.label !== 'real')) {
    return failure('bad_response', 'The service reply is missing the verdict fields.');
  }
  return { ok: true, response };
}
