import type { SelectionPayload } from './types.js';

/**
 * Build the payload for the current selection. Returns null for an empty
 * (or whitespace-only) selection so the caller can prompt instead of
 * issuing a network request.
 */
export function toSelectionPayload(
  rawSelection: string | null | undefined,
  pageUrl: string,
  now: Date = new Date(),
): SelectionPayload | null {
  const text = (rawSelection ?? '').trim();
  if (!text) {
    return null;
  }
  return { text, pageUrl, timestamp: now.toISOString() };
}
