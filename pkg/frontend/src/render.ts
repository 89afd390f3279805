import type { ClassifyResponse, Hue, RenderedVerdict, TokenStyle } from './types.js';

// Warning tint for forces pushing toward "fake", reassuring for "real".
const WARNING_RGB = '217, 48, 37';
const REASSURING_RGB = '24, 128, 56';
const MAX_ALPHA = 0.8;

function hueFor(force: number, maxAbs: number): Hue {
  if (maxAbs === 0 || force === 0) {
    return 'neutral';
  }
  return force > 0 ? 'warning' : 'reassuring';
}

function backgroundFor(hue: Hue, intensity: number): string {
  if (hue === 'neutral' || intensity === 0) {
    return 'transparent';
  }
  const rgb = hue === 'warning' ? WARNING_RGB : REASSURING_RGB;
  const alpha = (MAX_ALPHA * intensity).toFixed(3);
  return `rgba(${rgb}, ${alpha})`;
}

/**
 * Pure view model for one classification response. Token order and
 * surfaces mirror the explanation payload exactly; intensity is
 * |force| / max|force| (all neutral when every force is zero).
 */
export function buildVerdict(response: ClassifyResponse): RenderedVerdict {
  const shownProbability =
    response.label === 'fake' ? response.p_fake : 1 - response.p_fake;
  const probabilityPercent = Math.round(100 * shownProbability);
  const badgeText = `${response.label.toUpperCase()} ${probabilityPercent}%`;

  const explanation = response.explanation;
  let tokens: TokenStyle[] = [];
  if (explanation) {
    const maxAbs = Math.max(0, ...explanation.tokens.map((t) => Math.abs(t.force)));
    tokens = explanation.tokens.map((token) => {
      const intensity = maxAbs > 0 ? Math.abs(token.force) / maxAbs : 0;
      const hue = hueFor(token.force, maxAbs);
      return {
        surface: token.surface,
        force: token.force,
        intensity,
        hue,
        background: backgroundFor(hue, intensity),
      };
    });
  }

  return {
    label: response.label,
    badgeText,
    probabilityPercent,
    hasExplanation: explanation !== null && explanation !== undefined,
    tokens,
  };
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** Deterministic HTML for the popup body; pure string building, no DOM. */
export function verdictToHtml(verdict: RenderedVerdict): string {
  const badgeClass = verdict.label === 'fake' ? 'badge badge-fake' : 'badge badge-real';
  const parts = [`<div class="${badgeClass}">${escapeHtml(verdict.badgeText)}</div>`];
  if (verdict.hasExplanation) {
    const chips = verdict.tokens
      .map(
        (token) =>
          `<span class="token token-${token.hue}" style="background:${token.background}" ` +
          `title="force ${token.force.toFixed(4)}">${escapeHtml(token.surface)}</span>`,
      )
      .join(' ');
    parts.push(`<p class="tokens">${chips}</p>`);
  } else {
    parts.push('<p class="tokens tokens-empty">No explanation returned.</p>');
  }
  return parts.join('\n');
}
