/** Wire and view-model types shared across the extension. */

export interface ExplanationToken {
  surface: string;
  start: number;
  end: number;
  force: number;
}

export interface Explanation {
  base_value: number;
  p_fake: number;
  label: 'fake' | 'real';
  method: string;
  samples_used: number;
  tokens: ExplanationToken[];
}

export interface ClassifyResponse {
  label: 'fake' | 'real';
  p_fake: number;
  model_id: string;
  explanation: Explanation | null;
  elapsed_ms: number;
}

export interface SelectionPayload {
  text: string;
  pageUrl: string;
  timestamp: string;
}

export type Hue = 'warning' | 'reassuring' | 'neutral';

export interface TokenStyle {
  surface: string;
  force: number;
  /** |force| / max|force| over the response; 0 when every force is 0. */
  intensity: number;
  hue: Hue;
  /** Inline CSS background; alpha grows monotonically with intensity. */
  background: string;
}

export interface RenderedVerdict {
  label: 'fake' | 'real';
  /** Confidence in the shown label, e.g. "REAL 97%" for p_fake 0.03. */
  badgeText: string;
  probabilityPercent: number;
  hasExplanation: boolean;
  tokens: TokenStyle[];
}
