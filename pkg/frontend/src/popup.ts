import { classifyRemote, DEFAULT_ENDPOINT } from './api.js';
import { buildVerdict, verdictToHtml } from './render.js';
import { toSelectionPayload } from './selection.js';

// Only one classification may be in flight; a new trigger abandons the
// previous one so a stale answer can never overwrite a fresh render.
let requestEpoch = 0;
let inFlight: AbortController | null = null;

function show(html: string): void {
  const container = document.getElementById('result');
  if (container) {
    container.innerHTML = html;
  }
}

function showBanner(kind: string, message: string, retryable: boolean): void {
  const retry = retryable ? ' <button id="retry">Retry</button>' : '';
  show(`<div class="banner banner-${kind}">${message}${retry}</div>`);
  document.getElementById('retry')?.addEventListener('click', () => void run());
}

async function readSelectionFromActiveTab(): Promise<{ text: string; url: string } | null> {
  const [tab] = await chrome.tabs.query({ active: true, currentWindow: true });
  if (!tab?.id) {
    return null;
  }
  const results = await chrome.scripting.executeScript({
    target: { tabId: tab.id },
    func: () => window.getSelection()?.toString() ?? '',
  });
  return { text: results[0]?.result ?? '', url: tab.url ?? '' };
}

async function endpointSetting(): Promise<string> {
  const stored = await chrome.storage.sync.get({ endpoint: DEFAULT_ENDPOINT });
  return (stored.endpoint as string) || DEFAULT_ENDPOINT;
}

export async function run(): Promise<void> {
  const epoch = ++requestEpoch;
  inFlight?.abort();

  const selection = await readSelectionFromActiveTab();
  const payload = selection && toSelectionPayload(selection.text, selection.url);
  if (!payload) {
    show('<div class="banner banner-prompt">Highlight some text on the page, '
      + 'then click the icon again.</div>');
    return;
  }

  show('<div class="banner banner-progress">Classifying…</div>');
  const controller = new AbortController();
  inFlight = controller;
  const outcome = await classifyRemote(payload, await endpointSetting(),
    { signal: controller.signal });
  if (epoch !== requestEpoch) {
    return; // a newer trigger owns the popup now
  }
  inFlight = null;

  if (!outcome.ok) {
    showBanner(outcome.kind, outcome.message, outcome.retryable);
    return;
  }
  show(verdictToHtml(buildVerdict(outcome.response)));
}

document.addEventListener('DOMContentLoaded', () => {
  document.getElementById('classify')?.addEventListener('click', () => void run());
  void run();
});
