/**
 * Pure HTML-string renderers (kept DOM-free so they unit test in node).
 * Results are rendered exactly in the order the API returned them.
 */
import { AppState, ChatTurnView } from './state.js';

export const SNIPPET_LIMIT = 300;

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderChips(expansion: ChatTurnView['expansion']): string {
  return expansion
    .map(
      (e) =>
        `<span class="chip chip-${e.provenance}" data-provenance="${e.provenance}">${escapeHtml(e.term)}</span>`,
    )
    .join('');
}

export function renderLegend(): string {
  const kinds = ['original', 'session', 'query', 'pqe'];
  return `<div class="legend">${kinds
    .map((k) => `<span class="chip chip-${k}">${k}</span>`)
    .join('')}</div>`;
}

export function renderResult(r: ChatTurnView['results'][number]): string {
  const full = escapeHtml(r.text);
  const body =
    r.text.length > SNIPPET_LIMIT
      ? `<details class="snippet"><summary>${escapeHtml(r.text.slice(0, SNIPPET_LIMIT))}&hellip;</summary>${full}</details>`
      : `<span class="snippet">${full}</span>`;
  return (
    `<li class="result" data-rank="${r.rank}">` +
    `<span class="rank">#${r.rank}</span> ` +
    `<span class="pid">${escapeHtml(r.passage_id)}</span> ` +
    `<span class="score">${r.score.toFixed(4)}</span> ${body}</li>`
  );
}

export function renderTurn(turn: ChatTurnView, showExplain: boolean): string {
  const badge = turn.degraded ? '<span class="badge badge-degraded">degraded</span>' : '';
  const chips = showExplain
    ? `<div class="expansion">${renderChips(turn.expansion)}</div>`
    : '';
  const rewritten =
    showExplain && turn.rewritten !== turn.utterance
      ? `<div class="rewritten">rewritten: ${escapeHtml(turn.rewritten)}</div>`
      : '';
  return (
    `<section class="turn">` +
    `<div class="utterance">${escapeHtml(turn.utterance)} ${badge}</div>` +
    chips +
    rewritten +
    `<ol class="results">${turn.results.map(renderResult).join('')}</ol>` +
    `</section>`
  );
}

export function renderApp(state: AppState): string {
  const turns = state.turns.map((t) => renderTurn(t, state.showExplain)).join('');
  const toast = state.toast
    ? `<div class="toast" role="alert">${escapeHtml(state.toast)}` +
      (state.sessionLost ? ' <button id="new-session-retry">New session</button>' : '') +
      `</div>`
    : '';
  return `${state.showExplain ? renderLegend() : ''}<div id="turns">${turns}</div>${toast}`;
}
