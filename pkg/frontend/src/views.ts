/** Pure HTML renderers; all dynamic text passes through escapeHtml. */

import type { StoreState } from "./store.js";
import type { AnalysisRecord, QueueItem } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function renderBanner(state: StoreState): string {
  if (!state.connectionLost) return "";
  return (
    '<div class="banner banner-error" data-role="connection-banner">' +
    "Service unreachable — retrying. " +
    '<button data-action="retry">Retry now</button></div>'
  );
}

export function renderToast(state: StoreState): string {
  if (!state.toast) return "";
  return (
    `<div class="toast toast-${state.toast.kind}" data-role="toast">` +
    `${escapeHtml(state.toast.text)}` +
    '<button data-action="dismiss-toast">×</button></div>'
  );
}

export function renderQueue(state: StoreState): string {
  if (state.items.length === 0) {
    return '<div class="empty-state" data-role="empty-queue">Queue is empty — nothing awaiting review.</div>';
  }
  const rows = state.items.map((item) => renderRow(item, state.selectedId)).join("");
  return (
    '<table class="queue"><thead><tr>' +
    "<th>Message</th><th>Subject</th><th>Score</th><th>Received</th><th></th>" +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

function renderRow(item: QueueItem, selectedId: string | null): string {
  const id = escapeHtml(item.message_id);
  const selected = item.message_id === selectedId ? " selected" : "";
  return (
    `<tr class="queue-row${selected}" data-id="${id}">` +
    `<td><button data-action="select" data-id="${id}">${id}</button></td>` +
    `<td>${escapeHtml(item.redacted_subject)}</td>` +
    `<td>${item.display_score.toFixed(1)}</td>` +
    `<td>${escapeHtml(item.created_at)}</td>` +
    "<td>" +
    `<button data-action="confirm" data-id="${id}">Confirm phishing</button>` +
    `<button data-action="benign" data-id="${id}">Mark benign</button>` +
    "</td></tr>"
  );
}

export function renderDetail(state: StoreState): string {
  if (state.notFound) {
    return '<div class="empty-state" data-role="not-found">Record not found (it may have been decided elsewhere).</div>';
  }
  if (!state.selectedId) {
    return '<div class="empty-state">Select a record to inspect its evidence.</div>';
  }
  if (!state.selectedRecord) {
    return '<div class="empty-state">Loading…</div>';
  }
  const record = state.selectedRecord;
  return (
    `<article class="detail" data-id="${escapeHtml(record.message_id)}">` +
    renderHeader(record) +
    renderLayer1(record) +
    renderOntology(record) +
    renderLayer2(record) +
    renderLayer3(record) +
    "</article>"
  );
}

function renderHeader(record: AnalysisRecord): string {
  return (
    `<header><h2>${escapeHtml(record.message_id)}</h2>` +
    `<p class="subject">${escapeHtml(record.redacted_subject)}</p>` +
    `<p>Verdict: <strong class="verdict-${record.decision.verdict}">` +
    `${record.decision.verdict}</strong>` +
    ` (${escapeHtml(record.decision.rationale_code)},` +
    ` score ${record.decision.display_score.toFixed(1)}/10)` +
    (record.degraded ? ' <span class="degraded">degraded: no retrieval</span>' : "") +
    "</p></header>"
  );
}

function renderLayer1(record: AnalysisRecord): string {
  const rows = record.phase1.indicators
    .map(
      (ind) =>
        `<tr><td>${escapeHtml(ind.rule_id)}</td>` +
        `<td>+${ind.weight}</td>` +
        `<td>${escapeHtml(ind.evidence)}</td></tr>`,
    )
    .join("");
  const body = record.phase1.indicators.length
    ? `<table><thead><tr><th>Rule</th><th>Weight</th><th>Evidence</th></tr></thead><tbody>${rows}</tbody></table>`
    : '<p class="empty-state">No rules fired.</p>';
  return (
    '<section class="layer" data-layer="1"><h3>Layer 1 — Symbolic indicators' +
    ` (score ${record.phase1.score})</h3>${body}</section>`
  );
}

function renderOntology(record: AnalysisRecord): string {
  if (record.attacks.length === 0) return "";
  const matches = record.attacks
    .map(
      (a) =>
        `<li><strong>${escapeHtml(a.attack)}</strong> ` +
        `(confidence ${escapeHtml(a.confidence)})</li>`,
    )
    .join("");
  const steps = record.reasoning_chain
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => `<li class="chain-step">${escapeHtml(line)}</li>`)
    .join("");
  return (
    '<section class="layer" data-layer="ontology"><h3>Attack classification</h3>' +
    `<ul class="attacks">${matches}</ul>` +
    `<ol class="chain" data-role="reasoning-chain">${steps}</ol></section>`
  );
}

function renderLayer2(record: AnalysisRecord): string {
  const top = record.neighbors.slice(0, 3);
  const body = top.length
    ? "<ol>" +
      top
        .map(
          (n) =>
            `<li><span class="sim">${(n.similarity * 100).toFixed(1)}%</span> ` +
            `<code>${escapeHtml(n.id)}</code> — ${escapeHtml(n.snippet)}</li>`,
        )
        .join("") +
      "</ol>"
    : '<p class="empty-state" data-role="no-neighbors">No similar attacks retrieved.</p>';
  return `<section class="layer" data-layer="2"><h3>Layer 2 — Similar known attacks</h3>${body}</section>`;
}

function renderLayer3(record: AnalysisRecord): string {
  const bullets = record.explanations
    .map(
      (b) =>
        `<li><span class="tag">[${escapeHtml(b.tag)}]</span> ` +
        `${escapeHtml(b.text)} ` +
        `<span class="badge badge-${b.groundedness.toLowerCase()}" ` +
        `title="${escapeHtml(b.groundedness_reason)}">${b.groundedness}</span></li>`,
    )
    .join("");
  const body = bullets
    ? `<ul class="explanations">${bullets}</ul>`
    : '<p class="empty-state">No explanations generated.</p>';
  return `<section class="layer" data-layer="3"><h3>Layer 3 — Explanations</h3>${body}</section>`;
}

export function renderApp(state: StoreState): string {
  return (
    renderBanner(state) +
    renderToast(state) +
    '<div class="columns">' +
    `<section class="queue-pane">${renderQueue(state)}</section>` +
    `<section class="detail-pane">${renderDetail(state)}</section>` +
    "</div>"
  );
}
