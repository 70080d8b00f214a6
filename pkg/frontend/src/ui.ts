// HTML renderers for the labeling board. Pure string builders so they are
// testable without a DOM; main.ts owns mounting and event wiring.

import type { BoardState } from "./state.js";
import {
  badgeFor,
  canPropagate,
  coverageFraction,
  intentHistogram,
  noiseFraction,
  pageCount,
  visibleClusters,
} from "./state.js";
import type { ClusterSummary, MemberPage, ProgressCounts } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderClusterCard(cluster: ClusterSummary): string {
  const badgeClass = cluster.label === null ? "badge unlabeled" : "badge labeled";
  const reps = cluster.representatives
    .map((t) => `<li>${escapeHtml(t)}</li>`)
    .join("");
  return `
  <div class="card" data-cluster="${cluster.id}">
    <div class="card-head">
      <span class="cluster-id">#${cluster.id}</span>
      <span class="cluster-size">${cluster.size} utterances</span>
      <span class="${badgeClass}">${escapeHtml(badgeFor(cluster))}</span>
    </div>
    <ul class="representatives">${reps}</ul>
    <button class="label-btn" data-cluster="${cluster.id}">label</button>
    <button class="members-btn" data-cluster="${cluster.id}">members</button>
  </div>`;
}

export function renderProgressBar(progress: ProgressCounts): string {
  const pct = Math.round(coverageFraction(progress) * 100);
  return `
  <div class="progress">
    <div class="progress-fill" style="width:${pct}%"></div>
    <span class="progress-text">
      ${progress.labeled} labeled + ${progress.propagated} propagated
      of ${progress.total} (${pct}%), ${progress.unlabeled} left
    </span>
  </div>`;
}

export function renderBoard(state: BoardState): string {
  const cards = visibleClusters(state).map(renderClusterCard).join("\n");
  const pages = pageCount(state.clusters.length);
  const pager =
    pages > 1
      ? `<div class="pager">
           <button class="page-prev" ${state.page === 0 ? "disabled" : ""}>prev</button>
           <span>page ${state.page + 1} / ${pages}</span>
           <button class="page-next" ${state.page >= pages - 1 ? "disabled" : ""}>next</button>
         </div>`
      : "";
  const noise = state.progress
    ? `<div class="noise">noise fraction: ${(noiseFraction(state.progress) * 100).toFixed(1)}%</div>`
    : "";
  const error = state.error
    ? `<div class="error">${escapeHtml(state.error)}</div>`
    : "";
  return `${error}${noise}<div class="board">${cards}</div>${pager}`;
}

export function renderMemberPage(page: MemberPage): string {
  const rows = page.members
    .map((m) => `<li><code>${escapeHtml(m.id)}</code> ${escapeHtml(m.text)}</li>`)
    .join("");
  return `
  <div class="members" data-cluster="${page.cluster}">
    <h3>cluster #${page.cluster} (${page.total} members)</h3>
    <ul>${rows}</ul>
    <div class="pager">
      <button class="members-prev" ${page.page === 0 ? "disabled" : ""}>prev</button>
      <span>page ${page.page + 1}</span>
      <button class="members-next"
        ${(page.page + 1) * page.page_size >= page.total ? "disabled" : ""}>next</button>
    </div>
  </div>`;
}

export function renderLabelDialog(cluster: ClusterSummary, draft: string): string {
  const disabled = draft.trim().length === 0 ? "disabled" : "";
  return `
  <div class="dialog" data-cluster="${cluster.id}">
    <h3>label cluster #${cluster.id}</h3>
    <p>${cluster.size} utterances, currently ${escapeHtml(badgeFor(cluster))}</p>
    <input class="intent-input" value="${escapeHtml(draft)}"
           placeholder="intent name, e.g. login_issue">
    <button class="intent-submit" ${disabled}>confirm</button>
    <button class="dialog-cancel">cancel</button>
  </div>`;
}

export function renderPropagationPanel(state: BoardState, threshold: number): string {
  const enabled = canPropagate(state.clusters);
  const summary = state.propagation;
  const histogram = summary
    ? `<ul class="histogram">${intentHistogram(summary)
        .map(
          ([intent, count]) =>
            `<li><span class="intent">${escapeHtml(intent)}</span>` +
            `<span class="count">${count}</span></li>`,
        )
        .join("")}</ul>
       <p class="summary">propagated ${summary.propagated},
          remaining unlabeled ${summary.remaining_unlabeled}
          (threshold ${summary.threshold})</p>`
    : "";
  const hint = enabled
    ? ""
    : `<p class="hint">label at least two clusters to enable propagation</p>`;
  return `
  <div class="panel">
    <h3>propagation</h3>
    <label>confidence threshold
      <input type="range" class="threshold" min="0" max="1" step="0.05"
             value="${threshold}">
      <span class="threshold-value">${threshold.toFixed(2)}</span>
    </label>
    <button class="propagate-btn" ${enabled ? "" : "disabled"}>propagate</button>
    ${hint}${histogram}
    <button class="export-btn">download labeled corpus (JSONL)</button>
  </div>`;
}
