// Pure view-model for the labeling board. Everything here is a function of
// the latest API responses; no labeling decision lives only on the client.

import type {
  ClusterSummary,
  ProgressCounts,
  PropagationSummary,
} from "./types.js";

export const CLUSTERS_PER_PAGE = 50;
export const DEFAULT_THRESHOLD = 0.7;

export interface BoardState {
  clusters: ClusterSummary[];
  page: number;
  progress: ProgressCounts | null;
  propagation: PropagationSummary | null;
  error: string | null;
}

export function initialState(): BoardState {
  return { clusters: [], page: 0, progress: null, propagation: null, error: null };
}

export function pageCount(clusterCount: number): number {
  return Math.max(1, Math.ceil(clusterCount / CLUSTERS_PER_PAGE));
}

export function withClusters(state: BoardState, clusters: ClusterSummary[]): BoardState {
  const page = Math.min(state.page, pageCount(clusters.length) - 1);
  return { ...state, clusters, page, error: null };
}

export function withProgress(state: BoardState, progress: ProgressCounts): BoardState {
  return { ...state, progress };
}

export function withPropagation(
  state: BoardState,
  propagation: PropagationSummary,
): BoardState {
  return { ...state, propagation, error: null };
}

export function withError(state: BoardState, error: string): BoardState {
  return { ...state, error };
}

export function withPage(state: BoardState, page: number): BoardState {
  const clamped = Math.min(Math.max(page, 0), pageCount(state.clusters.length) - 1);
  return { ...state, page: clamped };
}

export function visibleClusters(state: BoardState): ClusterSummary[] {
  const start = state.page * CLUSTERS_PER_PAGE;
  return state.clusters.slice(start, start + CLUSTERS_PER_PAGE);
}

export function badgeFor(cluster: ClusterSummary): string {
  return cluster.label ?? "unlabeled";
}

export function labeledCount(clusters: ClusterSummary[]): number {
  return clusters.filter((c) => c.label !== null).length;
}

/** Propagation needs at least two labeled clusters. */
export function canPropagate(clusters: ClusterSummary[]): boolean {
  return labeledCount(clusters) >= 2;
}

/** Client-side gate for the label dialog: no empty or whitespace intents. */
export function intentValid(intent: string): boolean {
  return intent.trim().length > 0;
}

export function noiseFraction(progress: ProgressCounts): number {
  return progress.total === 0 ? 0 : (progress.total - progress.clustered) / progress.total;
}

export function coverageFraction(progress: ProgressCounts): number {
  return progress.total === 0
    ? 0
    : (progress.labeled + progress.propagated) / progress.total;
}

/** (intent, count) pairs sorted by count descending, then name. */
export function intentHistogram(summary: PropagationSummary): [string, number][] {
  return Object.entries(summary.per_intent).sort(
    (a, b) => b[1] - a[1] || a[0].localeCompare(b[0]),
  );
}
