// Payload shapes of the labeling service (JSON over HTTP).

export interface ClusterSummary {
  id: number;
  size: number;
  label: string | null;
  representatives: string[];
}

export interface MemberRow {
  id: string;
  text: string;
}

export interface MemberPage {
  cluster: number;
  page: number;
  page_size: number;
  total: number;
  members: MemberRow[];
}

export interface ProgressCounts {
  total: number;
  clustered: number;
  labeled: number;
  propagated: number;
  unlabeled: number;
}

export interface PropagationSummary {
  propagated: number;
  remaining_unlabeled: number;
  per_intent: Record<string, number>;
  threshold: number;
}
