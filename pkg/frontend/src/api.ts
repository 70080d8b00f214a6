// Typed client for the labeling service. GETs are idempotent and retried
// once on transport failure; mutations are never retried.

import type {
  ClusterSummary,
  MemberPage,
  ProgressCounts,
  PropagationSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** Human guidance for errors the expert can act on. */
export function guidanceFor(error: unknown): string {
  if (error instanceof ApiError) {
    if (error.status === 409) {
      return "Label at least two clusters with two distinct intents before propagating.";
    }
    if (error.status === 404) {
      return "That cluster no longer exists; refresh the board.";
    }
    return error.detail;
  }
  return "The labeling service is unreachable. Is it still running?";
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(
    path: string,
    init: RequestInit | undefined,
    retries: number,
  ): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      if (retries > 0) return this.request<T>(path, init, retries - 1);
      throw err;
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private get<T>(path: string): Promise<T> {
    return this.request<T>(path, undefined, 1);
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(
      path,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      },
      0,
    );
  }

  clusters(): Promise<ClusterSummary[]> {
    return this.get("/clusters");
  }

  members(clusterId: number, page: number, pageSize: number): Promise<MemberPage> {
    return this.get(
      `/clusters/${clusterId}/members?page=${page}&page_size=${pageSize}`,
    );
  }

  labelCluster(clusterId: number, intent: string): Promise<ClusterSummary> {
    return this.post(`/clusters/${clusterId}/label`, { intent });
  }

  propagate(threshold: number): Promise<PropagationSummary> {
    return this.post("/propagate", { threshold });
  }

  progress(): Promise<ProgressCounts> {
    return this.get("/progress");
  }

  /** Raw JSONL body of the labeled training corpus. */
  async exportCorpus(): Promise<string> {
    const response = await this.fetchFn(this.baseUrl + "/export");
    if (!response.ok) {
      throw new ApiError(response.status, response.statusText);
    }
    return response.text();
  }
}
