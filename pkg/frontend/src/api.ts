/** Thin fetch client over the service JSON API. */

import type { AnalysisRecord, Metrics, QueueItem, ReviewDecision } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Network-level failure (service unreachable), distinct from HTTP errors. */
export class ConnectionError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
    this.name = "ConnectionError";
  }
}

export class ApiClient {
  /** Bearer token held in memory only; never persisted. */
  token: string | null = null;

  constructor(
    private readonly fetchImpl: FetchLike,
    private readonly base = "",
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const headers: Record<string, string> = {
      ...(init?.headers as Record<string, string> | undefined),
    };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    let response: Response;
    try {
      response = await this.fetchImpl(this.base + path, { ...init, headers });
    } catch (cause) {
      throw new ConnectionError(cause);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  getQueue(): Promise<QueueItem[]> {
    return this.request<QueueItem[]>("/api/queue");
  }

  getRecord(id: string): Promise<AnalysisRecord> {
    return this.request<AnalysisRecord>(`/api/records/${encodeURIComponent(id)}`);
  }

  getMetrics(): Promise<Metrics> {
    return this.request<Metrics>("/api/metrics");
  }

  submitDecision(
    id: string,
    decision: ReviewDecision,
    reviewer: string,
  ): Promise<AnalysisRecord> {
    return this.request<AnalysisRecord>(
      `/api/queue/${encodeURIComponent(id)}/decision`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ decision, reviewer }),
      },
    );
  }
}
