/** In-memory stand-in for the triage service, faithful to its semantics:
 * pending = needs_review without a review; decisions are write-once (409);
 * unknown records 404. */

import type { FetchLike } from "../src/api.js";
import type { AnalysisRecord, QueueItem } from "../src/types.js";

export function makeRecord(id: string, overrides: Partial<AnalysisRecord> = {}): AnalysisRecord {
  return {
    message_id: id,
    redacted_subject: `Notice for ${id}`,
    created_at: "2026-08-23T10:00:00Z",
    degraded: false,
    phase1: {
      score: 4,
      verdict: "needs_review",
      indicators: [
        { rule_id: "credential_request", weight: 2, evidence: "password prompt" },
        { rule_id: "generic_greeting", weight: 1, evidence: "dear customer" },
      ],
    },
    attacks: [
      {
        attack: "CredentialTheft",
        confidence: "1/2",
        confidence_value: 0.5,
        satisfied_properties: ["hasCredentialRequest"],
      },
    ],
    reasoning_chain:
      "hasCredentialRequest |= universal-axiom-of(CredentialTheft) => CredentialTheft (c=1/2)",
    neighbors: [
      { id: "seed-001", similarity: 0.42, snippet: "verify your account now" },
      { id: "seed-002", similarity: 0.31, snippet: "update billing details" },
      { id: "seed-003", similarity: 0.22, snippet: "password expires today" },
    ],
    similarity: { s_top: 0.42, s_avg: 0.3167, empty: false },
    decision: {
      verdict: "needs_review",
      rag_score: 0.384,
      display_score: 3.8,
      rationale_code: "mid_sim_review",
    },
    explanations: [
      {
        tag: "CONTENT",
        text: "Credential-request language present.",
        groundedness: "SUPPORTED",
        groundedness_reason: "rule credential_request fired",
      },
      {
        tag: "SIMILARITY",
        text: "Top similarity 0.420 to a known attack.",
        groundedness: "SUPPORTED",
        groundedness_reason: "similarity matches a neighbor",
      },
    ],
    ...overrides,
  };
}

function summary(record: AnalysisRecord): QueueItem {
  return {
    message_id: record.message_id,
    redacted_subject: record.redacted_subject,
    verdict: record.decision.verdict,
    display_score: record.decision.display_score,
    created_at: record.created_at ?? "",
  };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export class FakeService {
  records = new Map<string, AnalysisRecord>();
  offline = false;
  /** resolve to release in-flight decision posts (when gated) */
  gate: Promise<void> | null = null;
  requestLog: string[] = [];

  seed(count: number): void {
    for (let i = 0; i < count; i++) {
      const id = `review-${i}`;
      this.records.set(id, makeRecord(id));
    }
  }

  pending(): QueueItem[] {
    return [...this.records.values()]
      .filter((r) => r.decision.verdict === "needs_review" && !r.review)
      .map(summary);
  }

  fetch: FetchLike = async (input, init) => {
    this.requestLog.push(`${init?.method ?? "GET"} ${input}`);
    if (this.offline) throw new TypeError("fetch failed");

    if (input === "/api/queue") return json(this.pending());

    const recordMatch = input.match(/^\/api\/records\/(.+)$/);
    if (recordMatch) {
      const record = this.records.get(decodeURIComponent(recordMatch[1]));
      return record ? json(record) : json({ detail: "unknown record" }, 404);
    }

    const decideMatch = input.match(/^\/api\/queue\/(.+)\/decision$/);
    if (decideMatch && init?.method === "POST") {
      if (this.gate) await this.gate;
      const id = decodeURIComponent(decideMatch[1]);
      const record = this.records.get(id);
      if (!record) return json({ detail: "unknown record" }, 404);
      if (record.review) return json({ detail: "already decided" }, 409);
      const body = JSON.parse(String(init.body)) as {
        decision: string;
        reviewer: string;
      };
      record.review = {
        decision: body.decision,
        reviewer: body.reviewer,
        decided_at: "2026-08-23T10:05:00Z",
      };
      return json(record);
    }

    return json({ detail: "not found" }, 404);
  };
}
