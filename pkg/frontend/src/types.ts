/** JSON contracts of the triage service API. */

export type Verdict = "benign" | "needs_review" | "phishing";

export interface QueueItem {
  message_id: string;
  redacted_subject: string;
  verdict: Verdict;
  display_score: number;
  created_at: string;
}

export interface Indicator {
  rule_id: string;
  weight: number;
  evidence: string;
}

export interface AttackMatch {
  attack: string;
  confidence: string;
  confidence_value: number;
  satisfied_properties: string[];
}

export interface NeighborHit {
  id: string;
  similarity: number;
  snippet: string;
}

export type Groundedness = "SUPPORTED" | "UNSUPPORTED" | "UNKNOWN";

export interface ExplanationBullet {
  tag: string;
  text: string;
  groundedness: Groundedness;
  groundedness_reason: string;
}

export interface AnalysisRecord {
  message_id: string;
  redacted_subject: string;
  created_at?: string;
  degraded: boolean;
  phase1: {
    score: number;
    verdict: Verdict;
    indicators: Indicator[];
  };
  attacks: AttackMatch[];
  reasoning_chain: string;
  neighbors: NeighborHit[];
  similarity: { s_top: number; s_avg: number; empty: boolean };
  decision: {
    verdict: Verdict;
    rag_score: number;
    display_score: number;
    rationale_code: string;
  };
  explanations: ExplanationBullet[];
  review?: { decision: string; reviewer: string; decided_at: string };
}

export type ReviewDecision = "confirm_phishing" | "mark_benign";

export interface Metrics {
  total_analyzed: number;
  verdict_counts: Record<string, number>;
  review_rate: number;
  pending: number;
  degraded: boolean;
}
