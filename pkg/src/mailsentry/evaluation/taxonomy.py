"""Categorize misclassified emails by root cause.

False negatives are binned by a strict precedence order so every case gets
exactly one category; false positives share a single category (weak signals
stacking past the threshold is the only mechanism that produces them).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dns import DnsRecordSet
from ..rules import RuleConfig

FN_CATEGORIES = (
    "zero_score",
    "no_urls",
    "legitimate_dns",
    "below_threshold",
    "low_signal_content",
    "multiple_factors",
)
FP_CATEGORY = "multiple_weak_signals"

_CONTENT_SIGNALS = frozenset({"urgency_keywords", "credential_request"})


@dataclass(frozen=True)
class CaseInput:
    """One pipeline outcome with the evidence the taxonomy inspects."""

    message_id: str
    truth: str
    verdict: str
    score: int
    fired: tuple[str, ...]
    has_urls: bool
    dns: DnsRecordSet | None


@dataclass(frozen=True)
class FailureCase:
    message_id: str
    kind: str  # FN | FP
    category: str


def _fn_category(case: CaseInput, config: RuleConfig) -> str:
    if not case.fired:
        return "zero_score"
    if not case.has_urls:
        return "no_urls"
    dns = case.dns
    if dns is not None and dns.has_mx and dns.spf == "pass_policy" and dns.has_dmarc:
        return "legitimate_dns"
    if 0 < case.score < config.benign_upper:
        return "below_threshold"
    if not (_CONTENT_SIGNALS & set(case.fired)):
        return "low_signal_content"
    return "multiple_factors"


def failure_taxonomy(results: list[CaseInput],
                     config: RuleConfig | None = None,
                     mapping: str = "strict"
                     ) -> tuple[list[FailureCase], dict[str, int]]:
    """FN/FP cases with categories, plus a category count summary."""
    from .metrics import binarize

    config = config or RuleConfig()
    cases: list[FailureCase] = []
    summary: dict[str, int] = {}
    for case in results:
        predicted = binarize(case.verdict, mapping)
        actual = case.truth == "phishing"
        if predicted == actual:
            continue
        if actual:
            category = _fn_category(case, config)
            kind = "FN"
        else:
            category = FP_CATEGORY
            kind = "FP"
        cases.append(FailureCase(case.message_id, kind, category))
        summary[category] = summary.get(category, 0) + 1
    return cases, summary
