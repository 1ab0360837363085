"""Dual-phase phishing triage: deterministic weighted rules plus
privacy-redacted retrieval over known attacks, fused by a conservative
cascade, with ontology-backed attack labels and grounded explanations."""

from .decision import CascadeConfig, FinalDecision, cascade, operating_mode
from .message import EmailMessage, load_jsonl_corpus, parse_eml, parse_mbox
from .pipeline import AnalysisOutcome, PipelineConfig, analyze_message
from .redaction import redact, scan_exposure
from .rules import Phase1Result, RuleConfig, run_rules

__version__ = "0.1.0"

__all__ = [
    "AnalysisOutcome",
    "CascadeConfig",
    "EmailMessage",
    "FinalDecision",
    "Phase1Result",
    "PipelineConfig",
    "RuleConfig",
    "analyze_message",
    "cascade",
    "load_jsonl_corpus",
    "operating_mode",
    "parse_eml",
    "parse_mbox",
    "redact",
    "run_rules",
    "scan_exposure",
]
