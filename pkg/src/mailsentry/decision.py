"""Verdict fusion: the conservative cascade over Phase 1 and similarity stats.

A Phase 1 phishing verdict is absorbing. Otherwise high similarity (or a
review verdict with strong average similarity) promotes to phishing, mid
similarity promotes to needs_review, and low similarity inherits Phase 1.
The blended score is decoupled from the verdict entirely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .errors import UnknownMode
from .retrieval.index import SimilarityStats
from .rules import VERDICT_PHISHING, VERDICT_REVIEW, Phase1Result

RATIONALE_PHASE1_OVERRIDE = "phase1_override"
RATIONALE_HIGH_SIM = "high_sim"
RATIONALE_REVIEW_AVG_PROMOTE = "review_avg_promote"
RATIONALE_MID_SIM_REVIEW = "mid_sim_review"
RATIONALE_INHERIT = "inherit"

BLEND_TOP = 0.65
BLEND_AVG = 0.35


@dataclass(frozen=True)
class CascadeConfig:
    tau_h: float = 0.40
    tau_review_avg: float = 0.35
    tau_l: float = 0.25
    tau_l_avg: float = 0.17
    blend: tuple[float, float] = (BLEND_TOP, BLEND_AVG)

    def __post_init__(self):
        if not self.tau_l < self.tau_h:
            raise ValueError("tau_l must be < tau_h")
        if not self.tau_l_avg < self.tau_review_avg:
            raise ValueError("tau_l_avg must be < tau_review_avg")
        if abs(sum(self.blend) - 1.0) > 1e-12:
            raise ValueError("blend weights must sum to 1")


@dataclass(frozen=True)
class FinalDecision:
    verdict: str
    rag_score: float
    display_score: float  # 10 * clamp(rag_score, 0, 1)
    rationale_code: str


def cascade(phase1: Phase1Result, stats: SimilarityStats,
            cfg: CascadeConfig | None = None) -> FinalDecision:
    cfg = cfg or CascadeConfig()
    w_top, w_avg = cfg.blend
    rag_score = w_top * stats.s_top + w_avg * stats.s_avg
    display = 10.0 * min(max(rag_score, 0.0), 1.0)

    if phase1.verdict == VERDICT_PHISHING:
        verdict, code = VERDICT_PHISHING, RATIONALE_PHASE1_OVERRIDE
    elif stats.s_top >= cfg.tau_h:
        verdict, code = VERDICT_PHISHING, RATIONALE_HIGH_SIM
    elif phase1.verdict == VERDICT_REVIEW and stats.s_avg >= cfg.tau_review_avg:
        verdict, code = VERDICT_PHISHING, RATIONALE_REVIEW_AVG_PROMOTE
    elif stats.s_top >= cfg.tau_l or stats.s_avg >= cfg.tau_l_avg:
        verdict, code = VERDICT_REVIEW, RATIONALE_MID_SIM_REVIEW
    else:
        verdict, code = phase1.verdict, RATIONALE_INHERIT

    return FinalDecision(
        verdict=verdict, rag_score=rag_score, display_score=display,
        rationale_code=code,
    )


@dataclass(frozen=True)
class OperatingMode:
    name: str
    cascade: CascadeConfig
    rule_overrides: dict
    reported_recall: float | None = None
    reported_fpr: float | None = None
    use_case: str = ""


def load_modes(path=None) -> dict[str, OperatingMode]:
    """Parse the modes config file into named threshold bundles."""
    if path is None:
        text = (
            resources.files("mailsentry")
            .joinpath("assets/modes.json")
            .read_text(encoding="utf-8")
        )
        data = json.loads(text)
    else:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    modes = {}
    for name, spec in data["modes"].items():
        reported = spec.get("reported", {})
        modes[name] = OperatingMode(
            name=name,
            cascade=CascadeConfig(**spec.get("cascade", {})),
            rule_overrides=dict(spec.get("rules", {})),
            reported_recall=reported.get("recall"),
            reported_fpr=reported.get("fpr"),
            use_case=spec.get("use_case", ""),
        )
    return modes


def operating_mode(name: str, path=None) -> OperatingMode:
    modes = load_modes(path)
    if name not in modes:
        raise UnknownMode(f"unknown operating mode {name!r}; have {sorted(modes)}")
    return modes[name]
