"""Deployment cost-benefit model with optimistic and conservative ROI bounds."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .errors import ZeroCost


@dataclass(frozen=True)
class CostParams:
    daily_emails: int = 10000
    base_rate: float = 0.044
    attack_success_rate: float = 0.10
    penalty_per_breach: float = 50000.0
    review_rate: float = 0.131
    review_rate_source: str = "configured"  # measured | configured
    analyst_rate_per_hour: float = 100.0
    minutes_per_review: float = 0.6
    fp_cost_each: float = 12.77
    api_cost_per_day: float = 1.71
    fpr: float = 0.0016
    recall: float = 0.372

    def __post_init__(self):
        for name in ("base_rate", "attack_success_rate", "review_rate",
                     "fpr", "recall"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        for name in ("penalty_per_breach", "analyst_rate_per_hour",
                     "minutes_per_review", "fp_cost_each", "api_cost_per_day"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.review_rate_source not in ("measured", "configured"):
            raise ValueError("review_rate_source must be measured or configured")

    @classmethod
    def from_dict(cls, data: dict) -> "CostParams":
        return cls(**data)

    @classmethod
    def from_json(cls, path: str) -> "CostParams":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))


@dataclass(frozen=True)
class CostReport:
    total_cost: float
    labor_cost: float
    fp_impact: float
    api_cost: float
    attacks_detected: float
    attacks_missed: float
    breaches_prevented: float
    missed_breach_cost: float
    risk_mitigated: float
    net_benefit: float
    roi_optimistic: float
    roi_conservative: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def compute_roi(p: CostParams) -> CostReport:
    """Daily figures from the closed-form cost model.

    Attack counts are expectations and may be fractional; that is the
    model's semantics, not a rounding bug.
    """
    daily_attacks = p.daily_emails * p.base_rate
    detected = daily_attacks * p.recall
    missed = daily_attacks - detected
    prevented = detected * p.attack_success_rate
    risk = prevented * p.penalty_per_breach
    missed_breach = missed * p.attack_success_rate * p.penalty_per_breach
    labor = (
        p.daily_emails * p.review_rate * (p.minutes_per_review / 60.0)
        * p.analyst_rate_per_hour
    )
    fp_impact = p.daily_emails * (1.0 - p.base_rate) * p.fpr * p.fp_cost_each
    total = p.api_cost_per_day + labor + fp_impact
    if total == 0:
        raise ZeroCost("total daily cost is zero; ROI undefined")
    net = risk - total
    return CostReport(
        total_cost=total, labor_cost=labor, fp_impact=fp_impact,
        api_cost=p.api_cost_per_day,
        attacks_detected=detected, attacks_missed=missed,
        breaches_prevented=prevented, missed_breach_cost=missed_breach,
        risk_mitigated=risk, net_benefit=net,
        roi_optimistic=net / total,
        roi_conservative=(risk - missed_breach - total) / total,
    )


def per_mode_economics(modes: dict[str, dict], p: CostParams
                       ) -> dict[str, CostReport]:
    """One CostReport per operating mode; each mode supplies recall and fpr."""
    table = {}
    for name in sorted(modes):
        mode = modes[name]
        table[name] = compute_roi(
            replace(p, recall=float(mode["recall"]), fpr=float(mode["fpr"]))
        )
    return table
