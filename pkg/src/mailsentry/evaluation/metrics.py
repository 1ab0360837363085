"""Binary classification metrics over three-way verdicts.

needs_review has no ground-truth analogue, so it is mapped to a binary
prediction two ways: "strict" counts it negative, "escalation" counts it
positive. Zero-denominator metrics are defined as 0 and flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

POSITIVE = "phishing"
MAPPINGS = ("strict", "escalation")


@dataclass(frozen=True)
class MetricsReport:
    tp: int
    fp: int
    fn: int
    tn: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    fpr: float
    positive_mapping: str
    zero_denominators: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def as_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn,
            "accuracy": self.accuracy, "precision": self.precision,
            "recall": self.recall, "f1": self.f1, "fpr": self.fpr,
            "positive_mapping": self.positive_mapping,
            "zero_denominators": list(self.zero_denominators),
        }


def binarize(verdict: str, mapping: str) -> bool:
    """True = predicted phishing under the given needs_review mapping."""
    if mapping not in MAPPINGS:
        raise ValueError(f"mapping must be one of {MAPPINGS}")
    if verdict == POSITIVE:
        return True
    if verdict == "needs_review":
        return mapping == "escalation"
    return False


def metrics_from_counts(tp: int, fp: int, fn: int, tn: int,
                        mapping: str = "strict") -> MetricsReport:
    zero = []
    total = tp + fp + fn + tn

    def safe(num, den, name):
        if den == 0:
            zero.append(name)
            return 0.0
        return num / den

    precision = safe(tp, tp + fp, "precision")
    recall = safe(tp, tp + fn, "recall")
    fpr = safe(fp, fp + tn, "fpr")
    accuracy = safe(tp + tn, total, "accuracy")
    f1 = (
        2 * precision * recall / (precision + recall)
        if (precision + recall) > 0 else 0.0
    )
    if precision + recall == 0:
        zero.append("f1")
    return MetricsReport(
        tp=tp, fp=fp, fn=fn, tn=tn,
        accuracy=accuracy, precision=precision, recall=recall, f1=f1, fpr=fpr,
        positive_mapping=mapping, zero_denominators=tuple(zero),
    )


def compute_metrics(preds: list[tuple[str, str]],
                    mapping: str = "strict") -> MetricsReport:
    """Metrics from (verdict, truth) pairs; truth is phishing/benign."""
    if not preds:
        raise ValueError("compute_metrics needs at least one prediction")
    tp = fp = fn = tn = 0
    for verdict, truth in preds:
        positive = binarize(verdict, mapping)
        actual = truth == POSITIVE
        if positive and actual:
            tp += 1
        elif positive and not actual:
            fp += 1
        elif not positive and actual:
            fn += 1
        else:
            tn += 1
    return metrics_from_counts(tp, fp, fn, tn, mapping)


def both_mappings(preds: list[tuple[str, str]]) -> dict[str, MetricsReport]:
    """Strict and escalation variants side by side."""
    return {mapping: compute_metrics(preds, mapping) for mapping in MAPPINGS}
