"""Threshold sweeps with AUROC (trapezoid) and AUPRC (step interpolation)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyGrid
from .metrics import MetricsReport, metrics_from_counts

AXES = ("phase1_score", "rag_similarity")


@dataclass(frozen=True)
class SweepPoint:
    threshold: float
    metrics: MetricsReport


@dataclass(frozen=True)
class SweepReport:
    axis: str
    points: tuple[SweepPoint, ...]
    auroc: float
    auprc: float
    max_f1: float
    max_f1_threshold: float

    def as_dict(self) -> dict:
        return {
            "axis": self.axis,
            "points": [
                {"threshold": p.threshold, **p.metrics.as_dict()}
                for p in self.points
            ],
            "auroc": self.auroc,
            "auprc": self.auprc,
            "max_f1": self.max_f1,
            "max_f1_threshold": self.max_f1_threshold,
        }


def _counts_at(scores: np.ndarray, actual: np.ndarray, threshold: float
               ) -> tuple[int, int, int, int]:
    positive = scores >= threshold
    tp = int(np.sum(positive & actual))
    fp = int(np.sum(positive & ~actual))
    fn = int(np.sum(~positive & actual))
    tn = int(np.sum(~positive & ~actual))
    return tp, fp, fn, tn


def auroc_trapezoid(scores: list[float], truths: list[bool]) -> float:
    """Area under the ROC curve via trapezoids over unique score cutoffs."""
    s = np.asarray(scores, dtype=float)
    t = np.asarray(truths, dtype=bool)
    pos, neg = int(t.sum()), int((~t).sum())
    if pos == 0 or neg == 0:
        raise ValueError("AUROC needs both classes present")
    order = np.argsort(-s, kind="stable")
    s, t = s[order], t[order]
    # Walk cutoffs at distinct scores; accumulate (FPR, TPR) points.
    fprs, tprs = [0.0], [0.0]
    tp = fp = 0
    i = 0
    n = len(s)
    while i < n:
        j = i
        while j < n and s[j] == s[i]:
            tp += bool(t[j])
            fp += not t[j]
            j += 1
        fprs.append(fp / neg)
        tprs.append(tp / pos)
        i = j
    return float(np.trapezoid(tprs, fprs))


def auprc_step(scores: list[float], truths: list[bool]) -> float:
    """Area under the precision-recall curve with step interpolation."""
    s = np.asarray(scores, dtype=float)
    t = np.asarray(truths, dtype=bool)
    pos = int(t.sum())
    if pos == 0:
        raise ValueError("AUPRC needs at least one positive")
    order = np.argsort(-s, kind="stable")
    s, t = s[order], t[order]
    area = 0.0
    tp = fp = 0
    prev_recall = 0.0
    i = 0
    n = len(s)
    while i < n:
        j = i
        while j < n and s[j] == s[i]:
            tp += bool(t[j])
            fp += not t[j]
            j += 1
        recall = tp / pos
        precision = tp / (tp + fp)
        area += (recall - prev_recall) * precision
        prev_recall = recall
        i = j
    return float(area)


def threshold_sweep(scored: list[tuple[float, str]], axis: str,
                    grid: list[float], mapping: str = "strict") -> SweepReport:
    """Per-threshold metrics over (score, truth) pairs, plus curve areas.

    A message is predicted phishing when its score meets the threshold.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}")
    if not grid:
        raise EmptyGrid("threshold grid is empty")
    if not scored:
        raise ValueError("threshold_sweep needs scored data")
    scores = np.array([s for s, _ in scored], dtype=float)
    actual = np.array([t == "phishing" for _, t in scored])

    points = []
    best_f1, best_thr = -1.0, grid[0]
    for threshold in grid:
        report = metrics_from_counts(*_counts_at(scores, actual, threshold),
                                     mapping)
        points.append(SweepPoint(threshold=float(threshold), metrics=report))
        if report.f1 > best_f1:
            best_f1, best_thr = report.f1, float(threshold)

    truths = [bool(a) for a in actual]
    return SweepReport(
        axis=axis, points=tuple(points),
        auroc=auroc_trapezoid(list(scores), truths),
        auprc=auprc_step(list(scores), truths),
        max_f1=best_f1, max_f1_threshold=best_thr,
    )
