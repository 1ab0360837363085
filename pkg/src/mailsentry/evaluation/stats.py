"""Bootstrap confidence intervals and paired-classifier comparison."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sp_stats

from ..errors import DegeneratePair
from .metrics import MetricsReport, binarize, metrics_from_counts


@dataclass(frozen=True)
class BootstrapCI:
    metric: str
    mean: float
    lower: float
    upper: float
    resamples: int
    seed: int


def _metric_value(report: MetricsReport, metric: str) -> float:
    value = getattr(report, metric, None)
    if value is None:
        raise ValueError(f"unknown metric {metric!r}")
    return float(value)


def bootstrap_ci(preds: list[tuple[str, str]], metric: str = "f1",
                 resamples: int = 1000, seed: int = 42,
                 mapping: str = "strict") -> BootstrapCI:
    """Percentile 95% CI from resampling at the prediction level."""
    if not preds:
        raise ValueError("bootstrap_ci needs predictions")
    positives = np.array([binarize(v, mapping) for v, _ in preds])
    actuals = np.array([t == "phishing" for _, t in preds])
    n = len(preds)
    rng = np.random.default_rng(seed)
    values = np.empty(resamples)
    for i in range(resamples):
        idx = rng.integers(0, n, size=n)
        p, a = positives[idx], actuals[idx]
        tp = int(np.sum(p & a))
        fp = int(np.sum(p & ~a))
        fn = int(np.sum(~p & a))
        tn = int(np.sum(~p & ~a))
        values[i] = _metric_value(metrics_from_counts(tp, fp, fn, tn, mapping), metric)
    lower, upper = np.percentile(values, [2.5, 97.5])
    return BootstrapCI(
        metric=metric, mean=float(np.mean(values)),
        lower=float(lower), upper=float(upper),
        resamples=resamples, seed=seed,
    )


@dataclass(frozen=True)
class McNemarResult:
    chi2: float
    p_value: float
    b: int  # A correct, B wrong
    c: int  # A wrong, B correct
    method: str  # "chi2_continuity" | "exact_binomial"
    p_permutation: float | None = None


def mcnemar(preds_a: list[str], preds_b: list[str], truths: list[str],
            mapping: str = "strict", permutation_draws: int = 0,
            seed: int = 42) -> McNemarResult:
    """Paired comparison of two classifiers on the same items.

    Continuity-corrected chi-square with 1 dof; exact binomial when the
    discordant count is small (< 25). Optionally adds a sign-flip
    permutation p-value over the discordant pairs.
    """
    if not (len(preds_a) == len(preds_b) == len(truths)):
        raise ValueError("predictions and truths must be aligned")
    b = c = 0
    for va, vb, truth in zip(preds_a, preds_b, truths):
        actual = truth == "phishing"
        a_ok = binarize(va, mapping) == actual
        b_ok = binarize(vb, mapping) == actual
        if a_ok and not b_ok:
            b += 1
        elif b_ok and not a_ok:
            c += 1
    if b + c == 0:
        raise DegeneratePair("no discordant pairs")

    chi2 = (abs(b - c) - 1) ** 2 / (b + c)
    if b + c < 25:
        p = float(sp_stats.binomtest(min(b, c), n=b + c, p=0.5).pvalue)
        method = "exact_binomial"
    else:
        p = float(sp_stats.chi2.sf(chi2, df=1))
        method = "chi2_continuity"

    p_perm = None
    if permutation_draws > 0:
        rng = np.random.default_rng(seed)
        observed = abs(b - c)
        flips = rng.integers(0, 2, size=(permutation_draws, b + c))
        # Each discordant pair contributes +1 or -1 under a random flip.
        diffs = np.abs(np.sum(1 - 2 * flips, axis=1))
        p_perm = float(np.mean(diffs >= observed))

    return McNemarResult(chi2=chi2, p_value=p, b=b, c=c, method=method,
                         p_permutation=p_perm)
