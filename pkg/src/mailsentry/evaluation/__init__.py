"""Dataset management, metrics, statistical tests, sweeps, and baselines."""

from .metrics import MetricsReport, compute_metrics
from .splits import DatasetSplit, make_splits
from .stats import BootstrapCI, bootstrap_ci, mcnemar
from .sweep import threshold_sweep
from .taxonomy import FailureCase, failure_taxonomy
from .baselines import baseline_majority, baseline_tfidf_logreg, exposure_baseline
from .runner import RunManifest, evaluate, run_dataset, write_report

__all__ = [
    "RunManifest",
    "evaluate",
    "run_dataset",
    "write_report",
    "MetricsReport",
    "compute_metrics",
    "DatasetSplit",
    "make_splits",
    "BootstrapCI",
    "bootstrap_ci",
    "mcnemar",
    "threshold_sweep",
    "FailureCase",
    "failure_taxonomy",
    "baseline_majority",
    "baseline_tfidf_logreg",
    "exposure_baseline",
]
