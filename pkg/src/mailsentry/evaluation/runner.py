"""End-to-end dataset evaluation with reproducible JSON/markdown reports.

Reports embed a run manifest (configs hashed, seeds, provider ids, dataset
digest). Timestamps are opt-in via SOURCE_DATE_EPOCH so two identical runs
produce byte-identical artifacts.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path

from ..decision import CascadeConfig
from ..dns import DnsResolver
from ..message import EmailMessage
from ..pipeline import AnalysisOutcome, PipelineConfig, analyze_message
from ..retrieval.index import CorpusIndex
from ..retrieval.provider import EmbeddingProvider
from .metrics import both_mappings
from .sweep import threshold_sweep
from .taxonomy import CaseInput, failure_taxonomy


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_hashes: dict[str, str]
    seeds: dict[str, int]
    provider_ids: tuple[str, ...]
    dataset_digest: str
    timestamp: int | None

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "config_hashes": dict(self.config_hashes),
            "seeds": dict(self.seeds),
            "provider_ids": list(self.provider_ids),
            "dataset_digest": self.dataset_digest,
            "timestamp": self.timestamp,
        }


def _digest(data: bytes) -> str:
    return hashlib.blake2b(data, digest_size=16).hexdigest()


def dataset_digest(corpus: list[EmailMessage]) -> str:
    rows = [
        {"id": m.id, "from": m.from_address, "subject": m.subject,
         "body": m.body_text, "label": m.ground_truth, "source": m.source_label}
        for m in sorted(corpus, key=lambda m: m.id)
    ]
    return _digest(json.dumps(rows, sort_keys=True).encode("utf-8"))


def config_hash(obj) -> str:
    return _digest(repr(obj).encode("utf-8"))


def build_manifest(command: str, corpus: list[EmailMessage],
                   config: PipelineConfig,
                   provider_ids: tuple[str, ...] = ()) -> RunManifest:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    return RunManifest(
        command=command,
        config_hashes={
            "rules": config_hash(config.rules),
            "ontology": config_hash(config.ontology),
            "cascade": config_hash(config.cascade or CascadeConfig()),
        },
        seeds={"split": 42, "bootstrap": 42, "ann": 42},
        provider_ids=provider_ids,
        dataset_digest=dataset_digest(corpus),
        timestamp=int(epoch) if epoch is not None else None,
    )


def run_dataset(corpus: list[EmailMessage], resolver: DnsResolver | None,
                index: CorpusIndex | None = None,
                provider: EmbeddingProvider | None = None,
                config: PipelineConfig | None = None
                ) -> list[AnalysisOutcome]:
    config = config or PipelineConfig.default()
    return [
        analyze_message(msg, resolver, index=index, provider=provider,
                        config=config)
        for msg in sorted(corpus, key=lambda m: m.id)
    ]


def _default_grid(step: float = 0.05, upper: float = 1.0) -> list[float]:
    n = int(round(upper / step))
    return [round(i * step, 10) for i in range(n + 1)]


def evaluate(corpus: list[EmailMessage], resolver: DnsResolver | None,
             index: CorpusIndex | None = None,
             provider: EmbeddingProvider | None = None,
             config: PipelineConfig | None = None,
             mode_name: str = "baseline") -> dict:
    """Full evaluation payload: metrics both ways, sweeps, failure taxonomy."""
    config = config or PipelineConfig.default()
    outcomes = run_dataset(corpus, resolver, index=index, provider=provider,
                           config=config)
    labeled = [o for o in outcomes if o.truth is not None]
    preds = [(o.decision.verdict, o.truth) for o in labeled]

    cases, summary = failure_taxonomy(
        [
            CaseInput(
                message_id=o.message_id, truth=o.truth,
                verdict=o.decision.verdict, score=o.phase1.score,
                fired=tuple(o.phase1.indicators.fired()),
                has_urls=o.has_urls, dns=o.dns,
            )
            for o in labeled
        ],
        config.rules,
    )

    phase1_sweep = threshold_sweep(
        [(float(o.phase1.score), o.truth) for o in labeled],
        axis="phase1_score",
        grid=[float(t) for t in range(0, 11)],
    )
    sweeps = {"phase1_score": phase1_sweep.as_dict()}
    if index is not None and provider is not None:
        rag_sweep = threshold_sweep(
            [(o.decision.rag_score, o.truth) for o in labeled],
            axis="rag_similarity",
            grid=_default_grid(),
        )
        sweeps["rag_similarity"] = rag_sweep.as_dict()

    verdict_counts: dict[str, int] = {}
    for o in outcomes:
        verdict_counts[o.decision.verdict] = verdict_counts.get(o.decision.verdict, 0) + 1

    provider_ids = (provider.provider_id,) if provider is not None else ()
    manifest = build_manifest("evaluate", corpus, config, provider_ids)

    return {
        "manifest": manifest.as_dict(),
        "mode": mode_name,
        "n": len(labeled),
        "verdict_counts": verdict_counts,
        "review_rate": (
            verdict_counts.get("needs_review", 0) / len(outcomes)
            if outcomes else 0.0
        ),
        "metrics": {
            name: report.as_dict()
            for name, report in both_mappings(preds).items()
        },
        "sweeps": sweeps,
        "failure_cases": [
            {"message_id": c.message_id, "kind": c.kind, "category": c.category}
            for c in cases
        ],
        "failure_summary": dict(sorted(summary.items())),
        "per_message": [o.as_dict(config.rules.weights) for o in outcomes],
    }


def _markdown_metrics(report: dict) -> str:
    lines = [
        f"# Evaluation report (mode: {report['mode']})",
        "",
        f"Messages: {report['n']}  ",
        f"Review rate: {report['review_rate']:.3f}",
        "",
        "## Classification metrics",
        "",
        "| mapping | tp | fp | fn | tn | accuracy | precision | recall | f1 | fpr |",
        "|---|---|---|---|---|---|---|---|---|---|",
    ]
    for name, m in report["metrics"].items():
        lines.append(
            f"| {name} | {m['tp']} | {m['fp']} | {m['fn']} | {m['tn']} "
            f"| {m['accuracy']:.3f} | {m['precision']:.3f} | {m['recall']:.3f} "
            f"| {m['f1']:.3f} | {m['fpr']:.3f} |"
        )
    lines += ["", "## Failure taxonomy", "", "| category | count |", "|---|---|"]
    for category, count in report["failure_summary"].items():
        lines.append(f"| {category} | {count} |")
    for axis, sweep in report["sweeps"].items():
        lines += [
            "",
            f"## Threshold sweep ({axis})",
            "",
            f"AUROC {sweep['auroc']:.4f}, AUPRC {sweep['auprc']:.4f}, "
            f"max F1 {sweep['max_f1']:.4f} at {sweep['max_f1_threshold']}",
            "",
            "| threshold | precision | recall | f1 | fpr |",
            "|---|---|---|---|---|",
        ]
        for point in sweep["points"]:
            lines.append(
                f"| {point['threshold']} | {point['precision']:.3f} "
                f"| {point['recall']:.3f} | {point['f1']:.3f} | {point['fpr']:.4f} |"
            )
    lines.append("")
    return "\n".join(lines)


def write_report(report: dict, report_dir) -> tuple[Path, Path]:
    """Write report.json and report.md; byte-stable for identical inputs."""
    out = Path(report_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "report.json"
    md_path = out / "report.md"
    json_path.write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    md_path.write_text(_markdown_metrics(report), encoding="utf-8")
    return json_path, md_path
