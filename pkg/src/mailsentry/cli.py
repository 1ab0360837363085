"""Command-line entry point wiring all modules together.

Exit codes: 0 success, 1 runtime error, 2 usage error. All thresholds,
weights, modes, ontology axioms, and prices live in config files; flags
select files and override individual values.
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

import click

from .decision import operating_mode
from .dns import FixtureResolver
from .economics import CostParams, compute_roi, per_mode_economics
from .errors import MailSentryError
from .message import load_jsonl_corpus, parse_eml
from .ontology import OntologyConfig
from .pipeline import PipelineConfig, analyze_message
from .redaction import redact
from .retrieval.index import build_index, load_index, query_topk, save_index
from .retrieval.provider import HashingEmbedder, embed
from .rules import RuleConfig, rule_ablation


def _fixture_path(name: str):
    return resources.as_file(
        resources.files("mailsentry").joinpath(f"assets/fixtures/{name}")
    )


def _resolver(dns_path: str | None):
    if dns_path is not None:
        return FixtureResolver.from_jsonl(dns_path)
    with _fixture_path("dns.jsonl") as path:
        return FixtureResolver.from_jsonl(path)


def _pipeline_config(rules_path: str | None, ontology_path: str | None,
                     mode: str | None, modes_path: str | None) -> PipelineConfig:
    rules = RuleConfig.from_json(rules_path) if rules_path else RuleConfig()
    ontology = OntologyConfig.from_json(ontology_path) if ontology_path else None
    cascade = None
    if mode is not None:
        bundle = operating_mode(mode, modes_path)
        cascade = bundle.cascade
        if bundle.rule_overrides:
            rules = RuleConfig.from_dict(
                {**bundle.rule_overrides}
            ) if rules_path is None else rules
    return PipelineConfig(rules=rules, ontology=ontology, cascade=cascade)


@click.group()
def main() -> None:
    """Dual-phase email phishing analysis toolkit."""


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["eml", "jsonl-record"]),
              default="eml", show_default=True)
@click.option("--phase1-only", is_flag=True, help="Skip retrieval entirely.")
@click.option("--dns", "dns_path", type=click.Path(exists=True), default=None)
@click.option("--rules", "rules_path", type=click.Path(exists=True), default=None)
@click.option("--ontology", "ontology_path", type=click.Path(exists=True), default=None)
@click.option("--mode", default=None, help="Operating mode name.")
@click.option("--modes", "modes_path", type=click.Path(exists=True), default=None)
@click.option("--index", "index_path", default=None,
              help="Index base path (expects .vec/.manifest.jsonl).")
def analyze(source, fmt, phase1_only, dns_path, rules_path, ontology_path,
            mode, modes_path, index_path):
    """Analyze one message and print the full decision record as JSON."""
    raw = Path(source).read_bytes()
    if fmt == "eml":
        msg = parse_eml(raw)
    else:
        from .message import message_from_record
        msg = message_from_record(json.loads(raw.decode("utf-8")))

    config = _pipeline_config(rules_path, ontology_path, mode, modes_path)
    index = provider = None
    if not phase1_only:
        provider = HashingEmbedder()
        if index_path is not None:
            index = load_index(index_path)
    outcome = analyze_message(msg, _resolver(dns_path), index=index,
                              provider=provider, config=config)
    click.echo(json.dumps(outcome.as_dict(config.rules.weights),
                          indent=2, sort_keys=True))


@main.command("redact")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--counts", is_flag=True, help="Print per-type counts as JSON.")
def redact_cmd(source, counts):
    """Mask sensitive patterns in a text file and print the result."""
    report = redact(Path(source).read_text(encoding="utf-8"))
    if counts:
        click.echo(json.dumps(report.counts, sort_keys=True))
    else:
        click.echo(report.redacted_text, nl=False)


@main.group()
def index() -> None:
    """Build or query the phishing-example vector index."""


@index.command("build")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", required=True)
@click.option("--dim", default=1536, show_default=True)
@click.option("--mode", type=click.Choice(["exact", "approximate"]),
              default="exact", show_default=True)
@click.option("--allow-mixed", is_flag=True)
def index_build(corpus_path, out_path, dim, mode, allow_mixed):
    """Embed a JSONL corpus (redacted first) into a persisted index."""
    corpus = load_jsonl_corpus(corpus_path)
    provider = HashingEmbedder(dim=dim)
    idx = build_index(
        [(m.id, redact(f"{m.subject}\n{m.body_text}".strip()).redacted_text)
         for m in corpus],
        provider,
        labels=[m.ground_truth for m in corpus],
        allow_mixed=allow_mixed,
        mode=mode,
    )
    vec, man = save_index(idx, out_path)
    click.echo(f"indexed {len(idx)} documents -> {vec}, {man}")


@index.command("query")
@click.option("--index", "index_path", required=True)
@click.option("--text", required=True)
@click.option("-k", default=8, show_default=True)
def index_query(index_path, text, k):
    """Top-k similar corpus entries for a redacted query text."""
    idx = load_index(index_path)
    provider = HashingEmbedder(dim=idx.dim)
    vector = embed(redact(text).redacted_text, provider)
    hits = query_topk(idx, vector, k=k)
    click.echo(json.dumps(
        [{"id": h.id, "similarity": round(h.similarity, 6), "snippet": h.snippet}
         for h in hits.hits],
        indent=2,
    ))


@main.command()
@click.option("--dataset", "dataset_path", type=click.Path(exists=True), required=True)
@click.option("--mode", default="baseline", show_default=True)
@click.option("--modes", "modes_path", type=click.Path(exists=True), default=None)
@click.option("--index", "index_path", default=None)
@click.option("--dns", "dns_path", type=click.Path(exists=True), default=None)
@click.option("--rules", "rules_path", type=click.Path(exists=True), default=None)
@click.option("--report", "report_dir", type=click.Path(), required=True)
@click.option("--phase1-only", is_flag=True)
def evaluate(dataset_path, mode, modes_path, index_path, dns_path, rules_path,
             report_dir, phase1_only):
    """Run the full pipeline over a dataset and write JSON + markdown reports."""
    from .evaluation.runner import evaluate as run_eval
    from .evaluation.runner import write_report

    corpus = load_jsonl_corpus(dataset_path)
    config = _pipeline_config(rules_path, None, mode, modes_path)
    index_obj = provider = None
    if not phase1_only:
        provider = HashingEmbedder()
        if index_path is not None:
            index_obj = load_index(index_path)
            provider = HashingEmbedder(dim=index_obj.dim)
    report = run_eval(corpus, _resolver(dns_path), index=index_obj,
                      provider=provider, config=config, mode_name=mode)
    json_path, md_path = write_report(report, report_dir)
    strict = report["metrics"]["strict"]
    click.echo(
        f"n={report['n']} precision={strict['precision']:.3f} "
        f"recall={strict['recall']:.3f} fpr={strict['fpr']:.3f} "
        f"-> {json_path}, {md_path}"
    )


@main.command()
@click.option("--dataset", "dataset_path", type=click.Path(exists=True), required=True)
@click.option("--axis", type=click.Choice(["phase1_score", "rag_similarity"]),
              default="phase1_score", show_default=True)
@click.option("--grid", default=None,
              help="Comma-separated thresholds; default 0..10 or 0..1 by 0.05.")
@click.option("--dns", "dns_path", type=click.Path(exists=True), default=None)
@click.option("--index", "index_path", default=None)
def sweep(dataset_path, axis, grid, dns_path, index_path):
    """Threshold sensitivity table with AUROC/AUPRC for one score axis."""
    from .evaluation.runner import run_dataset
    from .evaluation.sweep import threshold_sweep

    corpus = load_jsonl_corpus(dataset_path)
    index_obj = provider = None
    if axis == "rag_similarity":
        provider = HashingEmbedder()
        if index_path is not None:
            index_obj = load_index(index_path)
            provider = HashingEmbedder(dim=index_obj.dim)
    outcomes = run_dataset(corpus, _resolver(dns_path), index=index_obj,
                           provider=provider)
    labeled = [o for o in outcomes if o.truth is not None]
    if axis == "phase1_score":
        scored = [(float(o.phase1.score), o.truth) for o in labeled]
        thresholds = [float(t) for t in range(0, 11)]
    else:
        scored = [(o.decision.rag_score, o.truth) for o in labeled]
        thresholds = [round(i * 0.05, 10) for i in range(21)]
    if grid:
        thresholds = [float(t) for t in grid.split(",")]
    report = threshold_sweep(scored, axis=axis, grid=thresholds)
    click.echo(json.dumps(report.as_dict(), indent=2, sort_keys=True))


@main.command()
@click.option("--dataset", "dataset_path", type=click.Path(exists=True), required=True)
@click.option("--dns", "dns_path", type=click.Path(exists=True), default=None)
@click.option("--disable", multiple=True, help="Rule ids to disable (repeatable).")
def ablate(dataset_path, dns_path, disable):
    """Phase-1 metrics with selected rules disabled, plus per-rule stats."""
    corpus = load_jsonl_corpus(dataset_path)
    resolver = _resolver(dns_path)
    dataset = [
        (m, resolver.resolve(m.from_domain) if m.from_domain else None)
        for m in corpus
    ]
    report = rule_ablation(dataset, disabled=set(disable))
    click.echo(json.dumps(
        {
            "disabled": list(report.disabled),
            "metrics": report.metrics.as_dict(),
            "per_rule": report.per_rule,
        },
        indent=2, sort_keys=True,
    ))


@main.command()
@click.option("--params", "params_path", type=click.Path(exists=True), default=None)
@click.option("--modes", "modes_path", type=click.Path(exists=True), default=None,
              help="JSON {name: {recall, fpr}} for the per-mode table.")
def roi(params_path, modes_path):
    """Cost-benefit report for one parameter set or a per-mode table."""
    params = CostParams.from_json(params_path) if params_path else CostParams()
    if modes_path is not None:
        with open(modes_path, encoding="utf-8") as handle:
            modes = json.load(handle)
        table = per_mode_economics(modes, params)
        click.echo(json.dumps(
            {name: report.as_dict() for name, report in table.items()},
            indent=2, sort_keys=True,
        ))
    else:
        click.echo(json.dumps(compute_roi(params).as_dict(), indent=2,
                              sort_keys=True))


@main.command()
@click.option("--data-dir", type=click.Path(), required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--index", "index_path", default=None)
@click.option("--degraded", is_flag=True, help="Phase 1 + ontology only.")
@click.option("--token", envvar="MAILSENTRY_TOKEN", default=None)
def serve(data_dir, host, port, index_path, degraded, token):
    """Run the triage service (HTTP JSON API plus the static review UI)."""
    import uvicorn

    from .service import default_service

    app = default_service(data_dir, degraded=degraded, index_path=index_path,
                          token=token)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command("groundedness-ab")
@click.option("--dataset", "dataset_path", type=click.Path(exists=True), required=True)
@click.option("--dns", "dns_path", type=click.Path(exists=True), default=None)
@click.option("--index", "index_path", default=None)
@click.option("--sample", default=50, show_default=True)
def groundedness_ab(dataset_path, dns_path, index_path, sample):
    """Explanation support rates with and without ontology context."""
    from .evaluation.runner import run_dataset
    from .explanation import groundedness_ab_report

    corpus = load_jsonl_corpus(dataset_path)[:sample]
    provider = HashingEmbedder()
    index_obj = load_index(index_path) if index_path else None
    if index_obj is not None:
        provider = HashingEmbedder(dim=index_obj.dim)
    outcomes = run_dataset(corpus, _resolver(dns_path), index=index_obj,
                           provider=provider)
    entries = [
        {"phase1": o.phase1, "chain": o.chain, "neighbors": o.neighbors,
         "decision": o.decision}
        for o in outcomes
    ]
    click.echo(json.dumps(
        {
            "with_ontology": groundedness_ab_report(entries, with_ontology=True),
            "without_ontology": groundedness_ab_report(entries, with_ontology=False),
        },
        indent=2, sort_keys=True,
    ))


def entry() -> None:
    try:
        main(standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    except MailSentryError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    entry()
