"""HTTP facade over the pipeline plus a durable analyst triage queue.

Persistence is an append-only JSONL event log; state is rebuilt by replay
on startup, so a crash loses nothing that was acknowledged. Reviews are
write-once per record and serialized under a lock, and every piece of
persisted or outbound content has already passed redaction.
"""

from __future__ import annotations

import datetime
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .decision import CascadeConfig
from .dns import DnsResolver, FixtureResolver
from .errors import MalformedMessage
from .message import message_from_record, parse_eml
from .pipeline import PipelineConfig, analyze_message
from .retrieval.index import CorpusIndex, load_index
from .retrieval.provider import EmbeddingProvider, HashingEmbedder
from .rules import RuleConfig

DEFAULT_MAX_BODY_BYTES = 256 * 1024


def _iso_utc(clock) -> str:
    """ISO-8601 timestamp; avoids bare digit runs the exposure scanner flags."""
    stamp = datetime.datetime.fromtimestamp(float(clock()), datetime.timezone.utc)
    return stamp.isoformat().replace("+00:00", "Z")


@dataclass
class ServiceState:
    """In-memory view rebuilt from the event log."""

    records: dict[str, dict] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)
    counters: dict[str, int] = field(default_factory=dict)

    def apply(self, event: dict) -> None:
        if event["type"] == "analyzed":
            record = event["record"]
            rid = record["message_id"]
            if rid not in self.records:
                self.order.append(rid)
            self.records[rid] = record
            verdict = record["decision"]["verdict"]
            self.counters[verdict] = self.counters.get(verdict, 0) + 1
        elif event["type"] == "reviewed":
            record = self.records.get(event["record_id"])
            if record is not None:
                record["review"] = {
                    "decision": event["decision"],
                    "reviewer": event["reviewer"],
                    "decided_at": event["at"],
                }

    def pending(self) -> list[dict]:
        out = []
        for rid in self.order:
            record = self.records[rid]
            if (record["decision"]["verdict"] == "needs_review"
                    and "review" not in record):
                out.append(record)
        return out


class EventLog:
    """Single-writer append-only JSONL log with startup replay."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: dict) -> None:
        line = json.dumps(event, sort_keys=True)
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
                os.fsync(handle.fileno())

    def replay(self) -> ServiceState:
        state = ServiceState()
        if self.path.exists():
            with open(self.path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if line:
                        state.apply(json.loads(line))
        return state


@dataclass
class ServiceConfig:
    data_dir: Path
    resolver: DnsResolver | None = None
    index: CorpusIndex | None = None
    provider: EmbeddingProvider | None = None
    pipeline: PipelineConfig = field(default_factory=PipelineConfig.default)
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES
    token: str | None = None
    clock: object = time.time


def _summary(record: dict) -> dict:
    return {
        "message_id": record["message_id"],
        "redacted_subject": record["redacted_subject"],
        "verdict": record["decision"]["verdict"],
        "display_score": record["decision"]["display_score"],
        "created_at": record["created_at"],
    }


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="mailsentry", docs_url=None, redoc_url=None)
    log = EventLog(Path(config.data_dir) / "events.jsonl")
    audit_path = Path(config.data_dir) / "audit.jsonl"
    state = log.replay()
    review_lock = threading.Lock()
    analyzed = {"total": len(state.order)}

    def check_auth(request: Request) -> None:
        if config.token is None:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {config.token}":
            raise HTTPException(status_code=401, detail="invalid token")

    @app.exception_handler(MalformedMessage)
    async def malformed(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.post("/api/analyze")
    async def analyze(request: Request, _=Depends(check_auth)):
        body = await request.body()
        if len(body) > config.max_body_bytes:
            raise HTTPException(status_code=400, detail="body exceeds size cap")
        try:
            payload = json.loads(body)
            msg = message_from_record(payload)
        except (json.JSONDecodeError, KeyError, UnicodeDecodeError):
            msg = parse_eml(body)

        outcome = analyze_message(
            msg, config.resolver, index=config.index,
            provider=config.provider, config=config.pipeline,
        )
        record = outcome.as_dict(config.pipeline.rules.weights)
        record["created_at"] = _iso_utc(config.clock)
        with review_lock:
            analyzed["total"] += 1
            log.append({"type": "analyzed", "record": record})
            state.apply({"type": "analyzed", "record": record})
        return record

    @app.get("/api/queue")
    async def queue(status: str = "pending", _=Depends(check_auth)):
        if status != "pending":
            raise HTTPException(status_code=400, detail="unknown status filter")
        return [_summary(r) for r in state.pending()]

    @app.post("/api/queue/{record_id}/decision")
    async def decide(record_id: str, request: Request, _=Depends(check_auth)):
        payload = await request.json()
        decision = payload.get("decision")
        reviewer = payload.get("reviewer", "")
        if decision not in ("confirm_phishing", "mark_benign"):
            raise HTTPException(status_code=400, detail="unknown decision")
        with review_lock:
            record = state.records.get(record_id)
            if record is None:
                raise HTTPException(status_code=404, detail="unknown record")
            if "review" in record:
                raise HTTPException(status_code=409, detail="already decided")
            event = {
                "type": "reviewed",
                "record_id": record_id,
                "decision": decision,
                "reviewer": reviewer,
                "at": _iso_utc(config.clock),
            }
            log.append(event)
            state.apply(event)
            with open(audit_path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(
                    {"record_id": record_id, "decision": decision,
                     "reviewer": reviewer, "timestamp": event["at"]},
                    sort_keys=True) + "\n")
        return state.records[record_id]

    @app.get("/api/records/{record_id}")
    async def record_detail(record_id: str, _=Depends(check_auth)):
        record = state.records.get(record_id)
        if record is None:
            raise HTTPException(status_code=404, detail="unknown record")
        return record

    @app.get("/api/metrics")
    async def metrics(_=Depends(check_auth)):
        total = analyzed["total"]
        queued = sum(
            1 for r in state.records.values()
            if r["decision"]["verdict"] == "needs_review"
        )
        return {
            "total_analyzed": total,
            "verdict_counts": dict(sorted(state.counters.items())),
            "review_rate": (queued / total) if total else 0.0,
            "pending": len(state.pending()),
            "degraded": config.index is None or config.provider is None,
        }

    ui_dir = Path(__file__).parent / "assets" / "ui"
    if ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    app.state.store = state
    app.state.event_log = log
    return app


def default_service(data_dir, *, degraded: bool = False,
                    index_path=None, token: str | None = None) -> FastAPI:
    """Service wired to the bundled fixtures and the local embedder."""
    from importlib import resources

    fixtures = resources.files("mailsentry").joinpath("assets/fixtures")
    with resources.as_file(fixtures.joinpath("dns.jsonl")) as path:
        resolver = FixtureResolver.from_jsonl(path)

    index = provider = None
    if not degraded:
        provider = HashingEmbedder()
        if index_path is not None:
            index = load_index(index_path)
        else:
            from .message import load_jsonl_corpus
            from .redaction import redact
            from .retrieval.index import build_index
            with resources.as_file(fixtures.joinpath("seed_corpus.jsonl")) as path:
                seed = load_jsonl_corpus(path)
            index = build_index(
                [(m.id, redact(m.body_text).redacted_text) for m in seed],
                provider,
                labels=[m.ground_truth for m in seed],
            )

    config = ServiceConfig(
        data_dir=Path(data_dir),
        resolver=resolver,
        index=index,
        provider=provider,
        pipeline=PipelineConfig(
            rules=RuleConfig(),
            ontology=None,
            cascade=CascadeConfig(),
        ),
        token=token,
    )
    return create_app(config)
