"""Phishing-example vector corpus with exact and approximate cosine top-k.

Persistence is a binary vector sidecar (little-endian float32, row-major,
with a small header) plus a JSONL manifest carrying ids and redacted
snippets. The approximate graph is rebuilt deterministically from its seed
after a load, so save -> load -> query is bit-stable.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import DimensionMismatch, DuplicateId, MixedLabelCorpus
from .hnsw import HnswGraph
from .provider import EmbeddingProvider, EmbeddingVector, embed

MAGIC = b"MSVX"
SNIPPET_CHARS = 280

DEFAULT_ANN_PARAMS = {"M": 16, "ef_construction": 200, "seed": 42, "ef_search": 64}


@dataclass
class AnnParams:
    M: int = 16
    ef_construction: int = 200
    seed: int = 42
    ef_search: int = 64

    @classmethod
    def from_dict(cls, data: dict | None) -> "AnnParams":
        merged = dict(DEFAULT_ANN_PARAMS)
        merged.update(data or {})
        return cls(**{k: int(v) for k, v in merged.items()})

    def as_dict(self) -> dict:
        return {
            "M": self.M,
            "ef_construction": self.ef_construction,
            "seed": self.seed,
            "ef_search": self.ef_search,
        }


@dataclass(frozen=True)
class Neighbor:
    id: str
    similarity: float
    snippet: str


@dataclass(frozen=True)
class NeighborSet:
    hits: tuple[Neighbor, ...]

    def __post_init__(self):
        sims = [h.similarity for h in self.hits]
        if any(s2 > s1 + 1e-9 for s1, s2 in zip(sims, sims[1:])):
            raise ValueError("neighbor similarities must be nonincreasing")


@dataclass(frozen=True)
class SimilarityStats:
    s_top: float
    s_avg: float
    empty: bool = False


@dataclass
class CorpusIndex:
    ids: list[str]
    snippets: list[str]
    vectors: np.ndarray  # (N, D) float32, unit rows
    provider_id: str
    ann_params: AnnParams
    mode: str = "exact"  # "exact" | "approximate"
    corpus_mode: str = "phishing_only"  # "phishing_only" | "mixed"
    _graph: HnswGraph | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1]) if self.vectors.size else 0

    def __len__(self) -> int:
        return len(self.ids)

    def graph(self) -> HnswGraph:
        if self._graph is None:
            g = HnswGraph(
                dim=self.dim,
                m=self.ann_params.M,
                ef_construction=self.ann_params.ef_construction,
                seed=self.ann_params.seed,
            )
            for row in self.vectors:
                g.add(row)
            self._graph = g
        return self._graph


def build_index(corpus: list[tuple[str, str]], provider: EmbeddingProvider,
                params: dict | AnnParams | None = None, *,
                labels: list[str] | None = None,
                allow_mixed: bool = False,
                mode: str = "exact") -> CorpusIndex:
    """Embed a redacted corpus of (id, text) rows into a queryable index."""
    if labels is not None:
        bad = [lbl for lbl in labels if lbl != "phishing"]
        if bad and not allow_mixed:
            raise MixedLabelCorpus(
                f"{len(bad)} non-phishing rows; pass allow_mixed for the corpus ablation"
            )
    corpus_mode = "mixed" if (labels and any(l != "phishing" for l in labels)) else "phishing_only"

    seen: set[str] = set()
    ids, snippets, rows = [], [], []
    for doc_id, text in corpus:
        if doc_id in seen:
            raise DuplicateId(f"duplicate corpus id {doc_id!r}")
        seen.add(doc_id)
        ids.append(doc_id)
        snippets.append(text[:SNIPPET_CHARS])
        rows.append(embed(text, provider).values)

    vectors = (
        np.vstack(rows) if rows else np.zeros((0, provider.dim), dtype=np.float32)
    )
    ann = params if isinstance(params, AnnParams) else AnnParams.from_dict(params)
    return CorpusIndex(
        ids=ids,
        snippets=snippets,
        vectors=vectors,
        provider_id=provider.provider_id,
        ann_params=ann,
        mode=mode,
        corpus_mode=corpus_mode,
    )


def save_index(index: CorpusIndex, basepath) -> tuple[Path, Path]:
    """Write ``<base>.vec`` (binary vectors) and ``<base>.manifest.jsonl``."""
    base = Path(basepath)
    vec_path = base.with_suffix(".vec")
    man_path = base.with_suffix(".manifest.jsonl")

    n, d = index.vectors.shape if index.vectors.size else (0, 0)
    with open(vec_path, "wb") as handle:
        handle.write(MAGIC)
        handle.write(struct.pack("<III", 1, d, n))
        handle.write(index.vectors.astype("<f4").tobytes(order="C"))

    with open(man_path, "w", encoding="utf-8") as handle:
        meta = {
            "provider_id": index.provider_id,
            "dim": index.dim,
            "count": len(index),
            "ann_params": index.ann_params.as_dict(),
            "mode": index.mode,
            "corpus_mode": index.corpus_mode,
        }
        handle.write(json.dumps(meta, sort_keys=True) + "\n")
        for doc_id, snippet, row in zip(index.ids, index.snippets, index.vectors):
            handle.write(
                json.dumps(
                    {"id": doc_id, "snippet": snippet, "norm": round(float(np.linalg.norm(row)), 6)},
                    sort_keys=True,
                )
                + "\n"
            )
    return vec_path, man_path


def load_index(basepath) -> CorpusIndex:
    base = Path(basepath)
    vec_path = base.with_suffix(".vec")
    man_path = base.with_suffix(".manifest.jsonl")

    with open(man_path, encoding="utf-8") as handle:
        lines = [json.loads(line) for line in handle if line.strip()]
    meta, entries = lines[0], lines[1:]

    with open(vec_path, "rb") as handle:
        if handle.read(4) != MAGIC:
            raise ValueError(f"{vec_path} is not a vector sidecar")
        _, d, n = struct.unpack("<III", handle.read(12))
        data = np.frombuffer(handle.read(), dtype="<f4").reshape(n, d).copy()

    if n != len(entries) or n != meta["count"]:
        raise ValueError("manifest and vector sidecar disagree on entry count")
    return CorpusIndex(
        ids=[e["id"] for e in entries],
        snippets=[e["snippet"] for e in entries],
        vectors=data,
        provider_id=meta["provider_id"],
        ann_params=AnnParams.from_dict(meta.get("ann_params")),
        mode=meta.get("mode", "exact"),
        corpus_mode=meta.get("corpus_mode", "phishing_only"),
    )


def query_topk(index: CorpusIndex, q: EmbeddingVector, k: int = 8) -> NeighborSet:
    """Cosine top-k; exact brute force or the approximate graph per mode."""
    if len(index) == 0:
        return NeighborSet(hits=())
    if q.dim != index.dim:
        raise DimensionMismatch(f"query dim {q.dim} != index dim {index.dim}")

    if index.mode == "approximate":
        pairs = index.graph().search(q.values, k, ef_search=index.ann_params.ef_search)
    else:
        sims = index.vectors @ q.values
        k_eff = min(k, len(index))
        top = np.argpartition(-sims, k_eff - 1)[:k_eff]
        # Deterministic order: similarity desc, then position asc.
        top = sorted(top.tolist(), key=lambda i: (-float(sims[i]), i))
        pairs = [(i, float(sims[i])) for i in top]

    hits = tuple(
        Neighbor(id=index.ids[i], similarity=s, snippet=index.snippets[i])
        for i, s in pairs
    )
    return NeighborSet(hits=hits)


def similarity_stats(neighbors: NeighborSet) -> SimilarityStats:
    """Max similarity and mean of the top 3 (or of what exists)."""
    if not neighbors.hits:
        return SimilarityStats(s_top=0.0, s_avg=0.0, empty=True)
    sims = [h.similarity for h in neighbors.hits]
    top3 = sims[:3]
    return SimilarityStats(s_top=sims[0], s_avg=sum(top3) / len(top3), empty=False)
