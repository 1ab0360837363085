"""Embedding providers behind a small pluggable interface.

The local provider feature-hashes word n-grams (n = 1..3) into a fixed
number of buckets with signed hashing and L2-normalizes. It is fully
deterministic across runs and platforms (stable BLAKE2 hashing, no Python
``hash()``), which is what anchors the retrieval tests.
"""

from __future__ import annotations

import hashlib
import re
import threading
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from ..errors import DimensionMismatch, UnredactedInput
from ..redaction import scan_exposure

DEFAULT_DIM = 1536

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray  # unit L2 norm, float32
    provider_id: str

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("embedding contains non-finite entries")

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


class EmbeddingProvider(Protocol):
    provider_id: str
    dim: int

    def embed_text(self, text: str) -> np.ndarray: ...


class HashingEmbedder:
    """Deterministic local stand-in for an external embedding model."""

    def __init__(self, dim: int = DEFAULT_DIM):
        self.dim = dim
        self.provider_id = f"local-hash-ngram3-d{dim}"
        self.calls = 0
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def _features(self, text: str):
        tokens = _TOKEN_RE.findall(text.lower())
        yield from tokens
        for n in (2, 3):
            for i in range(len(tokens) - n + 1):
                yield " ".join(tokens[i : i + n])

    def _compute(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        for feat in self._features(text):
            digest = hashlib.blake2b(feat.encode("utf-8"), digest_size=8).digest()
            h = int.from_bytes(digest, "little")
            sign = 1.0 if h & 1 else -1.0
            vec[(h >> 1) % self.dim] += sign
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            vec[0] = 1.0
            norm = 1.0
        return (vec / norm).astype(np.float32)

    def embed_text(self, text: str) -> np.ndarray:
        key = hashlib.blake2b(text.encode("utf-8"), digest_size=16).hexdigest()
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        self.calls += 1
        vec = self._compute(text)
        with self._lock:
            self._cache[key] = vec
        return vec


def embed(redacted_text: str, provider: EmbeddingProvider,
          *, allow_unredacted: bool = False) -> EmbeddingVector:
    """Embed text that already passed redaction.

    Refuses input that still carries sensitive patterns unless the caller
    explicitly overrides (used only by the exposure-accounting baseline).
    """
    if not allow_unredacted and scan_exposure(redacted_text).exposure:
        raise UnredactedInput("text failed exposure scan; redact before embedding")
    values = np.asarray(provider.embed_text(redacted_text), dtype=np.float32)
    if values.shape != (provider.dim,):
        raise DimensionMismatch(
            f"provider returned shape {values.shape}, expected ({provider.dim},)"
        )
    norm = float(np.linalg.norm(values))
    if abs(norm - 1.0) > 1e-6 and norm > 0:
        values = values / norm
    return EmbeddingVector(values=values, provider_id=provider.provider_id)
