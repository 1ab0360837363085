"""Deterministic stratified train/val/test splits by (source, label)."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import TooSmallStratum
from ..message import EmailMessage

DEFAULT_RATIOS = (0.70, 0.15, 0.15)
MIN_STRATUM = 3


@dataclass(frozen=True)
class DatasetSplit:
    train: tuple[str, ...]
    val: tuple[str, ...]
    test: tuple[str, ...]
    seed: int
    strategy: str = "stratified by source and label"

    def as_dict(self) -> dict:
        return {
            "train": list(self.train),
            "val": list(self.val),
            "test": list(self.test),
            "seed": self.seed,
            "strategy": self.strategy,
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.as_dict(), handle, indent=2, sort_keys=True)

    @classmethod
    def load(cls, path) -> "DatasetSplit":
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        return cls(
            train=tuple(data["train"]), val=tuple(data["val"]),
            test=tuple(data["test"]), seed=data["seed"],
            strategy=data.get("strategy", "stratified by source and label"),
        )


def _allocate(n: int, ratios: tuple[float, float, float]) -> tuple[int, int, int]:
    """Largest-remainder allocation so the three cells sum to n exactly."""
    raw = [n * r for r in ratios]
    floors = [int(x) for x in raw]
    remainder = n - sum(floors)
    order = sorted(range(3), key=lambda i: raw[i] - floors[i], reverse=True)
    for i in order[:remainder]:
        floors[i] += 1
    return tuple(floors)  # type: ignore[return-value]


def make_splits(corpus: list[EmailMessage], seed: int = 42,
                ratios: tuple[float, float, float] = DEFAULT_RATIOS) -> DatasetSplit:
    """Split message ids into train/val/test, stratified per (source, label)."""
    strata: dict[tuple[str, str], list[str]] = {}
    for msg in corpus:
        if msg.ground_truth is None:
            raise ValueError(f"message {msg.id} has no label")
        key = (msg.source_label or "", msg.ground_truth)
        strata.setdefault(key, []).append(msg.id)

    rng = np.random.default_rng(seed)
    train: list[str] = []
    val: list[str] = []
    test: list[str] = []
    for key in sorted(strata):
        ids = sorted(strata[key])
        if len(ids) < MIN_STRATUM:
            raise TooSmallStratum(
                f"stratum {key} has {len(ids)} items (< {MIN_STRATUM})"
            )
        perm = rng.permutation(len(ids))
        shuffled = [ids[i] for i in perm]
        n_train, n_val, _ = _allocate(len(ids), ratios)
        train.extend(shuffled[:n_train])
        val.extend(shuffled[n_train : n_train + n_val])
        test.extend(shuffled[n_train + n_val :])

    return DatasetSplit(
        train=tuple(sorted(train)), val=tuple(sorted(val)), test=tuple(sorted(test)),
        seed=seed,
    )
