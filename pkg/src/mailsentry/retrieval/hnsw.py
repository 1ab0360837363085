"""Small-world graph index for approximate cosine top-k.

Layered navigable graph: nodes get a random level, upper layers are sparse
highways, layer 0 holds everything. Construction and queries are seeded and
fully deterministic (ties broken by node id). Similarity is the dot product
of unit vectors, so higher is better throughout.
"""

from __future__ import annotations

import heapq
import math
import random

import numpy as np


class HnswGraph:
    def __init__(self, dim: int, m: int = 16, ef_construction: int = 200,
                 seed: int = 42):
        self.dim = dim
        self.m = m
        self.m0 = 2 * m
        self.ef_construction = ef_construction
        self.seed = seed
        self._rng = random.Random(seed)
        self._ml = 1.0 / math.log(m)
        self._vectors: list[np.ndarray] = []
        self._matrix: np.ndarray | None = None
        # links[node][layer] -> list of neighbor ids
        self._links: list[list[list[int]]] = []
        self._levels: list[int] = []
        self._entry = -1
        self._max_level = -1

    def __len__(self) -> int:
        return len(self._links)

    def _vecs(self) -> np.ndarray:
        if self._matrix is None or self._matrix.shape[0] != len(self._vectors):
            self._matrix = np.vstack(self._vectors)
        return self._matrix

    def _sims(self, q: np.ndarray, ids: list[int]) -> np.ndarray:
        return self._vecs()[ids] @ q

    def _search_layer(self, q: np.ndarray, entry_points: list[int],
                      ef: int, layer: int) -> list[tuple[float, int]]:
        """Best-first expansion; returns up to ``ef`` (sim, id), unsorted."""
        visited = set(entry_points)
        sims = self._sims(q, entry_points)
        # candidates: max-heap on sim; results: min-heap on sim.
        candidates = [(-s, n) for s, n in zip(sims, entry_points)]
        heapq.heapify(candidates)
        results = [(s, n) for s, n in zip(sims, entry_points)]
        heapq.heapify(results)
        while len(results) > ef:
            heapq.heappop(results)
        while candidates:
            neg_sim, node = heapq.heappop(candidates)
            if -neg_sim < results[0][0] and len(results) >= ef:
                break
            fresh = [n for n in self._links[node][layer] if n not in visited]
            if not fresh:
                continue
            visited.update(fresh)
            for sim, n in zip(self._sims(q, fresh), fresh):
                sim = float(sim)
                if len(results) < ef or sim > results[0][0]:
                    heapq.heappush(candidates, (-sim, n))
                    heapq.heappush(results, (sim, n))
                    if len(results) > ef:
                        heapq.heappop(results)
        return results

    def _greedy_descend(self, q: np.ndarray, node: int, from_level: int,
                        to_level: int) -> int:
        for layer in range(from_level, to_level, -1):
            improved = True
            best = float(self._vecs()[node] @ q)
            while improved:
                improved = False
                neigh = self._links[node][layer]
                if not neigh:
                    continue
                sims = self._sims(q, neigh)
                i = int(np.argmax(sims))
                if float(sims[i]) > best:
                    best = float(sims[i])
                    node = neigh[i]
                    improved = True
        return node

    def add(self, vec: np.ndarray) -> int:
        node = len(self._links)
        level = int(-math.log(max(self._rng.random(), 1e-12)) * self._ml)
        self._vectors.append(np.asarray(vec, dtype=np.float32))
        self._matrix = None
        self._links.append([[] for _ in range(level + 1)])
        self._levels.append(level)

        if self._entry < 0:
            self._entry = node
            self._max_level = level
            return node

        q = self._vectors[node]
        cur = self._entry
        if self._max_level > level:
            cur = self._greedy_descend(q, cur, self._max_level, level)

        eps = [cur]
        for layer in range(min(level, self._max_level), -1, -1):
            found = self._search_layer(q, eps, self.ef_construction, layer)
            found_sorted = sorted(found, key=lambda t: (-t[0], t[1]))
            limit = self.m0 if layer == 0 else self.m
            chosen = [n for _, n in found_sorted[: self.m]]
            self._links[node][layer] = list(chosen)
            for other in chosen:
                links = self._links[other][layer]
                links.append(node)
                if len(links) > limit:
                    sims = self._sims(self._vectors[other], links)
                    order = sorted(
                        range(len(links)), key=lambda i: (-float(sims[i]), links[i])
                    )
                    self._links[other][layer] = [links[i] for i in order[:limit]]
            eps = [n for _, n in found_sorted]

        if level > self._max_level:
            self._max_level = level
            self._entry = node
        return node

    def search(self, q: np.ndarray, k: int, ef_search: int = 64
               ) -> list[tuple[int, float]]:
        """Top-k (id, similarity), descending similarity."""
        if self._entry < 0:
            return []
        q = np.asarray(q, dtype=np.float32)
        ef = max(ef_search, k)
        node = self._greedy_descend(q, self._entry, self._max_level, 0)
        found = self._search_layer(q, [node], ef, 0)
        found_sorted = sorted(found, key=lambda t: (-t[0], t[1]))
        return [(n, float(s)) for s, n in found_sorted[:k]]
