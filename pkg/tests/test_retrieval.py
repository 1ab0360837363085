import numpy as np
import pytest

from mailsentry.errors import (DimensionMismatch, DuplicateId,
                               MixedLabelCorpus, UnredactedInput)
from mailsentry.retrieval.index import (AnnParams, CorpusIndex, NeighborSet,
                                        Neighbor, build_index, load_index,
                                        query_topk, save_index,
                                        similarity_stats)
from mailsentry.retrieval.provider import (EmbeddingVector, HashingEmbedder,
                                           embed)


def unit_rows(n, d, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d)).astype(np.float32)
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def raw_index(X, mode="exact", ann=None):
    return CorpusIndex(
        ids=[f"d{i}" for i in range(len(X))],
        snippets=["" for _ in range(len(X))],
        vectors=X,
        provider_id="test",
        ann_params=ann or AnnParams(),
        mode=mode,
    )


def brute_topk(X, q, k):
    """Independent oracle: pure-python cosine scan."""
    sims = [(float(np.dot(row, q)), i) for i, row in enumerate(X)]
    sims.sort(key=lambda t: (-t[0], t[1]))
    return [(i, s) for s, i in sims[:k]]


class TestEmbed:
    def test_deterministic(self, provider):
        a = embed("verify your account", provider)
        b = embed("verify your account", provider)
        assert np.array_equal(a.values, b.values)

    def test_unit_norm(self, provider):
        v = embed("some redacted text", provider)
        assert abs(float(np.linalg.norm(v.values)) - 1.0) < 1e-6

    def test_rejects_unredacted(self, provider):
        with pytest.raises(UnredactedInput):
            embed("my ssn is 123-45-6789", provider)

    def test_override_allows_unredacted(self, provider):
        v = embed("my ssn is 123-45-6789", provider, allow_unredacted=True)
        assert v.dim == provider.dim

    def test_cache_skips_recompute(self):
        p = HashingEmbedder(dim=64)
        embed("same text", p)
        calls = p.calls
        embed("same text", p)
        assert p.calls == calls

    def test_dimension_mismatch(self):
        class Bad:
            provider_id = "bad"
            dim = 16

            def embed_text(self, text):
                return np.zeros(8, dtype=np.float32)

        with pytest.raises(DimensionMismatch):
            embed("text", Bad())

    def test_similar_texts_more_similar_than_unrelated(self):
        p = HashingEmbedder(dim=512)
        a = embed("urgent verify your account password now", p).values
        b = embed("urgent please verify your account password today", p).values
        c = embed("quarterly gardening newsletter tomato seedlings", p).values
        assert float(a @ b) > float(a @ c)


class TestExactOracle:
    def test_twenty_random_corpora(self):
        rng = np.random.default_rng(42)
        for trial in range(20):
            n = int(rng.integers(5, 400))
            d = int(rng.integers(8, 64))
            X = unit_rows(n, d, seed=trial)
            index = raw_index(X)
            q = unit_rows(1, d, seed=1000 + trial)[0]
            got = query_topk(index, EmbeddingVector(values=q, provider_id="test"),
                             k=8)
            want = brute_topk(X, q, min(8, n))
            assert [h.id for h in got.hits] == [f"d{i}" for i, _ in want]
            for h, (_, s) in zip(got.hits, want):
                assert abs(h.similarity - s) < 1e-6

    def test_self_query_similarity_one(self):
        X = unit_rows(10, 16, seed=0)
        index = raw_index(X)
        got = query_topk(index, EmbeddingVector(values=X[3], provider_id="test"), k=1)
        assert got.hits[0].id == "d3"
        assert got.hits[0].similarity == pytest.approx(1.0, abs=1e-6)

    def test_orthogonal_query_zero_similarity(self):
        X = np.eye(4, dtype=np.float32)[:2]
        index = raw_index(X)
        q = np.array([0, 0, 1, 0], dtype=np.float32)
        got = query_topk(index, EmbeddingVector(values=q, provider_id="test"), k=2)
        assert all(h.similarity == pytest.approx(0.0) for h in got.hits)


class TestApproximate:
    def test_recall_at_8_on_1k(self):
        d = 48
        X = unit_rows(1000, d, seed=3)
        index = raw_index(X, mode="approximate")
        queries = unit_rows(100, d, seed=4)
        total = 0.0
        for q in queries:
            truth = {i for i, _ in brute_topk(X, q, 8)}
            got = query_topk(index, EmbeddingVector(values=q, provider_id="test"),
                             k=8)
            got_ids = {int(h.id[1:]) for h in got.hits}
            total += len(truth & got_ids) / 8
        assert total / 100 >= 0.95

    def test_deterministic_given_seed(self):
        X = unit_rows(200, 16, seed=5)
        q = unit_rows(1, 16, seed=6)[0]
        qa = EmbeddingVector(values=q, provider_id="test")
        a = query_topk(raw_index(X.copy(), mode="approximate"), qa, k=8)
        b = query_topk(raw_index(X.copy(), mode="approximate"), qa, k=8)
        assert [h.id for h in a.hits] == [h.id for h in b.hits]


class TestBuildIndex:
    def test_build_and_query_both_modes(self, provider):
        corpus = [(f"p{i}", f"phishing sample number {i} about invoices") for i in range(100)]
        for mode in ("exact", "approximate"):
            index = build_index(corpus, provider, mode=mode)
            assert len(index) == 100
            v = embed("phishing sample number 7 about invoices", provider)
            hits = query_topk(index, v, k=3)
            assert hits.hits[0].id == "p7"

    def test_duplicate_ids_rejected(self, provider):
        with pytest.raises(DuplicateId):
            build_index([("a", "x"), ("a", "y")], provider)

    def test_mixed_labels_rejected_without_flag(self, provider):
        with pytest.raises(MixedLabelCorpus):
            build_index([("a", "x")], provider, labels=["benign"])

    def test_mixed_labels_allowed_with_flag(self, provider):
        index = build_index([("a", "x")], provider, labels=["benign"],
                            allow_mixed=True)
        assert index.corpus_mode == "mixed"

    def test_snippet_capped_at_280(self, provider):
        index = build_index([("a", "y" * 500)], provider)
        assert len(index.snippets[0]) == 280


class TestPersistence:
    def test_round_trip_identical_results(self, tmp_path, provider):
        corpus = [(f"p{i}", f"known attack text variant {i}") for i in range(50)]
        index = build_index(corpus, provider)
        save_index(index, tmp_path / "idx")
        loaded = load_index(tmp_path / "idx")
        assert loaded.ids == index.ids
        assert loaded.provider_id == index.provider_id
        v = embed("known attack text variant 31", provider)
        a = query_topk(index, v, k=8)
        b = query_topk(loaded, v, k=8)
        assert [(h.id, h.similarity) for h in a.hits] == \
               [(h.id, h.similarity) for h in b.hits]

    def test_sidecar_header(self, tmp_path, provider):
        index = build_index([("a", "text one"), ("b", "text two")], provider)
        vec_path, _ = save_index(index, tmp_path / "idx")
        raw = vec_path.read_bytes()
        assert raw[:4] == b"MSVX"
        import struct
        version, dim, count = struct.unpack("<III", raw[4:16])
        assert (version, dim, count) == (1, provider.dim, 2)

    def test_manifest_mode_preserved(self, tmp_path, provider):
        index = build_index([("a", "x")], provider, labels=["benign"],
                            allow_mixed=True, mode="approximate")
        save_index(index, tmp_path / "idx")
        loaded = load_index(tmp_path / "idx")
        assert loaded.corpus_mode == "mixed"
        assert loaded.mode == "approximate"


class TestQueryEdges:
    def test_empty_index_returns_empty(self, provider):
        index = build_index([], provider)
        got = query_topk(index, embed("anything", provider), k=8)
        assert got.hits == ()

    def test_dimension_mismatch(self):
        X = unit_rows(5, 16, seed=0)
        index = raw_index(X)
        q = EmbeddingVector(values=unit_rows(1, 8, seed=1)[0], provider_id="t")
        with pytest.raises(DimensionMismatch):
            query_topk(index, q, k=3)


class TestSimilarityStats:
    def test_spec_arithmetic(self):
        hits = NeighborSet(hits=tuple(
            Neighbor(id=f"d{i}", similarity=s, snippet="")
            for i, s in enumerate([0.8, 0.6, 0.4, 0.1])
        ))
        stats = similarity_stats(hits)
        assert stats.s_top == pytest.approx(0.8)
        assert stats.s_avg == pytest.approx((0.8 + 0.6 + 0.4) / 3)

    def test_single_hit(self):
        stats = similarity_stats(
            NeighborSet(hits=(Neighbor(id="a", similarity=0.5, snippet=""),))
        )
        assert stats.s_top == stats.s_avg == 0.5

    def test_empty_flag(self):
        stats = similarity_stats(NeighborSet(hits=()))
        assert (stats.s_top, stats.s_avg, stats.empty) == (0.0, 0.0, True)

    def test_nonincreasing_enforced(self):
        with pytest.raises(ValueError):
            NeighborSet(hits=(
                Neighbor(id="a", similarity=0.2, snippet=""),
                Neighbor(id="b", similarity=0.9, snippet=""),
            ))
