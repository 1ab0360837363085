"""Semantic layer: embeddings, vector corpus index, top-k query, stats."""

from .provider import EmbeddingProvider, EmbeddingVector, HashingEmbedder, embed
from .index import (
    CorpusIndex,
    NeighborSet,
    SimilarityStats,
    build_index,
    load_index,
    query_topk,
    similarity_stats,
)

__all__ = [
    "EmbeddingProvider",
    "EmbeddingVector",
    "HashingEmbedder",
    "embed",
    "CorpusIndex",
    "NeighborSet",
    "SimilarityStats",
    "build_index",
    "load_index",
    "query_topk",
    "similarity_stats",
]
