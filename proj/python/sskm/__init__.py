"""Sparse spherical k-means for document clustering."""

from ._core import (
    ClusteringResult,
    CorpusMatrix,
    IterationStats,
    SparseVector,
    cluster,
    dot,
    index_candidates,
    load_matrix,
    normalize,
    sq_euclidean,
    synthetic_zipf,
    tokenize,
    vectorize_corpus,
    write_matrix,
)

__all__ = [
    "ClusteringResult",
    "CorpusMatrix",
    "IterationStats",
    "SparseVector",
    "cluster",
    "dot",
    "index_candidates",
    "load_matrix",
    "normalize",
    "sq_euclidean",
    "synthetic_zipf",
    "tokenize",
    "vectorize_corpus",
    "write_matrix",
]
