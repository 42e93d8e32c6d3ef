"""Exact analysis of separation and synchronization in Johnson schemes J(n,k)."""
from .combinat import KSet, SchemeParams, binom, divisibility_conditions, rank, unrank
from .graphs import ClassSet, SchemeGraph, VertexSet, build_graph
from .scheme import EigenMatrices, eigen_matrices

__version__ = "0.1.0"

__all__ = [
    "KSet",
    "SchemeParams",
    "binom",
    "divisibility_conditions",
    "rank",
    "unrank",
    "ClassSet",
    "SchemeGraph",
    "VertexSet",
    "build_graph",
    "EigenMatrices",
    "eigen_matrices",
    "__version__",
]
