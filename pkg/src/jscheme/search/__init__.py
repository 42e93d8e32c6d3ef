"""Exact clique search, colouring checks and exact cover."""
from ._backend import KERNELS, default_backend, get_kernel
from .clique import (
    CliqueResult,
    DecisionResult,
    EnumerationResult,
    clique_in_adjacency,
    enumerate_max_cocliques,
    enumerate_scheme_cliques,
    max_clique,
    max_coclique,
    scheme_clique,
    scheme_clique_at_least,
)
from .cover import Partition, PartitionError, exact_cover, exact_cover_partition, verify_colouring

__all__ = [
    "KERNELS",
    "default_backend",
    "get_kernel",
    "CliqueResult",
    "DecisionResult",
    "EnumerationResult",
    "clique_in_adjacency",
    "enumerate_max_cocliques",
    "enumerate_scheme_cliques",
    "max_clique",
    "max_coclique",
    "scheme_clique",
    "scheme_clique_at_least",
    "Partition",
    "PartitionError",
    "exact_cover",
    "exact_cover_partition",
    "verify_colouring",
]
