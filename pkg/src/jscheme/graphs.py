"""Union graphs Gamma_I(n, k) of the Johnson scheme as dense bitset graphs."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .combinat import SchemeParams, all_masks, elements_of, mask_of, rank_mask
from .scheme import InternalConsistencyError, eigen_matrices

__all__ = [
    "DEFAULT_MEMORY_BUDGET",
    "ResourceError",
    "ClassSet",
    "VertexSet",
    "SchemeGraph",
    "adjacency_from_masks",
    "build_graph",
    "complement",
    "delta",
    "phi",
]

DEFAULT_MEMORY_BUDGET = 4 * 2**30


class ResourceError(RuntimeError):
    pass


@dataclass(frozen=True)
class ClassSet:
    """A set I of scheme classes, a subset of {1..d}."""

    d: int
    members: frozenset[int]

    def __post_init__(self) -> None:
        bad = [j for j in self.members if not 1 <= j <= self.d]
        if bad:
            raise ValueError(f"classes {sorted(bad)} outside 1..{self.d}")

    @classmethod
    def of(cls, d: int, members: Iterable[int]) -> "ClassSet":
        return cls(d, frozenset(members))

    @property
    def trivial(self) -> bool:
        return not self.members or len(self.members) == self.d

    def complement(self) -> "ClassSet":
        return ClassSet(self.d, frozenset(range(1, self.d + 1)) - self.members)

    @property
    def bitmask(self) -> int:
        return sum(1 << (j - 1) for j in self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, sorted(self.members))) + "}"


@dataclass(frozen=True)
class VertexSet:
    """A set of vertices of J(n,k) as a v-bit integer; bit r is the set of rank r."""

    params: SchemeParams
    members: int = 0

    @classmethod
    def from_ranks(cls, params: SchemeParams, ranks: Iterable[int]) -> "VertexSet":
        m = 0
        v = params.v
        for r in ranks:
            if not 0 <= r < v:
                raise ValueError(f"rank {r} out of range for {params}")
            m |= 1 << r
        return cls(params, m)

    @classmethod
    def from_blocks(cls, params: SchemeParams, blocks: Iterable[Iterable[int]]) -> "VertexSet":
        ranks = []
        for b in blocks:
            els = tuple(b)
            if len(els) != params.k or len(set(els)) != params.k or max(els) > params.n:
                raise ValueError(f"{els} is not a {params.k}-subset of 1..{params.n}")
            ranks.append(rank_mask(mask_of(els)))
        return cls.from_ranks(params, ranks)

    @property
    def ranks(self) -> list[int]:
        out = []
        m = self.members
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    @property
    def blocks(self) -> list[tuple[int, ...]]:
        masks = all_masks(self.params)
        return [elements_of(int(masks[r])) for r in self.ranks]

    def __len__(self) -> int:
        return self.members.bit_count()

    def __contains__(self, r: int) -> bool:
        return bool(self.members >> r & 1)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.params, self.members | other.members)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.params, self.members & other.members)


def _pack_rows(member: np.ndarray, words: int) -> np.ndarray:
    packed = np.packbits(member, axis=1, bitorder="little")
    out = np.zeros((member.shape[0], words * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view("<u8").astype(np.uint64, copy=False)


def adjacency_from_masks(masks: np.ndarray, k: int, classes: Iterable[int]) -> np.ndarray:
    """Bitset adjacency among the given k-set masks: an edge iff k - |a & b| lies in ``classes``."""
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    m = len(masks)
    words = max(1, (m + 63) // 64)
    table = np.zeros(k + 1, dtype=bool)
    for j in classes:
        table[k - j] = True  # indexed by intersection size
    table[k] = False
    adj = np.empty((m, words), dtype=np.uint64)
    step = max(1, (1 << 22) // max(m, 1))
    for lo in range(0, m, step):
        hi = min(m, lo + step)
        inter = np.bitwise_count(masks[lo:hi, None] & masks[None, :])
        adj[lo:hi] = _pack_rows(table[inter], words)
    return adj


@dataclass(frozen=True, eq=False)
class SchemeGraph:
    params: SchemeParams
    classes: ClassSet
    adjacency: np.ndarray = field(repr=False)
    degree: int
    eigenvalues: tuple[int, ...]

    @property
    def v(self) -> int:
        return self.params.v

    @property
    def tau(self) -> int:
        return min(self.eigenvalues[1:]) if len(self.eigenvalues) > 1 else self.eigenvalues[0]

    @property
    def trivial(self) -> bool:
        return self.classes.trivial

    @cached_property
    def rows(self) -> list[int]:
        """Adjacency rows as Python ints (bit s of rows[r] set iff r ~ s)."""
        raw = self.adjacency.astype("<u8", copy=False).tobytes()
        width = self.adjacency.shape[1] * 8
        return [int.from_bytes(raw[r * width:(r + 1) * width], "little") for r in range(self.v)]

    def has_edge(self, r: int, s: int) -> bool:
        return bool(int(self.adjacency[r, s >> 6]) >> (s & 63) & 1)

    def neighbours(self, r: int) -> VertexSet:
        return VertexSet(self.params, self.rows[r])

    def is_clique(self, vs: VertexSet) -> bool:
        rows = self.rows
        for r in vs.ranks:
            if (vs.members & ~(1 << r)) & ~rows[r]:
                return False
        return True

    def is_coclique(self, vs: VertexSet) -> bool:
        rows = self.rows
        return all(not (vs.members & rows[r]) for r in vs.ranks)

    def label(self) -> str:
        return f"Gamma_{self.classes}({self.params.n},{self.params.k})"


def spectrum(params: SchemeParams, classes: ClassSet) -> tuple[int, ...]:
    P = eigen_matrices(params).P
    return tuple(sum(P[i][j] for j in classes.members) for i in range(params.d + 1))


def build_graph(
    params: SchemeParams,
    classes: ClassSet | Iterable[int],
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> SchemeGraph:
    if not isinstance(classes, ClassSet):
        classes = ClassSet.of(params.d, classes)
    if classes.d != params.d:
        raise ValueError(f"class set over 1..{classes.d} does not match J({params.n},{params.k})")
    v = params.v
    need = v * ((v + 63) // 64) * 8
    if need > memory_budget:
        raise ResourceError(
            f"adjacency of J({params.n},{params.k}) needs {need} bytes, budget is {memory_budget}"
        )
    adj = adjacency_from_masks(all_masks(params), params.k, classes.members)
    eig = spectrum(params, classes)
    degree = eig[0]
    if sum(int(np.bitwise_count(w)) for w in adj[0]) != degree:
        raise InternalConsistencyError(f"row 0 of {classes} has wrong popcount")
    adj.setflags(write=False)
    return SchemeGraph(params, classes, adj, degree, eig)


def complement(g: SchemeGraph) -> SchemeGraph:
    v = g.v
    words = g.adjacency.shape[1]
    full = np.full(words, np.uint64(0xFFFFFFFFFFFFFFFF))
    if v % 64:
        full[-1] = np.uint64((1 << (v % 64)) - 1)
    adj = ~g.adjacency & full
    idx = np.arange(v)
    adj[idx, idx >> 6] &= ~(np.uint64(1) << (idx & 63).astype(np.uint64))
    adj.setflags(write=False)
    comp = g.classes.complement()
    eig = spectrum(g.params, comp)
    # A + A' = J - I: the eigenvalues pair up as v-1 on the all-ones space and -1 elsewhere
    if eig[0] + g.eigenvalues[0] != v - 1 or any(
        a + b != -1 for a, b in zip(eig[1:], g.eigenvalues[1:])
    ):
        raise InternalConsistencyError("complement spectrum mismatch")
    return SchemeGraph(g.params, comp, adj, eig[0], eig)


def delta(t: int, params: SchemeParams) -> ClassSet:
    """Classes of Delta_t: sets meeting in fewer than t points."""
    k = params.k
    return ClassSet.of(params.d, [j for j in range(k - t + 1, k + 1) if j <= params.d])


def phi(t: int, params: SchemeParams) -> ClassSet:
    """Classes of Phi_t: sets meeting in at least t points."""
    return ClassSet.of(params.d, range(1, min(params.k - t, params.d) + 1))
