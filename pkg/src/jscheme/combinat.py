"""Exact integer arithmetic and k-subset encoding.

Sets are stored as bitmasks: element ``e`` (1-based) is bit ``e - 1``.  For a
fixed popcount the integer order of the masks is colexicographic order, so the
rank of a set is its index in the sorted list of all masks of that size.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, NamedTuple

import numpy as np

__all__ = [
    "BigRat",
    "KSet",
    "SchemeParams",
    "binom",
    "rank",
    "unrank",
    "rank_mask",
    "unrank_mask",
    "all_masks",
    "mask_of",
    "elements_of",
    "intersection_class",
    "DivisibilityCheck",
    "divisibility_conditions",
    "k4_residue_class",
]

# Fraction is already reduced, sign-normalised and exact.
BigRat = Fraction


def binom(n: int, r: int) -> int:
    """C(n, r) with the convention C(n, r) = 0 for r < 0 or r > n."""
    if r < 0 or n < 0 or r > n:
        return 0
    return comb(n, r)


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


@dataclass(frozen=True)
class SchemeParams:
    """Parameters of J(n, k); ``v`` is the number of vertices."""

    n: int
    k: int

    def __post_init__(self) -> None:
        if not 0 < self.k < self.n:
            raise ValueError(f"need 0 < k < n, got n={self.n}, k={self.k}")

    @property
    def v(self) -> int:
        return comb(self.n, self.k)

    @property
    def d(self) -> int:
        """Number of non-identity classes; equals k unless n < 2k."""
        return min(self.k, self.n - self.k)


@dataclass(frozen=True, order=True)
class KSet:
    """A k-subset of {1..n} held as a bitmask."""

    n: int
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} has elements outside 1..{self.n}")

    @classmethod
    def of(cls, n: int, elements: Iterable[int]) -> "KSet":
        els = list(elements)
        if len(set(els)) != len(els):
            raise ValueError(f"repeated elements in {els}")
        if any(e > n for e in els):
            raise ValueError(f"elements {els} exceed n={n}")
        return cls(n, mask_of(els))

    @property
    def k(self) -> int:
        return self.mask.bit_count()

    @property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self.mask)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


def rank_mask(mask: int) -> int:
    """Colex combinadic rank: sum of C(c_i, i) over 0-based elements c_1 < ... < c_k."""
    r = 0
    i = 1
    pos = 0
    while mask:
        if mask & 1:
            r += binom(pos, i)
            i += 1
        mask >>= 1
        pos += 1
    return r


def unrank_mask(r: int, n: int, k: int) -> int:
    total = binom(n, k)
    if not 0 <= r < total:
        raise ValueError(f"rank {r} out of range 0..{total - 1} for n={n}, k={k}")
    mask = 0
    c = n - 1
    for i in range(k, 0, -1):
        while binom(c, i) > r:
            c -= 1
        r -= binom(c, i)
        mask |= 1 << c
        c -= 1
    return mask


def rank(s: KSet) -> int:
    return rank_mask(s.mask)


def unrank(r: int, params: SchemeParams) -> KSet:
    return KSet(params.n, unrank_mask(r, params.n, params.k))


@lru_cache(maxsize=32)
def _all_masks(n: int, k: int) -> np.ndarray:
    if n > 64:
        raise ValueError("masks are limited to n <= 64")
    masks = np.fromiter(
        (sum(1 << c for c in combo) for combo in combinations(range(n), k)),
        dtype=np.uint64,
        count=binom(n, k),
    )
    masks.sort()
    masks.setflags(write=False)
    return masks


def all_masks(params: SchemeParams) -> np.ndarray:
    """All k-subset masks of {1..n}, indexed by colex rank (read-only uint64 array)."""
    return _all_masks(params.n, params.k)


def intersection_class(a: KSet, b: KSet) -> int:
    """Scheme class of the pair: k - |a & b|, so class 0 means a == b."""
    if a.n != b.n:
        raise ValueError(f"ground sets differ: n={a.n} vs n={b.n}")
    k = a.k
    if b.k != k:
        raise ValueError(f"set sizes differ: {k} vs {b.k}")
    return k - (a.mask & b.mask).bit_count()


class DivisibilityCheck(NamedTuple):
    i: int
    divisor: int
    dividend: int
    remainder: int


def divisibility_conditions(t: int, k: int, n: int) -> tuple[bool, list[DivisibilityCheck]]:
    """Necessary conditions for S(t,k,n): C(k-i, t-i) | C(n-i, t-i) for 0 <= i < t."""
    if not 0 < t < k < n:
        raise ValueError(f"need 0 < t < k < n, got t={t}, k={k}, n={n}")
    checks = []
    for i in range(t):
        d, m = binom(k - i, t - i), binom(n - i, t - i)
        checks.append(DivisibilityCheck(i, d, m, m % d))
    return all(c.remainder == 0 for c in checks), checks


def k4_residue_class(n: int) -> tuple[frozenset[int], bool]:
    """The t in {1,2,3} for which S(t,4,n) passes divisibility, and whether any does."""
    if n < 10:
        raise ValueError(f"k4_residue_class expects n >= 10, got {n}")
    ts = frozenset(t for t in (1, 2, 3) if divisibility_conditions(t, 4, n)[0])
    return ts, bool(ts)
