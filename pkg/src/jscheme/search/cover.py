"""Partitions, colouring checks and exact cover.

Exact cover is Knuth's Algorithm X over dictionaries of sets, choosing the
column with fewest candidate rows first (ties broken by column key), which
keeps the search deterministic.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from ..graphs import SchemeGraph, VertexSet

__all__ = [
    "Partition",
    "PartitionError",
    "verify_colouring",
    "exact_cover",
    "exact_cover_partition",
]


class PartitionError(ValueError):
    """Raised when parts overlap or fail to cover the vertex set."""


@dataclass(frozen=True)
class Partition:
    parts: tuple[VertexSet, ...]

    def __init__(self, parts: Iterable[VertexSet]):
        object.__setattr__(self, "parts", tuple(parts))

    def __len__(self) -> int:
        return len(self.parts)

    def check(self, v: int) -> None:
        """Raise PartitionError naming the first overlap or uncovered vertex."""
        seen = 0
        for idx, part in enumerate(self.parts):
            clash = seen & part.members
            if clash:
                r = (clash & -clash).bit_length() - 1
                raise PartitionError(f"vertex {r} lies in part {idx} and an earlier part")
            seen |= part.members
        full = (1 << v) - 1
        if seen != full:
            missing = full & ~seen
            r = (missing & -missing).bit_length() - 1
            raise PartitionError(f"vertex {r} is in no part")


def verify_colouring(g: SchemeGraph, p: Partition) -> bool:
    """True iff every part of the partition ``p`` is a coclique of ``g``."""
    p.check(g.v)
    return all(g.is_coclique(part) for part in p.parts)


def exact_cover(
    columns: Iterable[Hashable],
    rows: Mapping[Hashable, Sequence[Hashable]],
    *,
    limit: int = 1,
    time_budget: float = 0.0,
) -> Iterator[list[Hashable]]:
    """Yield up to ``limit`` selections of row keys covering every column exactly once.

    ``limit=0`` yields every solution.  Row keys are tried in sorted order.
    With a positive ``time_budget`` (seconds) the search raises TimeoutError
    once the budget is spent.
    """
    deadline = time.monotonic() + time_budget if time_budget > 0 else 0.0
    X: dict = {c: set() for c in columns}
    for key in sorted(rows):
        for c in rows[key]:
            if c not in X:
                raise KeyError(f"row {key!r} uses unknown column {c!r}")
            X[c].add(key)
    Y = {key: list(rows[key]) for key in rows}
    order = {c: i for i, c in enumerate(X)}
    found = 0
    solution: list = []

    def select(r):
        cols = []
        for j in Y[r]:
            for i in X[j]:
                for k in Y[i]:
                    if k != j:
                        X[k].remove(i)
            cols.append(X.pop(j))
        return cols

    def deselect(r, cols):
        for j in reversed(Y[r]):
            X[j] = cols.pop()
            for i in X[j]:
                for k in Y[i]:
                    if k != j:
                        X[k].add(i)

    def solve():
        nonlocal found
        if not X:
            found += 1
            yield list(solution)
            return
        if deadline and time.monotonic() > deadline:
            raise TimeoutError("exact cover search ran out of time")
        c = min(X, key=lambda col: (len(X[col]), order[col]))
        for r in sorted(X[c]):
            solution.append(r)
            cols = select(r)
            yield from solve()
            deselect(r, cols)
            solution.pop()
            if limit and found >= limit:
                return

    for sol in solve():
        yield sol
        if limit and found >= limit:
            return


def exact_cover_partition(
    g: SchemeGraph, s: int, candidates: Sequence[VertexSet]
) -> Partition | None:
    """Pick candidate cocliques of size ``s`` that partition the vertices of ``g``.

    Returns None when ``s`` does not divide v or no sub-collection works.
    """
    if s <= 0 or g.v % s:
        return None
    for idx, cand in enumerate(candidates):
        if len(cand) != s:
            raise ValueError(f"candidate {idx} has size {len(cand)}, expected {s}")
        if not g.is_coclique(cand):
            raise ValueError(f"candidate {idx} is not a coclique")
    rows = {idx: cand.ranks for idx, cand in enumerate(candidates)}
    for sol in exact_cover(range(g.v), rows):
        part = Partition(candidates[i] for i in sorted(sol))
        if not verify_colouring(g, part):
            raise AssertionError("exact cover returned an improper colouring")
        return part
    return None
