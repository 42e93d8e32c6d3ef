"""Maximum clique and coclique search on Johnson scheme graphs.

Scheme graphs are vertex-transitive, and the stabiliser of a vertex is
transitive on each class of its neighbours.  So a clique of Gamma_I with at
least two vertices can be moved to contain the base set {1..k} and a fixed
representative of some class j in I.  Classes are handled one at a time; once
class j is done, later steps only look for cliques avoiding class j, which
shrinks every subsequent subproblem.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..combinat import SchemeParams, all_masks, mask_of
from ..graphs import ClassSet, SchemeGraph, VertexSet, adjacency_from_masks
from ..scheme import InternalConsistencyError, eigen_matrices
from ._backend import get_kernel

__all__ = [
    "DEFAULT_TIME_BUDGET",
    "CliqueResult",
    "EnumerationResult",
    "max_clique",
    "max_coclique",
    "scheme_clique",
    "scheme_clique_at_least",
    "DecisionResult",
    "clique_in_adjacency",
    "enumerate_max_cocliques",
    "enumerate_scheme_cliques",
    "class_representative",
    "transitive_relabel",
]

DEFAULT_TIME_BUDGET = 300.0
_DEGENERACY_LIMIT = 6000


@dataclass(frozen=True)
class CliqueResult:
    size: int
    witness: VertexSet
    proved_optimal: bool
    nodes_explored: int
    elapsed: float
    upper_bound: int | None = None


@dataclass(frozen=True)
class EnumerationResult:
    size: int
    families: list[VertexSet] = field(repr=False)
    exhaustive: bool
    nodes_explored: int
    elapsed: float


def _unpack(adj: np.ndarray, m: int) -> np.ndarray:
    bits = np.unpackbits(np.ascontiguousarray(adj, dtype="<u8").view(np.uint8), axis=1, bitorder="little")
    return bits[:, :m].astype(bool)


def _pack(mat: np.ndarray) -> np.ndarray:
    m = mat.shape[0]
    words = max(1, (m + 63) // 64)
    packed = np.packbits(mat, axis=1, bitorder="little")
    out = np.zeros((m, words * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view("<u8").astype(np.uint64, copy=False)


def search_order(adj: np.ndarray, m: int) -> np.ndarray:
    """Colouring order: the degeneracy ordering reversed, so dense cores come first."""
    deg = np.bitwise_count(adj).sum(axis=1).astype(np.int64)
    if m > _DEGENERACY_LIMIT:
        return np.argsort(-deg, kind="stable")
    mat = _unpack(adj, m)
    removed = np.zeros(m, dtype=bool)
    out = np.empty(m, dtype=np.int64)
    big = np.iinfo(np.int64).max
    work = deg.copy()
    for pos in range(m - 1, -1, -1):
        v = int(np.argmin(work))
        out[pos] = v
        removed[v] = True
        work[v] = big
        work -= mat[v] & ~removed
    return out


def clique_in_adjacency(
    adj: np.ndarray,
    *,
    lower: int = 0,
    upper: int = -1,
    time_budget: float = 0.0,
    backend: str | None = None,
    reorder: bool = True,
) -> tuple[int, list[int] | None, bool, int]:
    """Maximum clique of a plain bitset graph; returns (size, witness, complete, nodes).

    The witness uses the caller's vertex numbering and is None when no clique
    larger than ``lower`` exists.
    """
    m = adj.shape[0]
    if m == 0:
        return lower, None, True, 0
    order = search_order(adj, m) if reorder else np.arange(m)
    if reorder:
        mat = _unpack(adj, m)
        adj = _pack(mat[np.ix_(order, order)])
    kernel = get_kernel(backend)
    best, wit, complete, nodes, _ = kernel(adj, lower=lower, upper=upper, time_limit=time_budget)
    if wit is not None:
        wit = sorted(int(order[i]) for i in wit)
    return best, wit, complete, nodes


def _ordered_local(masks: np.ndarray, k: int, classes: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    classes = tuple(classes)
    adj = adjacency_from_masks(masks, k, classes)
    order = search_order(adj, len(masks))
    masks = masks[order]
    return masks, adjacency_from_masks(masks, k, classes)


def class_representative(params: SchemeParams, j: int) -> int:
    """Mask of the set {1..k-j} u {k+1..k+j}, which is in class j from {1..k}."""
    k = params.k
    return mask_of(list(range(1, k - j + 1)) + list(range(k + 1, k + j + 1)))


def _in_classes(inter: np.ndarray, k: int, classes) -> np.ndarray:
    table = np.zeros(k + 1, dtype=bool)
    for j in classes:
        table[k - j] = True
    table[k] = False
    return table[inter]


def _greedy_colour_count(adj: np.ndarray) -> int:
    rows = [int.from_bytes(r.astype("<u8").tobytes(), "little") for r in adj]
    U = (1 << len(rows)) - 1
    colours = 0
    while U:
        colours += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q ^= low
            U ^= low
            Q &= ~rows[v]
    return colours


def _class_order(params: SchemeParams, classes: Iterable[int]) -> list[int]:
    val = eigen_matrices(params).valencies
    return sorted(classes, key=lambda j: (-val[j], j))


def _to_ranks(params: SchemeParams, masks: Iterable[int]) -> VertexSet:
    allm = all_masks(params)
    arr = np.fromiter((int(m) for m in masks), dtype=np.uint64)
    ranks = np.searchsorted(allm, arr)
    return VertexSet.from_ranks(params, (int(r) for r in ranks))


def _pairwise_in_classes(masks: list[int], k: int, classes) -> bool:
    cs = set(classes)
    return all(
        k - (a & b).bit_count() in cs for i, a in enumerate(masks) for b in masks[i + 1:]
    )


class _State:
    def __init__(self, hint: int, deadline: float, kernel):
        self.best = 0
        self.best_masks: list[int] = []
        self.hint = hint
        self.deadline = deadline
        self.kernel = kernel
        self.nodes = 0
        self.complete = True
        self.open_bound = 0

    def done(self) -> bool:
        return self.hint >= 0 and self.best >= self.hint

    def offer(self, masks: list[int]) -> None:
        if len(masks) > self.best:
            self.best = len(masks)
            self.best_masks = masks


def _refine(atoms: list[int], s: int) -> list[int]:
    out = []
    for a in atoms:
        for part in (a & s, a & ~s):
            if part:
                out.append(part)
    return out


def _orbits(cand: np.ndarray, atoms: list[int]) -> list[np.ndarray]:
    """Orbits of the stabiliser of the fixed sets: equal intersection sizes with every atom."""
    sig = np.stack([np.bitwise_count(cand & np.uint64(a)) for a in atoms], axis=1)
    _, inverse = np.unique(sig, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    groups = [np.flatnonzero(inverse == g) for g in range(int(inverse.max()) + 1)]
    # big orbits first: every later branch then works without them
    groups.sort(key=lambda idx: (-len(idx), int(cand[idx[0]])))
    return groups


def _local_search(st: _State, fixed: list[int], cand: np.ndarray, k: int, classes) -> None:
    if len(fixed) + len(cand) <= st.best:
        return
    if len(cand) == 0:
        st.offer(list(fixed))
        return
    local_masks, local_adj = _ordered_local(cand, k, classes)
    left = st.deadline - time.monotonic()
    if left <= 0:
        st.complete = False
        st.open_bound = max(st.open_bound, len(fixed) + len(cand))
        return
    upper = st.hint - len(fixed) if st.hint >= 0 else -1
    size, wit, complete, nodes, _ = st.kernel(
        local_adj, lower=st.best - len(fixed), upper=upper, time_limit=left
    )
    st.nodes += nodes
    if wit is not None:
        st.offer(list(fixed) + [int(local_masks[i]) for i in wit])
    if not complete:
        st.complete = False
        st.open_bound = max(st.open_bound, len(fixed) + _greedy_colour_count(local_adj))


def _orbit_search(st: _State, fixed: list[int], atoms: list[int], cand: np.ndarray,
                  k: int, classes, depth_limit: int, small: int) -> None:
    if len(fixed) + len(cand) <= st.best or st.done():
        return
    if len(fixed) >= depth_limit or len(cand) <= small:
        _local_search(st, fixed, cand, k, classes)
        return
    alive = np.ones(len(cand), dtype=bool)
    for orbit in _orbits(cand, atoms):
        if st.done():
            return
        w = int(cand[orbit[0]])
        alive_now = alive.copy()
        alive[orbit] = False
        sub = cand[alive_now]
        sub = sub[_in_classes(np.bitwise_count(sub & np.uint64(w)), k, classes)]
        _orbit_search(st, fixed + [w], _refine(atoms, w), sub, k, classes, depth_limit, small)


def _run_symmetric(params: SchemeParams, members, st: _State, depth_limit: int, small: int) -> None:
    k = params.k
    masks = all_masks(params)
    base = int(masks[0])
    remaining = set(members)
    inter0 = np.bitwise_count(masks & np.uint64(base))
    top_atoms = _refine([(1 << params.n) - 1], base)
    for j in _class_order(params, members):
        if st.done():
            break
        rep = class_representative(params, j)
        ok = _in_classes(inter0, k, remaining) & _in_classes(
            np.bitwise_count(masks & np.uint64(rep)), k, remaining
        )
        _orbit_search(st, [base, rep], _refine(top_atoms, rep), masks[ok], k, tuple(remaining),
                      depth_limit, small)
        remaining.discard(j)


def scheme_clique(
    params: SchemeParams,
    classes: Iterable[int],
    *,
    upper_bound_hint: int | None = None,
    time_budget: float = DEFAULT_TIME_BUDGET,
    backend: str | None = None,
    graph: SchemeGraph | None = None,
    initial: VertexSet | None = None,
    depth_limit: int = 4,
    small: int = 48,
) -> CliqueResult:
    """Clique number of Gamma_I(n,k) using the transitive reduction described above.

    ``upper_bound_hint`` must be a proven upper bound; the search stops once
    a clique of that size is found.  ``initial`` is a known clique used as the
    starting lower bound.  Below the first two fixed vertices the candidates
    are split into orbits of the stabiliser of the fixed sets (sets with equal
    intersection sizes with every atom of the fixed sets), up to
    ``depth_limit`` fixed vertices or until at most ``small`` candidates
    remain; a clique avoiding the earlier orbits stays in the later branches.
    The full adjacency is never needed, so this also runs where build_graph
    would exceed the memory budget.
    """
    start = time.monotonic()
    cs = ClassSet.of(params.d, classes)
    k = params.k
    masks = all_masks(params)
    if not cs.members:
        return CliqueResult(1, VertexSet.from_ranks(params, [0]), True, 0, 0.0, 1)
    hint = upper_bound_hint if upper_bound_hint is not None else -1
    st = _State(hint, start + time_budget, get_kernel(backend))
    first = _class_order(params, cs.members)[0]
    st.offer([int(masks[0]), class_representative(params, first)])
    if initial is not None and len(initial) > st.best:
        init_masks = [int(m) for m in masks[np.asarray(initial.ranks, dtype=np.int64)]]
        if not _pairwise_in_classes(init_masks, k, cs.members):
            raise ValueError(f"initial family is not a clique of Gamma_{cs}")
        st.offer(init_masks)
    _run_symmetric(params, cs.members, st, depth_limit, small)
    best_masks = st.best_masks
    best = st.best
    if not _pairwise_in_classes(best_masks, k, cs.members):
        raise InternalConsistencyError(f"witness is not a clique of Gamma_{cs}")
    witness = _to_ranks(params, best_masks)
    if graph is not None and not graph.is_clique(witness):
        raise InternalConsistencyError("witness fails against the adjacency rows")
    if st.complete or st.done():
        ub = best
    else:
        ub = max(best, st.open_bound)
        if hint >= 0:
            ub = min(ub, hint)
    return CliqueResult(best, witness, best == ub, st.nodes, time.monotonic() - start, ub)


@dataclass(frozen=True)
class DecisionResult:
    """Whether Gamma_I has a clique of ``size`` vertices; None when the budget ran out."""

    size: int
    found: bool | None
    witness: VertexSet | None
    nodes_explored: int
    elapsed: float


def scheme_clique_at_least(
    params: SchemeParams,
    classes: Iterable[int],
    size: int,
    *,
    time_budget: float = DEFAULT_TIME_BUDGET,
    backend: str | None = None,
    depth_limit: int = 4,
    small: int = 48,
) -> DecisionResult:
    """Decide whether Gamma_I(n,k) has a clique with ``size`` vertices.

    Only branches that could still reach ``size`` are explored, which is far
    cheaper than computing the clique number when the answer is no.
    """
    start = time.monotonic()
    cs = ClassSet.of(params.d, classes)
    if size <= 1:
        return DecisionResult(size, True, VertexSet.from_ranks(params, [0]), 0, 0.0)
    if not cs.members:
        return DecisionResult(size, False, None, 0, 0.0)
    st = _State(size, start + time_budget, get_kernel(backend))
    st.best = size - 1
    _run_symmetric(params, cs.members, st, depth_limit, small)
    if st.best >= size:
        if not _pairwise_in_classes(st.best_masks, params.k, cs.members):
            raise InternalConsistencyError(f"witness is not a clique of Gamma_{cs}")
        wit = _to_ranks(params, st.best_masks[:size])
        return DecisionResult(size, True, wit, st.nodes, time.monotonic() - start)
    return DecisionResult(size, False if st.complete else None, None, st.nodes,
                          time.monotonic() - start)


def max_clique(
    g: SchemeGraph,
    *,
    upper_bound_hint: int | None = None,
    time_budget: float = DEFAULT_TIME_BUDGET,
    symmetric: bool = True,
    backend: str | None = None,
) -> CliqueResult:
    if g.v == 0:
        raise ValueError("empty graph")
    if symmetric:
        return scheme_clique(
            g.params, g.classes.members, upper_bound_hint=upper_bound_hint,
            time_budget=time_budget, backend=backend, graph=g,
        )
    start = time.monotonic()
    upper = upper_bound_hint if upper_bound_hint is not None else -1
    size, wit, complete, nodes = clique_in_adjacency(
        g.adjacency, lower=0, upper=upper, time_budget=time_budget, backend=backend
    )
    witness = VertexSet.from_ranks(g.params, wit or [])
    if not g.is_clique(witness):
        raise InternalConsistencyError("witness fails against the adjacency rows")
    proved = complete or (upper >= 0 and size >= upper)
    return CliqueResult(size, witness, proved, nodes, time.monotonic() - start,
                        size if proved else (upper if upper >= 0 else g.v))


def max_coclique(
    g: SchemeGraph,
    *,
    upper_bound_hint: int | None = None,
    time_budget: float = DEFAULT_TIME_BUDGET,
    symmetric: bool = True,
    backend: str | None = None,
) -> CliqueResult:
    """Maximum coclique of ``g`` without building its complement graph."""
    comp = g.classes.complement().members
    if symmetric:
        res = scheme_clique(
            g.params, comp, upper_bound_hint=upper_bound_hint,
            time_budget=time_budget, backend=backend,
        )
    else:
        start = time.monotonic()
        v = g.v
        words = g.adjacency.shape[1]
        full = np.full(words, np.uint64(0xFFFFFFFFFFFFFFFF))
        if v % 64:
            full[-1] = np.uint64((1 << (v % 64)) - 1)
        comp_adj = ~g.adjacency & full
        idx = np.arange(v)
        comp_adj[idx, idx >> 6] &= ~(np.uint64(1) << (idx & 63).astype(np.uint64))
        upper = upper_bound_hint if upper_bound_hint is not None else -1
        size, wit, complete, nodes = clique_in_adjacency(
            comp_adj, upper=upper, time_budget=time_budget, backend=backend
        )
        proved = complete or (upper >= 0 and size >= upper)
        res = CliqueResult(size, VertexSet.from_ranks(g.params, wit or []), proved, nodes,
                           time.monotonic() - start, size if proved else None)
    if not g.is_coclique(res.witness):
        raise InternalConsistencyError("coclique witness has an edge in the graph")
    return res


def transitive_relabel(n: int, k: int, target_mask: int) -> list[int]:
    """A permutation (0-based list) of the points sending {1..k} onto ``target_mask``."""
    inside = [e for e in range(n) if target_mask >> e & 1]
    outside = [e for e in range(n) if not target_mask >> e & 1]
    return inside + outside


def _apply_perm(masks: np.ndarray, perm: list[int]) -> np.ndarray:
    out = np.zeros_like(masks)
    one = np.uint64(1)
    for e, img in enumerate(perm):
        out |= ((masks >> np.uint64(e)) & one) << np.uint64(img)
    return out


def enumerate_scheme_cliques(
    params: SchemeParams,
    classes: Iterable[int],
    size: int,
    *,
    cap: int = 100_000,
    time_budget: float = DEFAULT_TIME_BUDGET,
    backend: str | None = None,
) -> EnumerationResult:
    """Every clique of Gamma_I of exactly ``size`` vertices.

    The cliques through the base vertex are enumerated directly; all others are
    their images under one fixed relabelling per vertex (transitivity).
    """
    start = time.monotonic()
    cs = ClassSet.of(params.d, classes)
    k, n = params.k, params.n
    masks = all_masks(params)
    base = int(masks[0])
    if size <= 0:
        return EnumerationResult(size, [], True, 0, 0.0)
    if size == 1:
        fams = [VertexSet.from_ranks(params, [r]) for r in range(min(params.v, cap))]
        return EnumerationResult(1, fams, params.v <= cap, 0, 0.0)
    inter0 = np.bitwise_count(masks & np.uint64(base))
    cand = masks[_in_classes(inter0, k, cs.members)]
    local_masks, local_adj = _ordered_local(cand, k, cs.members)
    kernel = get_kernel(backend)
    _, _, complete, nodes, found = kernel(
        local_adj, target=size - 1, enumerate=True, cap=cap, time_limit=time_budget
    )
    through_base = [
        np.array(sorted([base] + [int(local_masks[i]) for i in f]), dtype=np.uint64) for f in found
    ]
    seen: set[tuple[int, ...]] = set()
    families: list[VertexSet] = []
    truncated = not complete
    for u in masks:
        perm = transitive_relabel(n, k, int(u))
        for fam in through_base:
            image = tuple(sorted(int(x) for x in _apply_perm(fam, perm)))
            if image in seen:
                continue
            if len(families) >= cap:
                truncated = True
                break
            seen.add(image)
            families.append(_to_ranks(params, image))
    families.sort(key=lambda vs: vs.ranks)
    return EnumerationResult(size, families, not truncated, nodes, time.monotonic() - start)


def enumerate_max_cocliques(
    g: SchemeGraph,
    size: int,
    *,
    cap: int = 100_000,
    time_budget: float = DEFAULT_TIME_BUDGET,
    backend: str | None = None,
) -> EnumerationResult:
    res = enumerate_scheme_cliques(
        g.params, g.classes.complement().members, size,
        cap=cap, time_budget=time_budget, backend=backend,
    )
    for fam in res.families:
        if not g.is_coclique(fam):
            raise InternalConsistencyError("enumerated family has an edge in the graph")
    return res
