"""Delsarte-type bounds on Johnson scheme graphs, all in exact arithmetic.

Inner distributions and their MacWilliams transforms, the clique-coclique
product and its equality case, the ratio bound, the orthogonality filter for
equality pairs, and the bounds on intersecting families used for I = {1, k}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .combinat import SchemeParams, all_masks, binom, elements_of
from .graphs import ClassSet, SchemeGraph, VertexSet, spectrum
from .scheme import InternalConsistencyError, eigen_matrices

__all__ = [
    "InnerDistribution",
    "CliqueCocliqueCheck",
    "RatioBound",
    "FeasibleTuple",
    "UnsupportedParametersError",
    "NBoundReport",
    "EKRPartitionCheck",
    "inner_distribution",
    "clique_coclique_check",
    "ratio_bound",
    "ratio_bound_of",
    "ratio_divisibility_scan",
    "equality_filter",
    "nbound_value",
    "nbound_check",
    "double_count_bound_13",
    "hilton_milner",
    "separation_threshold_1k",
    "ekr_partition_inequality",
    "wilson_regime",
]


# -- inner distributions ---------------------------------------------------


@dataclass(frozen=True)
class InnerDistribution:
    """a_i = ordered pairs of X in class i, divided by |X|; transform = aQ."""

    a: tuple[Fraction, ...]
    source_size: int
    transform: tuple[Fraction, ...]
    degree_set: frozenset[int]
    dual_degree_set: frozenset[int]

    @property
    def delsarte_ok(self) -> bool:
        return all(c >= 0 for c in self.transform)


def _class_counts(masks: np.ndarray, k: int) -> list[int]:
    counts = np.zeros(k + 1, dtype=np.int64)
    step = max(1, (1 << 22) // max(len(masks), 1))
    for lo in range(0, len(masks), step):
        inter = np.bitwise_count(masks[lo:lo + step, None] & masks[None, :])
        counts += np.bincount(inter.ravel(), minlength=k + 1)
    # index by class j = k - |A & B|
    return [int(counts[k - j]) for j in range(k + 1)]


def _distribution(params: SchemeParams, counts: Sequence[int], size: int) -> InnerDistribution:
    Q = eigen_matrices(params).Q
    d = params.d
    a = tuple(Fraction(counts[i], size) for i in range(d + 1))
    transform = tuple(sum(a[i] * Q[i][j] for i in range(d + 1)) for j in range(d + 1))
    if transform[0] != sum(a) or sum(a) != size:
        raise InternalConsistencyError("(aQ)_0 differs from the number of points")
    return InnerDistribution(
        a,
        size,
        transform,
        frozenset(i for i in range(1, d + 1) if a[i]),
        frozenset(j for j in range(1, d + 1) if transform[j]),
    )


def _masks_of(X: VertexSet) -> np.ndarray:
    return all_masks(X.params)[np.asarray(X.ranks, dtype=np.int64)]


def inner_distribution(X: VertexSet) -> InnerDistribution:
    """Inner distribution of a nonempty vertex set and its MacWilliams transform."""
    size = len(X)
    if size == 0:
        raise ValueError("inner distribution of the empty set is undefined")
    counts = _class_counts(_masks_of(X), X.params.k)
    return _distribution(X.params, counts, size)


# -- clique-coclique bound -------------------------------------------------


@dataclass(frozen=True)
class CliqueCocliqueCheck:
    product: int
    v: int
    equality: bool
    schur_ok: bool


def _first_bad_pair(X: VertexSet, allowed: frozenset[int]) -> tuple | None:
    masks = [int(m) for m in _masks_of(X)]
    k = X.params.k
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if k - (a & b).bit_count() not in allowed:
                return elements_of(a), elements_of(b)
    return None


def clique_coclique_check(g: SchemeGraph, C: VertexSet, S: VertexSet) -> CliqueCocliqueCheck:
    """Compare |C|·|S| with v; on equality test that (uQ)_j (vQ)_j = 0 for all j > 0."""
    bad = _first_bad_pair(C, g.classes.members)
    if bad:
        raise ValueError(f"C is not a clique of {g.label()}: {bad[0]} and {bad[1]}")
    bad = _first_bad_pair(S, g.classes.complement().members)
    if bad:
        raise ValueError(f"S is not a coclique of {g.label()}: {bad[0]} and {bad[1]}")
    product = len(C) * len(S)
    if product > g.v:
        raise InternalConsistencyError(f"clique-coclique bound violated: {product} > {g.v}")
    equality = product == g.v
    schur_ok = False
    if equality:
        u = inner_distribution(C).transform
        w = inner_distribution(S).transform
        schur = [u[j] * w[j] for j in range(len(u))]
        schur_ok = schur[0] == g.v and not any(schur[1:])
    return CliqueCocliqueCheck(product, g.v, equality, schur_ok)


# -- ratio bound ---------------------------------------------------------------


@dataclass(frozen=True)
class RatioBound:
    degree: int
    tau: int
    alpha_bound: Fraction
    omega_if_equality: Fraction
    divisibility_ok: bool


def ratio_bound_of(params: SchemeParams, classes: ClassSet | Iterable[int]) -> RatioBound:
    if not isinstance(classes, ClassSet):
        classes = ClassSet.of(params.d, classes)
    if classes.trivial:
        raise ValueError(f"class set {classes} gives a trivial graph")
    eig = spectrum(params, classes)
    degree, tau = eig[0], min(eig[1:])
    if tau >= 0:
        raise InternalConsistencyError(f"smallest eigenvalue {tau} of a non-trivial graph is not negative")
    omega = 1 - Fraction(degree, tau)
    return RatioBound(degree, tau, params.v / omega, omega, omega.denominator == 1)


def ratio_bound(g: SchemeGraph) -> RatioBound:
    """alpha <= v / (1 - deg/tau); under omega·alpha = v, omega = 1 - deg/tau."""
    return ratio_bound_of(g.params, g.classes)


def ratio_divisibility_scan(k: int, I: Iterable[int], n_range: Iterable[int]) -> list[int]:
    """The n for which 1 - deg/tau of Gamma_I(n,k) is an integer.

    The smallest eigenvalue is found per n.  Values of n where I is not a
    proper non-empty set of existing classes are skipped.
    """
    I = frozenset(I)
    out = []
    for n in n_range:
        if n <= k:
            continue
        params = SchemeParams(n, k)
        if not I or max(I) > params.d or len(I) == params.d:
            continue
        if ratio_bound_of(params, I).divisibility_ok:
            out.append(n)
    return out


# -- equality filter -------------------------------------------------------


class UnsupportedParametersError(ValueError):
    pass


@dataclass(frozen=True)
class FeasibleTuple:
    """One surviving equality case.

    ``pattern[j-1]`` is "u" when (uQ)_j = 0 is imposed and "v" when (vQ)_j = 0.
    ``u_vertices``/``v_vertices`` are the vertices of the polytope of admissible
    clique and coclique inner distributions; a single vertex means the
    distribution is forced.
    """

    x: int
    y: int
    pattern: tuple[str, ...]
    u_vertices: tuple[tuple[Fraction, ...], ...]
    v_vertices: tuple[tuple[Fraction, ...], ...]


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system, or None when singular."""
    size = len(A)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(size):
        piv = next((r for r in range(col, size) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [e * inv for e in M[col]]
        for r in range(size):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[r][size] for r in range(size)]


def _vertices(support: list[int], total: int, Q, zero: Iterable[int], d: int) -> list[tuple[Fraction, ...]]:
    """Vertices of {w >= 0 on support, sum w = total - 1, (wQ)_j >= 0, (wQ)_j = 0 for j in zero}.

    Each vertex is the full distribution (w_0 = 1, zeros off the support).
    """
    s = len(support)
    eqs = [([Fraction(1)] * s, Fraction(total - 1))]
    for j in zero:
        eqs.append(([Fraction(Q[i][j]) for i in support], -Fraction(Q[0][j])))
    ineqs = [([Fraction(int(i == t)) for i in range(s)], Fraction(0)) for t in range(s)]
    for j in range(1, d + 1):
        ineqs.append(([Fraction(Q[i][j]) for i in support], -Fraction(Q[0][j])))
    out = set()
    need = s - len(eqs)
    if need < 0:
        # over-determined: solve with any s of them, then check the rest
        combos = itertools.combinations(range(len(eqs)), s)
        candidates = [[eqs[c] for c in combo] for combo in combos]
    else:
        candidates = [eqs + [ineqs[c] for c in combo] for combo in itertools.combinations(range(len(ineqs)), need)]
    for rows in candidates:
        w = _solve([r[0] for r in rows], [r[1] for r in rows])
        if w is None:
            continue
        if any(sum(c * x for c, x in zip(coef, w)) != rhs for coef, rhs in eqs):
            continue
        if any(sum(c * x for c, x in zip(coef, w)) < rhs for coef, rhs in ineqs):
            continue
        full = [Fraction(0)] * (d + 1)
        full[0] = Fraction(1)
        for i, val in zip(support, w):
            full[i] = val
        out.add(tuple(full))
    return sorted(out)


def equality_filter(
    n: int,
    k: int,
    I: Iterable[int],
    *,
    max_clique: int | None = None,
    max_coclique: int | None = None,
) -> list[FeasibleTuple]:
    """All (x, y) with x·y = C(n,k) that survive the orthogonality conditions.

    A clique of Gamma_I has inner distribution u supported on {0} u I, a
    coclique has v supported on {0} u I'.  If |C|·|S| = v then
    (uQ)_j (vQ)_j = 0 for every j > 0.  For each factor pair and each choice
    of which factor vanishes, the admissible u and v form polytopes (entries
    and transforms non-negative); the pair survives when both are non-empty.
    An empty result proves that no clique-coclique pair meets the bound.
    Optional ``max_clique``/``max_coclique`` discard pairs above known bounds.
    """
    params = SchemeParams(n, k)
    d = params.d
    cs = ClassSet.of(d, I)
    if cs.trivial:
        raise ValueError(f"class set {cs} gives a trivial graph")
    u_support = sorted(cs.members)
    v_support = sorted(cs.complement().members)
    if len(u_support) - 1 > 2 or len(v_support) - 1 > 2:
        raise UnsupportedParametersError(
            f"more than two free parameters per side for I={cs} in J({n},{k})"
        )
    Q = eigen_matrices(params).Q
    v = params.v
    out = []
    for x in range(2, v // 2 + 1):
        if v % x:
            continue
        y = v // x
        if max_clique is not None and x > max_clique:
            continue
        if max_coclique is not None and y > max_coclique:
            continue
        cache_u: dict = {}
        cache_v: dict = {}
        for pattern in itertools.product("uv", repeat=d):
            zu = tuple(j + 1 for j in range(d) if pattern[j] == "u")
            zv = tuple(j + 1 for j in range(d) if pattern[j] == "v")
            if zu not in cache_u:
                cache_u[zu] = _vertices(u_support, x, Q, zu, d)
            if not cache_u[zu]:
                continue
            if zv not in cache_v:
                cache_v[zv] = _vertices(v_support, y, Q, zv, d)
            if not cache_v[zv]:
                continue
            out.append(FeasibleTuple(x, y, tuple(pattern), tuple(cache_u[zu]), tuple(cache_v[zv])))
    out.sort(key=lambda t: (t.x, t.pattern))
    return out


# -- intersecting families -------------------------------------------------


def nbound_value(n: int, k: int) -> int:
    """Largest {0, k-1}-intersecting family of k-subsets of an n-set has at most n members."""
    if k < 3:
        raise ValueError("the bound is stated for k >= 3")
    return n


@dataclass(frozen=True)
class NBoundReport:
    size: int
    bound: int
    within_bound: bool
    classes: tuple[tuple[tuple[int, ...], ...], ...]
    kinds: tuple[str, ...]


def nbound_check(n: int, blocks: Sequence[Iterable[int]]) -> NBoundReport:
    """Check a {0, k-1}-intersecting family against the bound n.

    Members meeting in k-1 points are related; this is an equivalence
    relation, and each class either shares a common (k-1)-set ("kernel") or
    lies inside one (k+1)-set ("cover").  A class of one set is "single";
    classes that are both (k = 2 members) are reported as "kernel".
    """
    sets = [frozenset(b) for b in blocks]
    if len(set(sets)) != len(sets):
        raise ValueError("family has repeated members")
    if not sets:
        return NBoundReport(0, n, True, (), ())
    k = len(sets[0])
    if any(len(s) != k or max(s) > n or min(s) < 1 for s in sets):
        raise ValueError(f"members must be {k}-subsets of 1..{n}")
    nbound_value(n, k)
    parent = list(range(len(sets)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(sets)), 2):
        m = len(sets[i] & sets[j])
        if m not in (0, k - 1):
            raise ValueError(
                f"{tuple(sorted(sets[i]))} and {tuple(sorted(sets[j]))} meet in {m} points"
            )
        if m == k - 1:
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(sets)):
        groups.setdefault(find(i), []).append(i)
    classes, kinds = [], []
    for idx in sorted(groups.values()):
        members = [sets[i] for i in idx]
        if any(len(a & b) != k - 1 for a, b in itertools.combinations(members, 2)):
            raise InternalConsistencyError("relation of meeting in k-1 points is not transitive")
        if len(members) == 1:
            kind = "single"
        elif len(frozenset.intersection(*members)) == k - 1:
            kind = "kernel"
        elif len(frozenset.union(*members)) == k + 1:
            kind = "cover"
        else:
            raise InternalConsistencyError("class is neither a kernel nor a cover class")
        classes.append(tuple(tuple(sorted(s)) for s in members))
        kinds.append(kind)
    return NBoundReport(len(sets), n, len(sets) <= n, tuple(classes), tuple(kinds))


def double_count_bound_13(n: int) -> int:
    """Upper bound floor(n(n-1)/4) on cliques of Gamma_{1,3}(n,4).

    The sets through a point, with the point removed, form a {0,2}-intersecting
    family of 3-sets of n-1 points, so at most n-1 of them.
    """
    if n <= 6:
        raise ValueError("needs n > 6")
    return n * (n - 1) // 4


def hilton_milner(n: int, k: int) -> int:
    """Largest intersecting family of k-sets with empty common intersection."""
    if n <= 2 * k:
        raise ValueError(f"needs n > 2k, got n={n}, k={k}")
    return binom(n - 1, k - 1) - binom(n - k - 1, k - 1) + 1


# polynomials in n as coefficient lists, lowest degree first


def _pmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padd(a: list[Fraction], b: list[Fraction], sign: int = 1) -> list[Fraction]:
    size = max(len(a), len(b))
    a = a + [Fraction(0)] * (size - len(a))
    b = b + [Fraction(0)] * (size - len(b))
    out = [x + sign * y for x, y in zip(a, b)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _binom_poly(shift: int, r: int) -> list[Fraction]:
    """C(n + shift, r) as a polynomial in n."""
    out = [Fraction(1)]
    for i in range(r):
        out = _pmul(out, [Fraction(shift - i), Fraction(1)])
    fact = 1
    for i in range(2, r + 1):
        fact *= i
    return [c / fact for c in out]


def _peval(p: list[Fraction], n: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * n + c
    return acc


def _root_bound(p: list[Fraction]) -> Fraction:
    """Cauchy bound: every real root lies below 1 + max |a_i / a_lead|."""
    lead = p[-1]
    return 1 + max(abs(c / lead) for c in p[:-1])


def separation_threshold_1k(k: int) -> int:
    """Smallest N with n·max(C(n-1,k-2)/(k-1), HM(n,k)) < C(n,k) for every n >= N.

    Both gaps are polynomials in n for n > 2k with positive leading
    coefficient; past their Cauchy root bounds they stay positive, so an exact
    scan up to that point settles every n.
    """
    if k < 3:
        raise ValueError("needs k >= 3")
    n_poly = [Fraction(0), Fraction(1)]
    total = _binom_poly(0, k)
    star = [c / (k - 1) for c in _binom_poly(-1, k - 2)]
    hm = _padd(_padd(_binom_poly(-1, k - 1), _binom_poly(-k - 1, k - 1), -1), [Fraction(1)])
    gaps = [_padd(total, _pmul(n_poly, star), -1), _padd(total, _pmul(n_poly, hm), -1)]
    for g in gaps:
        if g[-1] <= 0:
            raise InternalConsistencyError("gap polynomial does not grow")
    stop = max(int(_root_bound(g)) + 1 for g in gaps)
    last_bad = 2 * k
    for n in range(2 * k + 1, max(stop, 2 * k + 1) + 1):
        lhs = n * max(Fraction(binom(n - 1, k - 2), k - 1), Fraction(hilton_milner(n, k)))
        if not lhs < binom(n, k):
            last_bad = n
        elif any(_peval(g, n) <= 0 for g in gaps):
            raise InternalConsistencyError("polynomial form disagrees with the direct count")
    return last_bad + 1


# -- EKR partitions and Wilson's range -------------------------------------


@dataclass(frozen=True)
class EKRPartitionCheck:
    lhs: Fraction
    rhs: Fraction
    holds: bool | None
    regime: str


def ekr_partition_inequality(n: int, k: int, t: int) -> EKRPartitionCheck:
    """Compare C(n,t)/C(k,t) with C(n,2t-k)/C(t,2t-k).

    An EKR partition of the k-sets needs C(n,t)/C(k,t) parts.  Disjoint EKR
    families have kernels meeting in fewer than 2t-k points, and there are at
    most C(n,2t-k)/C(t,2t-k) such kernels.  When the first number is larger no
    EKR partition exists.  For k >= 2t any two kernels lie in a common k-set,
    so only the regime is reported.
    """
    if not 0 < t < k:
        raise ValueError(f"needs 0 < t < k, got t={t}, k={k}")
    if k >= 2 * t:
        return EKRPartitionCheck(Fraction(binom(n, t), binom(k, t)), Fraction(0), None,
                                 "kernels always intersect")
    lhs = Fraction(binom(n, t), binom(k, t))
    rhs = Fraction(binom(n, 2 * t - k), binom(t, 2 * t - k))
    regime = "theorem" if n >= 2 * k else "outside theorem range"
    return EKRPartitionCheck(lhs, rhs, lhs > rhs, regime)


def wilson_regime(n: int, k: int, t: int) -> bool:
    """n > (t+1)(k-t+1): every maximum coclique of Delta_t is an EKR family."""
    if not 0 < t < k:
        raise ValueError(f"needs 0 < t < k, got t={t}, k={k}")
    return n > (t + 1) * (k - t + 1)
