"""Eigenvalue matrices of the Johnson scheme J(n, k).

Orientation: ``P[i][j]`` is the eigenvalue of class matrix ``A_j`` on eigenspace
``i``.  Class ``j`` joins sets meeting in ``k - j`` points, so column 0 is the
identity and column ``k`` is the disjointness (Kneser) relation.  When
``n < 2k`` only classes ``0..n-k`` are non-empty and the matrices shrink to
``(n-k+1) x (n-k+1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinat import SchemeParams, binom

__all__ = [
    "InternalConsistencyError",
    "EigenMatrices",
    "eberlein",
    "eigen_matrices",
    "k4_closed_form_P",
    "k4_closed_form_Q",
    "verify_k4_closed_forms",
]


class InternalConsistencyError(AssertionError):
    """An identity that must hold by theory failed; this is a bug, not bad input."""


def eberlein(j: int, x: int, params: SchemeParams) -> int:
    n, k = params.n, params.k
    if not (0 <= j <= k and 0 <= x <= k):
        raise ValueError(f"need 0 <= j, x <= k={k}, got j={j}, x={x}")
    return sum(
        (-1) ** (j - t) * binom(k - t, j - t) * binom(k - x, t) * binom(n - k + t - x, t)
        for t in range(j + 1)
    )


Matrix = tuple[tuple, ...]


def _matmul(a: Matrix, b: Matrix) -> list[list]:
    size = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(size)) for j in range(size)] for i in range(size)]


@dataclass(frozen=True)
class EigenMatrices:
    params: SchemeParams
    P: Matrix  # exact ints
    Q: Matrix  # Fractions

    @property
    def valencies(self) -> tuple[int, ...]:
        return self.P[0]

    @property
    def multiplicities(self) -> tuple[Fraction, ...]:
        return self.Q[0]

    def check(self) -> None:
        """Raise InternalConsistencyError unless every structural identity holds."""
        p = self.params
        v, k, d = p.v, p.k, p.d
        prod = _matmul(self.P, self.Q)
        for i in range(d + 1):
            for j in range(d + 1):
                if prod[i][j] != (v if i == j else 0):
                    raise InternalConsistencyError(f"PQ != vI at ({i},{j}) for {p}")
        if sum(self.P[0]) != v or sum(self.Q[0]) != v:
            raise InternalConsistencyError(f"row 0 of P or Q does not sum to v for {p}")
        for i in range(1, d + 1):
            if sum(self.P[i]) != 0:
                raise InternalConsistencyError(f"row {i} of P does not sum to 0 for {p}")
        for j in range(d + 1):
            if self.P[0][j] != binom(k, j) * binom(p.n - k, j):
                raise InternalConsistencyError(f"valency {j} wrong for {p}")
            m = binom(p.n, j) - binom(p.n, j - 1)
            if self.Q[0][j] != m or m <= 0:
                raise InternalConsistencyError(f"multiplicity {j} wrong for {p}")


@lru_cache(maxsize=256)
def _eigen_matrices(n: int, k: int) -> EigenMatrices:
    params = SchemeParams(n, k)
    d = params.d
    P = tuple(tuple(eberlein(j, i, params) for j in range(d + 1)) for i in range(d + 1))
    # Q_i(j) = m_i / (C(k,j) C(n-k,j)) * E_j(i); row index j, column index i.
    Q = tuple(
        tuple(
            Fraction(binom(n, i) - binom(n, i - 1), binom(k, j) * binom(n - k, j)) * P[i][j]
            for i in range(d + 1)
        )
        for j in range(d + 1)
    )
    em = EigenMatrices(params, P, Q)
    em.check()
    return em


def eigen_matrices(params: SchemeParams) -> EigenMatrices:
    return _eigen_matrices(params.n, params.k)


# Closed forms for J(n,4), written out independently of the Eberlein sum.

def k4_closed_form_P(n: int) -> list[list[Fraction]]:
    N = Fraction(n)
    return [
        [1, 4 * (N - 4), 3 * (N - 5) * (N - 4), Fraction(2, 3) * (N - 6) * (N - 5) * (N - 4),
         Fraction(1, 24) * (N - 7) * (N - 6) * (N - 5) * (N - 4)],
        [1, 3 * N - 16, Fraction(3, 2) * (N - 8) * (N - 5), Fraction(1, 6) * (N - 16) * (N - 6) * (N - 5),
         -Fraction(1, 6) * (N - 7) * (N - 6) * (N - 5)],
        [1, 2 * (N - 7), Fraction(1, 2) * ((N - 21) * N + 92), -(N - 9) * (N - 6),
         Fraction(1, 2) * (N - 7) * (N - 6)],
        [1, N - 10, -3 * (N - 8), 3 * N - 22, 7 - N],
        [1, -4, 6, -4, 1],
    ]


def k4_closed_form_Q(n: int) -> list[list[Fraction]]:
    N = Fraction(n)
    return [
        [1, N - 1, Fraction(1, 2) * (N - 3) * N, Fraction(1, 6) * (N - 5) * (N - 1) * N,
         Fraction(1, 24) * (N - 7) * (N - 2) * (N - 1) * N],
        [1, Fraction(1, 4) * (3 * N - 7) - 3 / (N - 4), (N - 7) * (N - 3) * N / (4 * (N - 4)),
         (N - 10) * (N - 5) * (N - 1) * N / (24 * (N - 4)), -(N - 7) * (N - 2) * (N - 1) * N / (24 * (N - 4))],
        [1, (N - 8) * (N - 1) / (2 * (N - 4)), (N - 3) * N * ((N - 21) * N + 92) / (12 * (N - 5) * (N - 4)),
         -(N - 8) * (N - 1) * N / (6 * (N - 4)), (N - 7) * (N - 2) * (N - 1) * N / (12 * (N - 5) * (N - 4))],
        [1, (N - 16) * (N - 1) / (4 * (N - 4)), -3 * (N - 9) * (N - 3) * N / (4 * (N - 5) * (N - 4)),
         (N - 1) * N * (3 * N - 22) / (4 * (N - 6) * (N - 4)),
         -(N - 7) * (N - 2) * (N - 1) * N / (4 * (N - 6) * (N - 5) * (N - 4))],
        [1, -4 * (N - 1) / (N - 4), 6 * (N - 3) * N / ((N - 5) * (N - 4)), -4 * (N - 1) * N / ((N - 6) * (N - 4)),
         (N - 2) * (N - 1) * N / ((N - 6) * (N - 5) * (N - 4))],
    ]


def verify_k4_closed_forms(n: int) -> bool:
    """Compare eigen_matrices(n, 4) entrywise against the explicit 5x5 rational forms."""
    if n < 8:
        raise ValueError(f"closed forms need n >= 8, got {n}")
    em = eigen_matrices(SchemeParams(n, 4))
    cp, cq = k4_closed_form_P(n), k4_closed_form_Q(n)
    return all(
        em.P[i][j] == cp[i][j] and em.Q[i][j] == cq[i][j] for i in range(5) for j in range(5)
    )
