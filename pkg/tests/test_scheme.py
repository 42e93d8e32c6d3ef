from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jscheme.combinat import SchemeParams, all_masks, binom
from jscheme.scheme import (
    eberlein,
    eigen_matrices,
    k4_closed_form_P,
    k4_closed_form_Q,
    verify_k4_closed_forms,
)


def test_eberlein_examples():
    assert eberlein(1, 0, SchemeParams(10, 4)) == 24
    for n in (9, 12, 30):
        assert eberlein(1, 0, SchemeParams(n, 4)) == 4 * (n - 4)
        assert eberlein(2, 4, SchemeParams(n, 4)) == 6
        assert all(eberlein(0, x, SchemeParams(n, 4)) == 1 for x in range(5))


def test_eberlein_range():
    with pytest.raises(ValueError):
        eberlein(5, 0, SchemeParams(10, 4))


def test_n10_k4_rows():
    em = eigen_matrices(SchemeParams(10, 4))
    assert em.Q[0] == (1, 9, 35, 75, 90)
    assert sum(em.Q[0]) == 210
    assert tuple(row[2] for row in em.P) == (90, 15, -9, -6, 6)
    assert all(isinstance(x, Fraction) for row in em.Q for x in row)


@pytest.mark.parametrize("k", range(2, 7))
def test_last_row_alternating_binomials(k):
    for n in range(2 * k, 2 * k + 6):
        P = eigen_matrices(SchemeParams(n, k)).P
        assert list(P[k]) == [(-1) ** j * binom(k, j) for j in range(k + 1)]


@given(st.integers(2, 6).flatmap(lambda k: st.tuples(st.just(k), st.integers(k + 1, 30))))
def test_structural_identities(kn):
    k, n = kn
    p = SchemeParams(n, k)
    em = eigen_matrices(p)
    d, v = p.d, p.v
    prod = [[sum(em.P[i][t] * em.Q[t][j] for t in range(d + 1)) for j in range(d + 1)] for i in range(d + 1)]
    assert prod == [[v if i == j else 0 for j in range(d + 1)] for i in range(d + 1)]
    assert sum(em.P[0]) == v
    assert all(sum(em.P[i]) == 0 for i in range(1, d + 1))
    assert all(m > 0 for m in em.multiplicities) and sum(em.multiplicities) == v
    assert em.valencies == tuple(binom(k, j) * binom(n - k, j) for j in range(d + 1))


@pytest.mark.parametrize("n,k", [(6, 2), (7, 3), (8, 3), (8, 4), (9, 4), (7, 5)])
def test_eigenvalues_against_numpy(n, k):
    """The spectrum of each class matrix is column j of P with multiplicities Q[0]."""
    p = SchemeParams(n, k)
    masks = [int(m) for m in all_masks(p)]
    inter = np.array([[(a & b).bit_count() for b in masks] for a in masks])
    em = eigen_matrices(p)
    for j in range(1, p.d + 1):
        A = (inter == k - j).astype(float)
        got = Counter(int(round(x)) for x in np.linalg.eigvalsh(A))
        want = Counter()
        for i in range(p.d + 1):
            want[em.P[i][j]] += int(em.multiplicities[i])
        assert got == want


@pytest.mark.parametrize("n", range(8, 61))
def test_k4_closed_forms(n):
    assert verify_k4_closed_forms(n)


def test_k4_closed_forms_are_independent_of_eberlein():
    # spot values of the displayed forms at n = 10
    P = k4_closed_form_P(10)
    Q = k4_closed_form_Q(10)
    assert P[0] == [1, 24, 90, 80, 15]
    assert Q[1][1] == Fraction(21, 4)
