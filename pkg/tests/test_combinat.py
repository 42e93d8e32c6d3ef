import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jscheme.combinat import (
    KSet,
    SchemeParams,
    all_masks,
    binom,
    divisibility_conditions,
    intersection_class,
    k4_residue_class,
    rank,
    rank_mask,
    unrank,
    unrank_mask,
)


def test_binom_examples():
    assert binom(10, 4) == 210
    assert binom(9, 0) == 1
    assert binom(5, 7) == 0
    assert binom(5, -1) == 0


@given(st.integers(0, 200), st.integers(-3, 210))
def test_binom_matches_math_comb(n, r):
    assert binom(n, r) == (math.comb(n, r) if r >= 0 else 0)


def test_binom_is_exact_for_large_arguments():
    assert binom(300, 150) == math.comb(300, 150)


def test_params():
    p = SchemeParams(10, 4)
    assert p.v == 210 and p.d == 4
    assert SchemeParams(7, 5).d == 2
    with pytest.raises(ValueError):
        SchemeParams(4, 4)
    with pytest.raises(ValueError):
        SchemeParams(5, 0)


def test_rank_examples():
    assert rank(KSet.of(10, [1, 2, 3, 4])) == 0
    assert rank(KSet.of(10, [7, 8, 9, 10])) == 209
    assert rank(KSet.of(10, [7, 8, 9, 10])) == binom(6, 1) + binom(7, 2) + binom(8, 3) + binom(9, 4)
    assert unrank(0, SchemeParams(10, 4)).elements == (1, 2, 3, 4)


def _colex_oracle(n, k):
    combos = itertools.combinations(range(1, n + 1), k)
    return sorted(combos, key=lambda c: tuple(reversed(c)))


@pytest.mark.parametrize("n", range(2, 15))
def test_rank_unrank_bijection_exhaustive(n):
    for k in range(1, min(n, 6)):
        order = _colex_oracle(n, k)
        masks = all_masks(SchemeParams(n, k))
        assert len(order) == len(masks) == binom(n, k)
        for r, combo in enumerate(order):
            m = unrank_mask(r, n, k)
            assert KSet(n, m).elements == combo
            assert rank_mask(m) == r
            assert int(masks[r]) == m


def test_unrank_out_of_range():
    with pytest.raises(ValueError):
        unrank(210, SchemeParams(10, 4))


def test_kset_validation():
    with pytest.raises(ValueError):
        KSet.of(5, [1, 1, 2])
    with pytest.raises(ValueError):
        KSet.of(5, [1, 6])


def test_intersection_class_examples():
    a = KSet.of(10, [1, 2, 3, 4])
    assert intersection_class(a, a) == 0
    assert intersection_class(a, KSet.of(10, [1, 5, 6, 7])) == 3
    assert intersection_class(KSet.of(6, [1, 2, 3]), KSet.of(6, [4, 5, 6])) == 3
    with pytest.raises(ValueError):
        intersection_class(a, KSet.of(11, [1, 2, 3, 4]))


@given(st.data())
def test_intersection_class_symmetric_and_in_range(data):
    n = data.draw(st.integers(3, 20))
    k = data.draw(st.integers(1, n - 1))
    a = data.draw(st.sets(st.integers(1, n), min_size=k, max_size=k))
    b = data.draw(st.sets(st.integers(1, n), min_size=k, max_size=k))
    A, B = KSet.of(n, a), KSet.of(n, b)
    j = intersection_class(A, B)
    assert j == intersection_class(B, A) == k - len(a & b)
    assert 0 <= j <= k


def test_divisibility_examples():
    assert divisibility_conditions(2, 4, 13)[0]
    ok, checks = divisibility_conditions(3, 4, 9)
    assert not ok
    first = next(c for c in checks if c.remainder)
    assert first.i == 1
    assert checks[1].divisor == 3 and checks[1].dividend == 28
    assert divisibility_conditions(1, 4, 8)[0]


@given(st.integers(1, 4), st.integers(2, 6), st.integers(3, 40))
def test_divisibility_matches_direct_formula(t, k, n):
    if not 0 < t < k < n:
        return
    ok, _ = divisibility_conditions(t, k, n)
    assert ok == all(math.comb(n - i, t - i) % math.comb(k - i, t - i) == 0 for i in range(t))


def test_k4_residue_examples():
    # S(3,4,12) fails at i=1: 3 does not divide C(11,2) = 55
    assert k4_residue_class(12) == (frozenset({1}), True)
    assert k4_residue_class(13) == (frozenset({2}), True)
    assert k4_residue_class(15) == (frozenset(), False)


def test_k4_residue_matches_mod_12_list():
    for n in range(10, 200):
        assert k4_residue_class(n)[1] == (n % 12 in {0, 1, 2, 4, 8, 10})


def test_all_masks_sorted_and_readonly():
    masks = all_masks(SchemeParams(9, 4))
    assert np.all(np.diff(masks.astype(np.int64)) > 0)
    assert not masks.flags.writeable
