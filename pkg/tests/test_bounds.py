import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jscheme.bounds import (
    UnsupportedParametersError,
    clique_coclique_check,
    double_count_bound_13,
    ekr_partition_inequality,
    equality_filter,
    hilton_milner,
    inner_distribution,
    nbound_check,
    nbound_value,
    ratio_bound,
    ratio_bound_of,
    ratio_divisibility_scan,
    separation_threshold_1k,
    wilson_regime,
)
from jscheme.combinat import SchemeParams, all_masks
from jscheme.designs import builtin_design, ekr_coclique
from jscheme.graphs import VertexSet, build_graph, delta, phi
from jscheme.scheme import eigen_matrices


def test_inner_distribution_examples():
    p = SchemeParams(10, 4)
    full = inner_distribution(VertexSet.from_ranks(p, range(p.v)))
    assert full.a == eigen_matrices(p).valencies
    assert full.transform == (p.v, 0, 0, 0, 0)
    one = inner_distribution(VertexSet.from_ranks(p, [17]))
    assert one.a == (1, 0, 0, 0, 0)
    fano = inner_distribution(builtin_design("fano").vertex_set())
    assert fano.a == (1, 0, 6, 0)


def _pair_count_oracle(p, ranks):
    masks = [int(all_masks(p)[r]) for r in ranks]
    counts = [0] * (p.d + 1)
    for a in masks:
        for b in masks:
            counts[p.k - (a & b).bit_count()] += 1
    return tuple(Fraction(c, len(masks)) for c in counts)


@given(st.data())
def test_delsarte_nonnegativity_random_subsets(data):
    n = data.draw(st.integers(4, 12))
    k = data.draw(st.integers(2, min(5, n - 1)))
    p = SchemeParams(n, k)
    ranks = data.draw(st.sets(st.integers(0, p.v - 1), min_size=1, max_size=min(p.v, 60)))
    dist = inner_distribution(VertexSet.from_ranks(p, ranks))
    assert dist.a == _pair_count_oracle(p, ranks)
    assert all(c >= 0 for c in dist.transform)
    assert dist.transform[0] == len(ranks)


def test_sqs8_with_ekr_partner():
    p = SchemeParams(8, 4)
    g = build_graph(p, delta(3, p))
    blocks = builtin_design("sqs8").vertex_set()
    ekr = ekr_coclique(8, 4, (1, 2, 3))
    chk = clique_coclique_check(g, blocks, ekr)
    assert chk.product == 14 * 5 == 70 and chk.equality and chk.schur_ok


def test_s2_4_13_with_pair_kernel():
    p = SchemeParams(13, 4)
    g = build_graph(p, phi(2, p))
    blocks = builtin_design("s2_4_13").vertex_set()
    pairs = ekr_coclique(13, 4, (1, 2))
    chk = clique_coclique_check(g, pairs, blocks)
    assert chk.product == 715 and chk.equality and chk.schur_ok


def test_singletons_and_errors():
    p = SchemeParams(9, 4)
    g = build_graph(p, {1, 3})
    x = VertexSet.from_ranks(p, [0])
    chk = clique_coclique_check(g, x, x)
    assert chk.product == 1 and not chk.equality
    # the first five ranks lie in one 5-set, so they pairwise meet in 3 points
    g3 = build_graph(p, {3})
    with pytest.raises(ValueError, match="not a clique"):
        clique_coclique_check(g3, VertexSet.from_ranks(p, range(5)), x)
    with pytest.raises(ValueError, match="not a coclique"):
        clique_coclique_check(g, x, VertexSet.from_ranks(p, range(5)))


def test_ratio_bound_examples():
    r = ratio_bound(build_graph(SchemeParams(10, 4), {2}))
    assert (r.degree, r.tau, r.omega_if_equality, r.divisibility_ok) == (90, -9, 11, True)
    r9 = ratio_bound_of(SchemeParams(9, 4), {2})
    assert r9.degree == 60 and r9.tau == -8 and not r9.divisibility_ok
    assert ratio_bound_of(SchemeParams(29, 4), {3}).omega_if_equality == 21


def test_ratio_bound_is_an_upper_bound():
    for n, k, cs, alpha in [(9, 4, {1, 3}, 14), (10, 4, {1, 4}, 15), (10, 4, {3, 4}, 7)]:
        assert alpha <= ratio_bound_of(SchemeParams(n, k), cs).alpha_bound


def test_ratio_scans():
    assert ratio_divisibility_scan(4, {2}, range(11, 61)) == [11, 12, 14, 20]
    assert ratio_divisibility_scan(4, {3}, range(13, 61)) == [13, 14, 17, 19, 29, 49]
    assert ratio_divisibility_scan(4, {3}, [9, 11]) == []


def test_equality_filter_13_branch():
    for n in (18, 20, 22):
        for f in equality_filter(n, 4, {1, 3}):
            assert 3 * f.x == (n - 1) * (n - 3) and 8 * f.y == n * (n - 2)
            assert all(v[2] == n - 4 for v in f.v_vertices)
    assert equality_filter(20, 4, {1, 3}) == []


def test_equality_filter_14_branch_ii():
    assert all(f.pattern[0] != "v" for f in equality_filter(17, 4, {1, 4}))


def test_equality_filter_finds_known_equality():
    xs = {(f.x, f.y) for f in equality_filter(9, 4, {1, 3})}
    assert (9, 14) in xs
    assert (7, 30) in {(f.x, f.y) for f in equality_filter(10, 4, {1})}


def test_equality_filter_errors():
    with pytest.raises(ValueError):
        equality_filter(10, 4, {1, 2, 3, 4})
    with pytest.raises(UnsupportedParametersError):
        equality_filter(12, 5, {1})


def test_nbound():
    assert nbound_value(10, 3) == 10
    kernel = [(1, 2, x) for x in range(3, 11)]
    rep = nbound_check(10, kernel)
    assert rep.size == 8 and rep.within_bound and rep.kinds == ("kernel",)
    cover = list(itertools.combinations((1, 2, 3, 4), 3))
    assert nbound_check(10, cover).kinds == ("cover",)
    with pytest.raises(ValueError):
        nbound_check(10, [(1, 2, 3), (3, 4, 5)])


def test_double_count():
    assert double_count_bound_13(16) == 60 < Fraction(15 * 13, 3)
    assert double_count_bound_13(17) == 68 < Fraction(16 * 14, 3)
    assert double_count_bound_13(12) == 33 == Fraction(11 * 9, 3)


def test_hilton_milner():
    assert hilton_milner(10, 4) == 75
    assert hilton_milner(46, 4) == 3531
    for k in range(2, 7):
        assert hilton_milner(2 * k + 1, k) == math.comb(2 * k, k - 1) - math.comb(k, k - 1) + 1


def test_threshold():
    assert separation_threshold_1k(4) == 46
    assert 45 * 3365 == 151425 > math.comb(45, 4) == 148995
    assert 46 * hilton_milner(46, 4) == 162426 < math.comb(46, 4) == 163185
    assert hilton_milner(45, 4) == 3365


@pytest.mark.parametrize("k", [3, 4, 5])
def test_threshold_scan_oracle(k):
    N = separation_threshold_1k(k)

    def lhs(n):
        return n * max(Fraction(math.comb(n - 1, k - 2), k - 1), Fraction(hilton_milner(n, k)))

    assert not lhs(N - 1) < math.comb(N - 1, k)
    assert all(lhs(n) < math.comb(n, k) for n in range(N, N + 101))


def test_ekr_partition_inequality():
    r = ekr_partition_inequality(9, 4, 3)
    assert (r.lhs, r.rhs, r.holds) == (21, 12, True)
    r = ekr_partition_inequality(12, 5, 4)
    assert (r.lhs, r.rhs, r.holds) == (99, 55, True)
    assert ekr_partition_inequality(20, 6, 3).regime == "kernels always intersect"


def test_wilson_regime():
    assert wilson_regime(10, 4, 3) and wilson_regime(9, 4, 3)
    assert not wilson_regime(8, 4, 3)
