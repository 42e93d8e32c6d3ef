import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jscheme.combinat import SchemeParams, all_masks
from jscheme.graphs import (
    ClassSet,
    ResourceError,
    VertexSet,
    build_graph,
    complement,
    delta,
    phi,
    spectrum,
)
from jscheme.scheme import eigen_matrices


def test_delta2_degree():
    g = build_graph(SchemeParams(10, 4), delta(2, SchemeParams(10, 4)))
    assert g.classes.members == {3, 4}
    assert g.degree == 80 + 15 == 95


def test_gamma2_spectrum():
    g = build_graph(SchemeParams(10, 4), {2})
    assert g.eigenvalues == (90, 15, -9, -6, 6)
    assert g.tau == -9


def test_complete_graph():
    p = SchemeParams(8, 4)
    g = build_graph(p, {1, 2, 3, 4})
    assert g.degree == p.v - 1
    assert g.trivial


def test_complement_relations():
    p = SchemeParams(10, 4)
    for t in (1, 2, 3):
        assert complement(build_graph(p, delta(t, p))).classes == phi(t, p)
    g = build_graph(p, {2})
    assert complement(g).classes.members == {1, 3, 4}
    gg = complement(complement(g))
    assert gg.classes == g.classes
    assert np.array_equal(gg.adjacency, g.adjacency)


@pytest.mark.parametrize("n,k,classes", [(9, 4, {1, 3}), (8, 3, {2}), (10, 4, {2, 4}), (7, 5, {1})])
def test_adjacency_matches_intersection_class(n, k, classes):
    p = SchemeParams(n, k)
    g = build_graph(p, classes)
    masks = [int(m) for m in all_masks(p)]
    rows = g.rows
    for r, a in enumerate(masks):
        for s, b in enumerate(masks):
            assert bool(rows[r] >> s & 1) == (r != s and k - (a & b).bit_count() in classes)
    deg = {int(np.bitwise_count(row).sum()) for row in g.adjacency}
    assert deg == {g.degree}


@given(st.data())
def test_trace_zero(data):
    k = data.draw(st.integers(2, 5))
    n = data.draw(st.integers(2 * k, 20))
    p = SchemeParams(n, k)
    members = data.draw(st.sets(st.integers(1, p.d), min_size=1, max_size=p.d - 1))
    eig = spectrum(p, ClassSet.of(p.d, members))
    m = eigen_matrices(p).multiplicities
    assert sum(mi * lam for mi, lam in zip(m, eig)) == 0


def test_memory_budget():
    with pytest.raises(ResourceError):
        build_graph(SchemeParams(12, 4), {1}, memory_budget=1000)


def test_class_set_validation():
    with pytest.raises(ValueError):
        ClassSet.of(4, {5})
    with pytest.raises(ValueError):
        build_graph(SchemeParams(10, 4), ClassSet.of(3, {1}))
    cs = ClassSet.of(4, {1, 3})
    assert cs.complement().members == {2, 4}
    assert cs.bitmask == 5
    assert str(cs) == "{1,3}"


def test_vertex_set_round_trip():
    p = SchemeParams(9, 4)
    blocks = [(1, 2, 3, 4), (2, 5, 7, 9), (6, 7, 8, 9)]
    vs = VertexSet.from_blocks(p, blocks)
    assert sorted(vs.blocks) == sorted(blocks)
    assert VertexSet.from_ranks(p, vs.ranks) == vs
    assert len(vs | VertexSet.from_ranks(p, [0, 1])) == 4
    assert len(vs & VertexSet.from_ranks(p, [0])) == 1
    with pytest.raises(ValueError):
        VertexSet.from_blocks(p, [(1, 2, 3)])


def test_clique_coclique_predicates():
    p = SchemeParams(7, 3)
    g = build_graph(p, {2})
    lines = [(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (1, 5, 6), (2, 6, 7), (1, 3, 7)]
    assert g.is_clique(VertexSet.from_blocks(p, lines))
    assert not g.is_coclique(VertexSet.from_blocks(p, lines))
    assert g.label() == "Gamma_{2}(7,3)"
