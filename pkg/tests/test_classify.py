import pytest

from jscheme.bounds import clique_coclique_check
from jscheme.classify import (
    REFERENCE_K4_TABLES,
    classify_separation,
    projective_plane_conjecture_check,
    synchronization_evidence,
    table_cell,
)
from jscheme.combinat import SchemeParams
from jscheme.graphs import build_graph


@pytest.fixture(scope="module")
def reports():
    return {n: classify_separation(n, 4) for n in range(9, 17)}


def _check_witnesses(rep):
    p = SchemeParams(rep.n, rep.k)
    for r in rep.per_class:
        if r.status == "equality":
            chk = clique_coclique_check(build_graph(p, r.classes), r.clique, r.coclique)
            assert chk.equality and chk.schur_ok


def test_n9_via_13(reports):
    rep = reports[9]
    assert rep.verdict == "non-separating"
    assert rep.witness_classes == (1, 3)
    rec = {r.classes: r for r in rep.per_class}[(1, 3)]
    assert (len(rec.clique), len(rec.coclique)) == (9, 14)


def test_n10_steiner_witness(reports):
    rep = reports[10]
    assert rep.verdict == "non-separating"
    rec = {r.classes: r for r in rep.per_class}[(2, 3, 4)]
    assert rec.status == "equality" and len(rec.clique) == 30 and len(rec.coclique) == 7


@pytest.mark.parametrize("n", range(10, 17))
def test_k4_verdicts_follow_residues(reports, n):
    rep = reports[n]
    want = "non-separating" if n % 12 in {0, 1, 2, 4, 8, 10} else "separating"
    assert rep.verdict == want
    _check_witnesses(rep)


@pytest.mark.parametrize("n", range(9, 17))
def test_complement_rows_transpose(reports, n):
    rows = {r.classes: r for r in reports[n].per_class}
    d = 4
    for cls, r in rows.items():
        comp = tuple(j for j in range(1, d + 1) if j not in cls)
        other = rows[comp]
        assert r.omega == other.alpha and r.alpha == other.omega
        assert r.status == other.status
    assert len(rows) == 2 ** d - 2


def test_separating_rows_carry_certificates(reports):
    for n in (11, 15):
        for r in reports[n].per_class:
            assert r.status == "separated" and r.certificate


def test_json_schema(reports):
    js = reports[10].to_json()
    assert {"n", "k", "v", "verdict", "per_class", "sync_evidence"} <= js.keys()
    row = js["per_class"][0]
    assert {"classes", "omega", "alpha", "ratio", "filter"} <= row.keys()
    assert {"value", "proved"} <= row["omega"].keys()
    assert {"bound", "divides"} <= row["ratio"].keys()
    assert isinstance(row["ratio"]["bound"], str)
    masks = [sum(1 << (j - 1) for j in r["classes"]) for r in js["per_class"]]
    assert masks == sorted(masks)


def test_synchronization_evidence():
    assert synchronization_evidence(12, 4)["status"] == "non-synchronizing"
    ten = synchronization_evidence(10, 4)
    assert ten["status"] == "synchronizing (cited)"
    assert all(e["wilson_regime"] == (10 > (e["t"] + 1) * (4 - e["t"] + 1)) for e in ten["per_t"])
    seven = synchronization_evidence(7, 3)
    assert seven["status"] == "non-synchronizing" and "k3n7" in seven["reason"]
    assert synchronization_evidence(13, 4)["status"] == "non-synchronizing"
    assert synchronization_evidence(11, 4)["status"] == "undecided"


def test_plane_q2_has_other_cocliques():
    r = projective_plane_conjecture_check(2)
    assert r.max_coclique_size == 5 and r.proved and r.exhaustive
    assert not r.all_pair_kernel and r.pair_kernel_count == 21 < r.count
    assert r.conjecture_holds is False


def test_plane_q3():
    r = projective_plane_conjecture_check(3)
    assert r.max_coclique_size == 55 and r.proved
    assert r.exhaustive and r.all_pair_kernel and r.count == 78
    assert r.conjecture_holds is True


def test_table_ratio_cells():
    for table in ("I={1,3,4}", "I={1,2,4}"):
        for n, ref in REFERENCE_K4_TABLES[table]["ratio"].items():
            assert table_cell(table, n, "ratio").value == ref


def test_table_cell_duplicate_row():
    c = table_cell("I={1,3}", 13, "omega", budget=60)
    assert c.value == 13 and c.proved and c.status == "match"


def test_table_mismatch_is_reported():
    c = table_cell("I={1,4}", 12, "alpha", budget=60)
    assert c.value == 17 and c.proved and c.status == "mismatch"
