import json

import pytest

from jscheme.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pq_json(capsys):
    code, out, _ = run(capsys, "pq", "--n", "10", "--k", "4", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["P"][0] == [1, 24, 90, 80, 15]
    assert data["Q"][1][1] == "21/4"


def test_graph_stats(capsys):
    code, out, _ = run(capsys, "graph", "--n", "10", "--k", "4", "--classes", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["degree"] == 90 and data["tau"] == -9


def test_clique_and_coclique(capsys):
    code, out, _ = run(capsys, "clique", "--n", "9", "--k", "4", "--classes", "1,3", "--json", "--witness")
    data = json.loads(out)
    assert code == 0 and data["size"] == 9 and data["proved_optimal"] and len(data["witness"]) == 9
    code, out, _ = run(capsys, "coclique", "--n", "9", "--k", "4", "--classes", "1,3", "--json")
    assert json.loads(out)["size"] == 14


def test_bounds_rational(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "9", "--k", "4", "--classes", "2", "--json")
    data = json.loads(out)
    assert data["omega_if_equality"] == "17/2" and data["divisibility_ok"] is False


def test_filter(capsys):
    code, out, _ = run(capsys, "filter", "--n", "18", "--k", "4", "--classes", "1,3")
    data = json.loads(out)
    assert code == 0 and [(f["x"], f["y"]) for f in data["feasible"]] == [(85, 36)]


def test_verify_fano(capsys, tmp_path):
    path = tmp_path / "fano.blocks"
    path.write_text("7 3 fano\n1 2 4\n2 3 5\n3 4 6\n4 5 7\n1 5 6\n2 6 7\n1 3 7\n")
    code, out, _ = run(capsys, "verify", "--file", str(path), "--t", "2")
    assert code == 0 and out.strip() == "Steiner: yes"


def test_witness_round_trip(capsys, tmp_path):
    code, _, _ = run(capsys, "witness", "--case", "k3n7", "--out", str(tmp_path))
    assert code == 0
    assert len(list(tmp_path.glob("colour_*.blocks"))) == 7
    code, out, _ = run(capsys, "verify", "--dir", str(tmp_path), "--json")
    assert code == 0 and json.loads(out)["verified"]
    # break the colouring: move a set into another colour class
    first, second = sorted(tmp_path.glob("colour_*.blocks"))[:2]
    lines = first.read_text().splitlines()
    first.write_text("\n".join(lines[:-1]) + "\n")
    second.write_text(second.read_text() + lines[-1] + "\n")
    code, out, _ = run(capsys, "verify", "--dir", str(tmp_path), "--json")
    assert code == 2 and not json.loads(out)["verified"]


def test_classify_exit_codes(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, _ = run(capsys, "classify", "--n", "11", "--k", "4", "--json", str(out_path))
    data = json.loads(out_path.read_text())
    assert code == 0 and data["verdict"] == "separating"


def test_plane(capsys):
    code, out, _ = run(capsys, "plane", "--q", "3", "--json")
    data = json.loads(out)
    assert code == 0 and data["conjecture_holds"] is True


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["pq", "--n", "4", "--k", "7"],
    ["pq", "--n", "x", "--k", "4"],
    ["clique", "--n", "10", "--k", "4", "--classes", "9"],
    ["clique", "--n", "10", "--k", "4", "--classes", "1,2,3,4"],
    ["witness", "--case", "k9n99"],
    ["verify", "--file", "/nonexistent.blocks", "--t", "2"],
    ["plane", "--q", "4"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 64 and err


def test_resource_error(capsys):
    code, _, err = run(capsys, "--memory-budget", "100", "graph", "--n", "12", "--k", "4",
                       "--classes", "1", "--stats")
    assert code == 1 and "budget" in err
