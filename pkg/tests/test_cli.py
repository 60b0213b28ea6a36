import json

import pytest

from qutrit_mub import tomography
from qutrit_mub.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mcs_list_census(capsys):
    code, out, _ = run(capsys, "mcs", "list", "--n", "2")
    assert code == 0
    assert out.splitlines()[-1] == "40 MCS's in total: 16 S, 24 B"


def test_mcs_list_json_filter(capsys):
    code, out, _ = run(capsys, "mcs", "list", "--n", "3", "--class", "G", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "qutrit-mub/1"
    assert doc["total"] == 1120 and len(doc["mcs"]) == 768
    assert doc["census"] == {"S": 64, "SB": 288, "G": 768}


def test_partition_enumerate(capsys):
    code, out, _ = run(capsys, "partition", "enumerate", "--n", "2")
    assert code == 0
    assert out.strip() == "36 partitions, all with structure 4S+6B"
    code, out, _ = run(capsys, "partition", "enumerate", "--n", "1", "--json")
    assert json.loads(out)["count"] == 1


def test_partition_find(capsys):
    code, out, _ = run(capsys, "partition", "find", "--n", "3", "--separable", "4", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["found"] and doc["budget_ok"]
    assert doc["structure"]["S"] == 4


def test_partition_find_node_limit(capsys):
    code, _, err = run(capsys, "partition", "find", "--separable", "0", "--node-limit", "2")
    assert code == 1 and "search stopped" in err


def test_partition_find_rejects_other_n(capsys):
    code, _, err = run(capsys, "partition", "find", "--n", "2", "--separable", "0")
    assert code == 2 and "--n 3" in err


def test_verify_one_qutrit(capsys):
    code, out, _ = run(capsys, "verify", "all", "--n", "1")
    assert code == 0
    assert "[FAIL]" not in out and out.splitlines()[-1].endswith("checks pass")


def test_verify_two_qutrits_fails(capsys):
    code, out, _ = run(capsys, "verify", "all", "--n", "2", "--json")
    doc = json.loads(out)
    assert code == 1 and not doc["ok"]
    failing = [e for e in doc["entries"] if not e["ok"]]
    assert len(failing) == 2


def test_basis_build_json(capsys):
    code, out, _ = run(capsys, "basis", "build", "--generators", "ZX,VZ", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["class"] == "B"
    assert doc["generators"] == ["ZX", "VZ"]
    assert len(doc["states"]) == 9 and len(doc["states"][0]) == 9


def test_basis_build_text(capsys):
    code, out, _ = run(capsys, "basis", "build", "--generators", "Z2ZI Z2IZ XXX")
    assert code == 0
    assert out.splitlines()[0].endswith("of class G")
    assert len(out.splitlines()) == 28


@pytest.mark.parametrize("gens", ["ZI,XI", "ZQ,VZ", "ZX", "ZX,VZ,ZI"])
def test_basis_build_invalid(capsys, gens):
    code, _, err = run(capsys, "basis", "build", "--generators", gens)
    assert code == 2 and "invalid input" in err


def test_state_bell(capsys):
    code, out, _ = run(capsys, "state", "bell", "0", "0", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["basis"] == "(ZX,VZ)"
    assert len(doc["expansion"]["terms"]) == 3
    assert doc["expansion"]["product_basis"] == "S(Z,X)"


def test_state_ghz_text(capsys):
    code, out, _ = run(capsys, "state", "ghz", "0", "0", "0")
    assert code == 0
    assert "3 terms" in out
    assert "|0,0,0>" in out and "|2,2,2>" in out


def test_state_aharonov(capsys):
    code, out, _ = run(capsys, "state", "aharonov", "--json")
    doc = json.loads(out)
    assert doc["basis"] is None and doc["norm2"] == "6"
    assert len(doc["expansion"]["terms"]) == 6


def test_state_sb_default_basis(capsys):
    code, out, _ = run(capsys, "state", "sb", "2", "1", "0", "0", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["expansion"]["product_basis"] == "S(Z,Z,X)"
    assert len(doc["expansion"]["terms"]) == 3


@pytest.mark.parametrize("argv", [
    ("state", "bell", "0"),
    ("state", "ghz", "0", "0", "3"),
    ("state", "nope"),
    ("frobnicate",),
    ("mcs", "list", "--n", "4"),
    ("--threads", "0", "mcs", "list", "--n", "1"),
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_tomography_roundtrip(capsys, tmp_path):
    path = tmp_path / "probs.csv"
    code, out, _ = run(capsys, "tomography", "roundtrip", "--n", "2", "--seed", "3",
                       "--csv", str(path), "--json")
    doc = json.loads(out)
    assert code == 0 and doc["exact"]
    assert len(doc["probabilities"]) == 10
    table = tomography.ProbTable.from_csv(path.read_text())
    assert [[str(x) for x in row] for row in table.rows] == doc["probabilities"]


def test_tomography_text(capsys):
    code, out, _ = run(capsys, "tomography", "roundtrip", "--n", "1")
    assert code == 0 and out.splitlines()[-1] == "exact round trip"
