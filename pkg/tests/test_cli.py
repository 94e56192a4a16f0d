import json

import numpy as np
import pytest

from ttoconj.cli import run
from ttoconj.model_space import monomial_basis
from ttoconj.operators import OperatorMatrix
from ttoconj.serialize import operator_to_json


def invoke(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture
def diag121(tmp_path):
    p = tmp_path / "diag121.json"
    p.write_text(json.dumps(operator_to_json(OperatorMatrix(np.diag([1.0, 2.0, 1.0]), monomial_basis(3)))))
    return str(p)


def test_verify_zn(capsys):
    code, out = invoke(capsys, "verify", "--name", "zn", "--degree", "4", "--seed", "7")
    assert code == 0
    report = json.loads(out)
    assert report["name"] == "zn" and report["verdict"] == "pass"


def test_check_tto_identity(capsys, tmp_path):
    p = tmp_path / "eye.json"
    p.write_text(json.dumps(operator_to_json(OperatorMatrix(np.eye(3), monomial_basis(3)))))
    code, out = invoke(capsys, "check-tto", str(p))
    assert code == 0 and json.loads(out)["residual"] == 0


def test_diag121_witness(capsys, diag121):
    assert invoke(capsys, "check-csym", diag121)[0] == 0
    code, out = invoke(capsys, "check-tto", diag121)
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_inconclusive_band(capsys):
    T = np.eye(3, dtype=complex)
    T[1, 1] += 1e-6
    doc = json.dumps(operator_to_json(OperatorMatrix(T, monomial_basis(3))))
    code, out = invoke(capsys, "check-tto", doc)
    assert code == 3 and json.loads(out)["verdict"] == "inconclusive"


def test_generate_feeds_check(capsys, tmp_path):
    out_file = tmp_path / "g.json"
    code, out = invoke(capsys, "generate", "--kind", "chain_csym", "--degree", "4", "--seed", "2", "--out", str(out_file))
    assert code == 0
    assert json.loads(out_file.read_text()) == json.loads(out)
    assert invoke(capsys, "check-tto", str(out_file))[0] == 0
    assert invoke(capsys, "check-csym", str(out_file))[0] == 0


def test_compress(capsys, diag121):
    code, out = invoke(capsys, "compress", diag121, "--degree", "2")
    assert code == 0
    d = json.loads(out)
    assert d["entries"] == [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [2.0, 0.0]]]


def test_eval(capsys):
    doc = json.dumps({"blaschke": {"zeros": [[0, 0], [0.5, 0]]}, "z": [[0.2, 0], [0, 0]]})
    code, out = invoke(capsys, "eval", doc)
    d = json.loads(out)
    assert code == 0
    assert d["values"][0][0] == pytest.approx(-1 / 15)
    assert d["derivatives"][1][0] == pytest.approx(-0.5)


@pytest.mark.parametrize(
    "argv",
    [
        ("check-tto", "{not json"),
        ("check-tto", '{"entries": []}'),
        ("check-tto", "/nonexistent/file.json"),
        ("eval", '{"blaschke": {"zeros": [[1.5, 0]]}, "z": [[0, 0]]}'),
        ("verify", "--name", "zn", "--tol", "1e-3", "--tol-fail", "1e-5"),
        ("verify", "--name", "bogus"),
    ],
)
def test_invalid_input_exit_2(capsys, argv):
    code, out = invoke(capsys, *argv)
    assert code == 2
    assert "error" in json.loads(out.strip().splitlines()[-1])


def test_verify_reports_are_reproducible(capsys):
    a = invoke(capsys, "verify", "--name", "finite_blaschke", "--seed", "5", "--trials", "3")[1]
    b = invoke(capsys, "verify", "--name", "finite_blaschke", "--seed", "5", "--trials", "3")[1]
    assert a == b
