import cmath
import json
import math

import numpy as np
import pytest

from seqprod.cli import main
from seqprod.matrix_core import matrix_from_json, matrix_to_json


def write(tmp_path, name, M, kind=None):
    obj = matrix_to_json(np.asarray(M, dtype=complex))
    if kind:
        obj["kind"] = kind
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_verify_properties_standard(capsys):
    code, out = run(["verify-properties", "--product", "standard", "--dims", "2,3,4",
                     "--trials", "100", "--seed", "7"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] and payload["config"]["seed"] == 7
    rep = payload["reports"][0]
    assert set(rep) >= {"product", "dim", "trials", "seed", "tolerance", "results"}
    assert [r["property"] for r in rep["results"]] == ["S1", "S2", "S3", "S4a", "S4b", "S5a", "S5b"]


def test_verify_properties_linear_fails(capsys):
    code, out = run(["verify-properties", "--product", "family:linear:1", "--dims", "2",
                     "--trials", "1000"], capsys)
    assert code == 1
    s4b = next(r for r in json.loads(out)["reports"][0]["results"] if r["property"] == "S4b")
    assert s4b["fail"] >= 1 and s4b["counterexample"]["inputs"]["C"]["dim"] == 2


@pytest.mark.parametrize("argv", [
    ["verify-properties", "--product", "bogus"],
    ["verify-properties", "--product", "standard", "--dims", "0"],
    ["verify-properties", "--product", "standard", "--trials", "0"],
    ["verify-properties", "--product", "standard", "--tol", "-1"],
    ["verify-theorem1", "--family", "cos:1"],
    ["nonsense"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert "grammar" not in capsys.readouterr().out


def test_bad_product_message_names_grammar(capsys):
    main(["verify-properties", "--product", "bogus"])
    assert "standard | twisted | family:" in capsys.readouterr().err


def test_verify_theorem1(capsys):
    code, out = run(["verify-theorem1", "--family", "log:1", "--dims", "2,3", "--trials", "20"],
                    capsys)
    assert code == 0
    assert [r["property"] for r in json.loads(out)["reports"][0]["results"]] == [
        "COND_I", "COND_II", "LEMMA11"]
    assert main(["verify-theorem1", "--family", "linear:1", "--dims", "2", "--trials", "20"]) == 1


def test_witness(tmp_path, capsys):
    eff = write(tmp_path, "a.json", np.diag([0.25, 1.0]))
    out_path = tmp_path / "w.json"
    assert main(["witness", "--effect", eff, "--family", "log:1", "--trials", "20",
                 "--out", str(out_path)]) == 0
    w = json.loads(out_path.read_text())
    U = matrix_from_json(w["U"])
    assert np.abs(U - np.diag([cmath.exp(-1j * math.log(4)), 1])).max() <= 1e-15
    assert w["verification"]["pass"]
    code, out = run(["witness", "--effect", eff, "--family", "zero"], capsys)
    assert code == 0 and np.array_equal(matrix_from_json(json.loads(out)["U"]), np.eye(2))
    bad = write(tmp_path, "bad.json", np.diag([1.5, 0.0]))
    assert main(["witness", "--effect", bad, "--family", "zero"]) == 2
    assert "1.5" in capsys.readouterr().err


def test_seqprod(tmp_path, capsys):
    a = write(tmp_path, "a.json", np.diag([0.25, 1.0]))
    b = write(tmp_path, "b.json", np.full((2, 2), 0.5))
    eye = write(tmp_path, "i.json", np.eye(2))
    code, out = run(["seqprod", "--a", eye, "--b", b], capsys)
    assert code == 0 and np.allclose(matrix_from_json(json.loads(out)), np.full((2, 2), 0.5))
    code, out = run(["seqprod", "--a", a, "--b", b, "--product", "standard"], capsys)
    assert np.allclose(matrix_from_json(json.loads(out)), [[1 / 8, 1 / 4], [1 / 4, 1 / 2]],
                       atol=1e-15)
    code, out = run(["seqprod", "--a", a, "--b", b, "--product", "twisted"], capsys)
    M = matrix_from_json(json.loads(out))
    e = cmath.exp(1j * math.log(4))
    assert M[0, 1] == pytest.approx(0.25 / e, abs=1e-15)
    assert M[1, 0] == pytest.approx(0.25 * e, abs=1e-15)


def test_measure(tmp_path, capsys):
    W = write(tmp_path, "w.json", np.diag([0.5, 0.5]), kind="density")
    P = write(tmp_path, "p.json", np.diag([1.0, 0.0]))
    code, out = run(["measure", "--state", W, "--effect", P], capsys)
    res = json.loads(out)
    assert code == 0 and res["probability"] == pytest.approx(0.5)
    assert np.allclose(matrix_from_json(res["post_state"]), np.diag([1, 0]))
    eye = write(tmp_path, "i.json", np.eye(2))
    res = json.loads(run(["measure", "--state", W, "--effect", eye], capsys)[1])
    assert res["probability"] == pytest.approx(1.0)
    assert np.allclose(matrix_from_json(res["post_state"]), np.diag([0.5, 0.5]))
    zero = write(tmp_path, "z.json", np.zeros((2, 2)))
    res = json.loads(run(["measure", "--state", W, "--effect", zero], capsys)[1])
    assert res["probability"] == 0 and res["post_state"] is None and "note" in res


def test_text_format_and_determinism(tmp_path, capsys):
    args = ["verify-properties", "--product", "twisted", "--dims", "2,3", "--trials", "15"]
    main(args + ["--out", str(tmp_path / "a.json")])
    main(args + ["--out", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    code, out = run(args + ["--format", "text"], capsys)
    assert code == 0 and "S4b" in out and "PASS" in out
