import json
import subprocess
import sys

import pytest

from g2flow.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), out


def test_catalog_lists_all(capsys):
    code, rep, _ = run_json(capsys, "catalog")
    assert code == 0
    assert len(rep["algebras"]) == 15
    h2 = next(e for e in rep["algebras"] if e["name"] == "h2")
    assert h2["class"] == "Balanced"


def test_catalog_single(capsys):
    code, out, _ = run(capsys, "catalog", "--name", "h3")
    assert code == 0
    assert "(0,0,0,0,0,-2h12+2h34)" in out


def test_unknown_algebra(capsys):
    code, _, err = run(capsys, "catalog", "--name", "bogus")
    assert code == 2
    assert "h19-" in err


def test_torsion_nk(capsys):
    code, rep, _ = run_json(capsys, "torsion", "--algebra", "su2+su2")
    assert code == 0
    assert rep["sigma0"] == "-2" and rep["class"] == "NearlyKahler"
    assert set(rep) == {"algebra", "sigma0", "pi0", "pi1", "nu1", "pi2", "sigma2", "nu3", "class"}


def test_torsion_balanced(capsys):
    code, rep, _ = run_json(capsys, "torsion", "--algebra", "h4")
    assert rep["class"] == "Balanced"


def test_torsion_from_file(capsys, tmp_path):
    path = tmp_path / "flat.alg"
    path.write_text("(0,0,0,0,0,0)\n")
    code, rep, _ = run_json(capsys, "torsion", "--file", str(path))
    assert code == 0
    assert rep["algebra"] == "flat" and rep["class"] == "CalabiYau"
    assert all(rep[k] == "0" for k in ("sigma0", "pi0", "pi1", "nu1", "pi2", "sigma2", "nu3"))


def test_malformed_file(capsys, tmp_path):
    path = tmp_path / "bad.alg"
    path.write_text("(0,0,0,0,0,h9)")
    code, _, err = run(capsys, "torsion", "--file", str(path))
    assert code == 2 and "offset" in err


def test_non_lie_file_rejected(capsys, tmp_path):
    path = tmp_path / "bad.alg"
    path.write_text("(h23,0,h45,0,0,0)")
    code, _, err = run(capsys, "torsion", "--file", str(path))
    assert code == 2 and "d^2" in err


def test_warp_report(capsys):
    code, rep, _ = run_json(capsys, "warp", "--algebra", "su2+su2", "--alpha", "0", "--beta", "1")
    assert code == 0
    assert rep["tau0"] == "24/7" and rep["g2_class"] == "Coclosed" and rep["theorem23_agree"] is True
    assert set(rep) == {"algebra", "alpha", "beta", "tau0", "tau1", "tau2", "tau3", "g2_class", "theorem23_agree"}


def test_orientation_validated(capsys):
    code, _, err = run(capsys, "warp", "--algebra", "h3", "--alpha", "1/2", "--beta", "1/2")
    assert code == 2 and "alpha^2 + beta^2" in err


def test_classify(capsys):
    code, rep, _ = run_json(capsys, "classify", "--algebra", "g6,54")
    assert code == 0
    assert rep["su3_class"] == "SymplecticHalfFlat" and rep["g2_class"] == "CoclosedPureType"
    assert rep["agree"] is True


def test_laplacian(capsys):
    code, rep, _ = run_json(capsys, "laplacian", "--algebra", "su2+su2")
    assert code == 0
    assert rep["commutes_with_star"] is True
    assert "12 x^{1357}" in rep["coclosed_formula"]
    assert rep["closed_formula"] is None


def test_verify_nk(capsys):
    code, rep, _ = run_json(capsys, "verify", "--case", "nk-s3s3", "--c", "1")
    assert code == 0
    assert rep["residual_zero"] is True and rep["validity"] == "(-inf, 1/6)"


def test_verify_e11(capsys):
    code, rep, _ = run_json(capsys, "verify", "--case", "e11e11")
    assert code == 0 and rep["residual_zero"] is True and rep["warp"] == "c*exp(-2t)"


def test_verify_perturbed(capsys):
    code, rep, _ = run_json(capsys, "verify", "--case", "e11e11", "--perturb", "k=+1/100")
    assert code == 1
    assert rep["residual_zero"] is False and rep["offending_monomials"]


def test_verify_samples(capsys):
    code, rep, _ = run_json(capsys, "verify", "--case", "nk-s3s3", "--sample-t", "0,1/10,1/5")
    assert rep["samples"][0]["max_abs_residual"] == 0.0
    assert "error" in rep["samples"][2]


def test_verify_from_solver(capsys):
    code, rep, _ = run_json(capsys, "verify", "--algebra", "h5")
    assert code == 0 and rep["k"] == "-6"


def test_solve_g51(capsys):
    code, rep, _ = run_json(capsys, "solve", "--algebra", "g5,1+R", "--class", "shf")
    assert code == 0
    (sol,) = rep["solutions"]
    assert sol["beta_or_rate"] == "1/6" and sol["k"] == "-3"


def test_solve_a517_parameter(capsys):
    code, rep, _ = run_json(capsys, "solve", "--algebra", "A5,17", "--class", "shf", "--param", "a=2")
    assert code == 0 and rep["solutions"][0]["k"] == "-16"


def test_solve_class_mismatch(capsys):
    code, _, err = run(capsys, "solve", "--algebra", "h3", "--class", "shf")
    assert code == 2 and "Balanced" in err


def test_bad_parameter(capsys):
    code, _, err = run(capsys, "solve", "--algebra", "A5,17", "--param", "b=2")
    assert code == 2


def test_tables_balanced(capsys):
    code, rep, _ = run_json(capsys, "tables", "--which", "balanced")
    assert code == 0
    assert [r["k"] for r in rep["rows"]] == ["-192", "-12", "-9", "-6", "-3", "-2"]
    assert rep["failures"] == []


def test_tables_text(capsys):
    code, out, _ = run(capsys, "tables", "--which", "shf")
    assert code == 0
    assert out.count("PASS") == 8 and "FAIL" not in out


@pytest.mark.parametrize("argv", [
    ["catalog"], ["torsion", "--algebra", "h19-"], ["warp", "--algebra", "g6,38", "--alpha", "3/5", "--beta", "4/5"],
    ["verify", "--case", "nk-s3s3"], ["solve", "--algebra", "h2"],
])
def test_json_round_trip_and_determinism(capsys, argv):
    _, first, raw = run_json(capsys, *argv)
    _, second, raw2 = run_json(capsys, *argv)
    assert raw == raw2
    assert json.loads(json.dumps(first)) == first


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "g2flow.cli", "torsion", "--algebra", "h3"],
                         capture_output=True, text=True, check=True)
    assert "class: Balanced" in out.stdout
