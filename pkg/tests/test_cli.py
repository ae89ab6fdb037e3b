import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ghostseries.cli import main
from ghostseries.formats import (
    FormatError,
    coefficients_from_json,
    coefficients_to_json,
    frac_from_str,
    frac_to_str,
    parse_weight,
    slope_sequence_from_json,
    slopes_to_json,
)
from ghostseries.ghost import coefficient
from ghostseries.newton import ghost_slopes
from ghostseries.weightspace import BoundaryWeight, IntegerWeight, NearIntegerWeight


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def test_dims(capsys):
    data = run_json(capsys, "dims", "--model", "gamma0:5,1,0", "--range", "0..6")
    rows = {r["n"]: r for r in data["rows"]}
    assert len(rows) == 7
    assert (rows[3]["d"], rows[3]["dnew"], rows[3]["dp"], rows[3]["k"]) == (1, 3, 5, 12)
    single = run_json(capsys, "dims", "--model", "gamma0:5,1,0", "--range", "3..3")
    assert len(single["rows"]) == 1


def test_dims_rhobar_needs_window(capsys):
    code, _, err = run(capsys, "dims", "--model", "rhobar:p=13,k=12,split=1,m1=1,m3=1")
    assert code == 2 and "base window required" in err


def test_dims_rhobar_generic(capsys):
    data = run_json(capsys, "dims", "--model", "rhobar:p=13,k=12,m1=1", "--range", "0..13")
    assert [r["d"] for r in data["rows"]] == [1] * 12 + [2, 2]
    assert data["rows"][0]["k"] == 12


def test_coeffs(capsys):
    data = run_json(capsys, "coeffs", "--model", "gamma0:5,1,0", "--up-to", "2")
    assert data["coefficients"] == [
        {"i": 0, "zeros": []},
        {"i": 1, "zeros": [[2, 1]]},
        {"i": 2, "zeros": [[2, 1], [3, 1], [4, 1], [5, 1]]},
    ]
    only = run_json(capsys, "coeffs", "--model", "gamma0:5,1,0", "--up-to", "0")
    assert [c["i"] for c in only["coefficients"]] == [0]


def test_axiom_violation_is_named(capsys, tmp_path):
    bad = {"type": "quasilinear", "p": 5, "k_base": 0,
           "d": {"base": [0, 5], "period": 2, "defect": 2}, "dnew": {"base": [0], "period": 1, "defect": 1}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _, err = run(capsys, "coeffs", "--model", str(path), "--up-to", "3")
    assert code == 2 and "(ND)" in err
    flat = dict(bad, d={"base": [1], "period": 1, "defect": 0})
    path.write_text(json.dumps(flat))
    code, _, err = run(capsys, "coeffs", "--model", str(path))
    assert code == 2 and "(G)" in err


def test_quasilinear_file_model(capsys, tmp_path):
    spec = {"type": "quasilinear", "p": 5, "k_base": 0,
            "d": {"base": [0, 0, 1], "period": 3, "defect": 1}, "dnew": {"base": [1, 3, 3], "period": 3, "defect": 4}}
    path = tmp_path / "ql.json"
    path.write_text(json.dumps(spec))
    data = run_json(capsys, "slopes", "--model", str(path), "--weight", "boundary:1/2", "--count", "6")
    assert data["certified"]


def test_slopes(capsys):
    data = run_json(capsys, "slopes", "--model", "gamma0:5,1,0", "--weight", "int:12", "--count", "5")
    assert data["slopes"] == ["1", "5", "5", "5", "10"]
    assert data["header"]["p"] == 5 and data["header"]["N"] == 1 and data["header"]["k"] == 12
    assert data["header"]["count"] == 5 and data["certified"] is True


def test_boundary_slopes_are_halved_wadic(capsys):
    half = run_json(capsys, "slopes", "--model", "gamma0:5,1,0", "--weight", "boundary:1/2", "--count", "10")
    wadic = run_json(capsys, "slopes", "--model", "gamma0:5,1,0", "--weight", "wadic", "--count", "10")
    assert [frac_from_str(s) for s in half["slopes"]] == [frac_from_str(s) / 2 for s in wadic["slopes"]]


def test_wrong_component_weight(capsys):
    code, _, err = run(capsys, "slopes", "--model", "gamma0:5,1,0", "--weight", "int:13", "--count", "5")
    assert code == 2 and "component" in err


def test_ap(capsys):
    code, out, _ = run(capsys, "ap", "--model", "gamma0:5,1,0", "--weight", "boundary:1/2", "--count", "200")
    assert code == 0
    assert "Q: 5" in out and "D: 4" in out and "verified: True" in out
    data = run_json(capsys, "ap", "--model", "gamma0:5,1,0", "--weight", "boundary:1/2", "--count", "200")
    assert (data["Q"], data["Q_r"], data["D"], data["verified"]) == (5, 5, "4", True)


def test_ap_integer_weight_refused(capsys):
    code, _, err = run(capsys, "ap", "--model", "gamma0:5,1,0", "--weight", "int:12")
    assert code == 2 and "does not apply" in err


def test_dist(capsys):
    data = run_json(capsys, "dist", "--model", "gamma0:5,1,0", "--n", "100")
    blocks = {b["block"]: b for b in data["blocks"]}
    assert blocks["half"]["limit"] == "2/3" and blocks["low"]["limit"] == "1/6"
    assert abs(float(Fraction(blocks["half"]["mass"])) - 2 / 3) <= 0.05


def test_gouvea_ss_axioms_np(capsys):
    data = run_json(capsys, "gouvea", "--model", "gamma0:5,1,0", "--n", "3")
    assert data["rows"][0]["ratio_old"] == "1/12"
    data = run_json(capsys, "ss", "--model", "gamma0:5,1,0", "--range", "3..5")
    assert [r["ok"] for r in data["rows"]] == ["True"] * 3
    data = run_json(capsys, "axioms", "--model", "gamma0:2,3,0")
    assert data["ok"] and data["periods"]["dp"] == [2, 4]
    data = run_json(capsys, "np", "--model", "gamma0:5,1,0", "--weight", "int:12", "--up-to", "5")
    assert data["vertices"][:3] == [[0, "0"], [1, "1"], [4, "16"]]


def test_csv_and_table(capsys):
    code, out, _ = run(capsys, "dims", "--model", "gamma0:5,1,0", "--range", "0..2", "--format", "csv")
    assert out.splitlines() == ["n,k,d,dnew,dp", "0,0,0,-1,-1", "1,4,0,1,1", "2,8,0,3,3"]
    code, out, _ = run(capsys, "dims", "--model", "gamma0:5,1,0", "--range", "3..3")
    assert out.split() == ["n", "k", "d", "dnew", "dp", "3", "12", "1", "3", "5"]


def test_bad_inputs(capsys):
    assert run(capsys, "dims", "--model", "gamma0:5,1,0", "--range", "5..2")[0] == 2
    assert run(capsys, "dims", "--model", "gamma0:5,1,0", "--range", "a..b")[0] == 2
    assert run(capsys, "dims", "--model", "nonsense")[0] == 2
    assert run(capsys, "slopes", "--model", "gamma0:5,1,0", "--weight", "half:1")[0] == 2
    assert run(capsys, "dims")[0] == 2


def test_compare_roundtrip_and_perturbation(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, _, _ = run(capsys, "slopes", "--model", "gamma0:5,1,0", "--weight", "int:40", "--count", "30",
                     "--format", "json", "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "compare", "--model", "gamma0:5,1,0", "--file", str(path))
    assert code == 0 and "match: True" in out
    data = json.loads(path.read_text())
    data["slopes"][7] = frac_to_str(frac_from_str(data["slopes"][7]) + Fraction(1, 3))
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "compare", "--model", "gamma0:5,1,0", "--file", str(path))
    assert code == 1 and "first mismatch: index" in out


def test_compare_malformed(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "compare", "--model", "gamma0:5,1,0", "--weight", "int:12", "--file", str(path))
    assert code == 2 and "invalid JSON" in err
    path.write_text(json.dumps(["1", "five"]))
    code, _, err = run(capsys, "compare", "--model", "gamma0:5,1,0", "--weight", "int:12", "--file", str(path))
    assert code == 2 and "entry 2" in err
    path.write_text(json.dumps(["1", "5", "5", "5", "10"]))
    code, _, _ = run(capsys, "compare", "--model", "gamma0:5,1,0", "--weight", "int:12", "--file", str(path))
    assert code == 0


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"model": "gamma0:5,1,0", "weight": "int:12", "count": 5, "format": "json"}))
    code, out, _ = run(capsys, "slopes", "--config", str(cfg))
    assert code == 0 and json.loads(out)["slopes"] == ["1", "5", "5", "5", "10"]
    code, out, _ = run(capsys, "slopes", "--config", str(cfg), "--count", "2")
    assert json.loads(out)["slopes"] == ["1", "5"]
    cfg.write_text(json.dumps({"model": "gamma0:5,1,0", "colour": "red"}))
    assert run(capsys, "dims", "--config", str(cfg))[0] == 2


def test_output_is_deterministic(capsys, monkeypatch):
    args = ("ss", "--model", "gamma0:7,1,2", "--range", "10..20", "--format", "json")
    first = run(capsys, *args)[1]
    monkeypatch.setenv("GHOST_THREADS", "4")
    assert run(capsys, *args)[1] == first
    args = ("coeffs", "--model", "gamma0:5,1,0", "--up-to", "30", "--format", "json")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_json_roundtrips(m510):
    s = ghost_slopes(m510, NearIntegerWeight(12, Fraction(3, 2)), 40)
    back = slope_sequence_from_json(json.loads(json.dumps(slopes_to_json(s, m510))))
    assert (back.weight, back.slopes, back.certified, back.count) == (s.weight, s.slopes, s.certified, s.count)
    coeffs = [coefficient(m510, i) for i in range(25)]
    assert coefficients_from_json(json.loads(json.dumps(coefficients_to_json(coeffs)))) == coeffs


def test_weight_and_rational_parsing():
    assert parse_weight("int:12") == IntegerWeight(12)
    assert parse_weight("boundary:1/2") == BoundaryWeight(Fraction(1, 2))
    assert parse_weight("near:12,3/2") == NearIntegerWeight(12, Fraction(3, 2))
    assert frac_to_str(Fraction(-6, 4)) == "-3/2" and frac_to_str(Fraction(4)) == "4"
    for bad in ("1.5", "1/0", "x", 1.5, True):
        with pytest.raises(FormatError):
            frac_from_str(bad)


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "ghostseries.cli", "slopes", "--model", "gamma0:5,1,0",
                           "--weight", "int:12", "--count", "5", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "5,10"
