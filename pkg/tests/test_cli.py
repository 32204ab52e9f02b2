import csv
import json
import subprocess
import sys

import pytest

from locbounds import cli

CROSSING = {"name": "crossing", "lattice": {"lengths": [6]},
            "coupling": {"alpha": 3.0, "h0": 1.0, "field_x": 0.0, "field_z": 0.05},
            "observables": {"S": {"support": [0], "pattern": "Z"},
                            "V": {"support": [5], "pattern": "Z", "coefficient": 0.6}}}

CONFIGS = {
    "exponents": {"alpha": [1.5, 3.0], "Delta_over_v": [0.1, 10.0], "mu": [1.0]},
    "curve": {"alpha": 3.0, "r": [10.0, 1000.0], "mode": "closed-form-piecewise"},
    "correlation": {"alpha": 3.0, "r": [10.0, 100.0]},
    "fse": {"alpha": 3.0, "L": [8, 16, 32]},
    "verify": {"count": 2, "sites": 6, "include_static": True},
}
OUTPUTS = {"exponents": ["exponents.csv", "exponents_exponential.csv"], "curve": ["curve.csv"],
           "correlation": ["correlation.csv"], "fse": ["fse.csv"], "verify": ["verify.json"]}


def run(tmp_path, cmd, cfg, *extra):
    cfg_path = tmp_path / f"{cmd}.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    return cli.main([cmd, "--config", str(cfg_path), "--out", str(out), *extra]), out


@pytest.mark.parametrize("cmd", sorted(CONFIGS))
def test_subcommand_is_deterministic(tmp_path, monkeypatch, cmd):
    code, out = run(tmp_path, cmd, CONFIGS[cmd], "--seed", "7")
    assert code == 0
    first = {f: (out / f).read_bytes() for f in OUTPUTS[cmd]}
    monkeypatch.setenv("LOCBOUNDS_THREADS", "3")
    code, out = run(tmp_path, cmd, CONFIGS[cmd], "--seed", "7")
    assert code == 0
    assert {f: (out / f).read_bytes() for f in OUTPUTS[cmd]} == first


def test_exponent_table_contents(tmp_path):
    _, out = run(tmp_path, "exponents", CONFIGS["exponents"])
    rows = list(csv.DictReader((out / "exponents.csv").open()))
    assert len(rows) == 4
    r = next(x for x in rows if x["alpha"] == "3.0" and x["Delta"] == "10.0")
    assert float(r["alpha2"]) == float(r["alpha1_conf"])
    assert r["two_body"] == "true" and float(r["two_body_alpha3"]) == 2.0
    assert r["qac"] == "1.0"
    low = next(x for x in rows if x["alpha"] == "1.5")
    assert low["qac"] == "" and low["two_body"] == "false"
    erows = list(csv.DictReader((out / "exponents_exponential.csv").open()))
    assert all(e["mu1"] == e["mu3"] == e["mu2"] for e in erows)


def test_curve_columns(tmp_path):
    _, out = run(tmp_path, "curve", CONFIGS["curve"])
    rows = list(csv.DictReader((out / "curve.csv").open()))
    assert {r["method"] for r in rows} == {"conformal", "nonconformal"}
    assert all(r["map"] in ("strip", "disk") for r in rows)


def test_verify_reports_crossing_as_violated(tmp_path, capsys):
    cfg = {"count": 1, "sites": 6, "include_static": False, "instances": [CROSSING]}
    code, out = run(tmp_path, "verify", cfg)
    rep = json.loads((out / "verify.json").read_text())
    assert code == 0
    assert rep["schema_version"] == "1.0"
    crossing = [c for c in rep["checks"] if c["instance"] == "crossing"]
    assert crossing[0]["name"] == "weyl-guard"
    assert all(c["status"] == "assumption violated" for c in crossing[1:])
    assert "assumption violated" in capsys.readouterr().out


@pytest.mark.parametrize("cmd,cfg", [
    ("exponents", {"alpha": []}),
    ("exponents", {"alpha": [0.5]}),
    ("fse", {"geometry": "torus"}),
    ("curve", {"mode": "spline"}),
    ("verify", {"lambda_grid": []}),
])
def test_bad_config_exits_2(tmp_path, cmd, cfg):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, cmd, cfg)
    assert exc.value.code == 2


def test_bad_flags_exit_2(tmp_path):
    for argv in (["curve", "--tolerance", "0"], ["verify", "--seed", "-1"],
                 ["exponents", "--config", str(tmp_path / "missing.json")], ["nope"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv + ["--out", str(tmp_path)] if argv[0] != "nope" else argv)
        assert exc.value.code == 2


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "locbounds.cli", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "locbounds" in res.stdout
