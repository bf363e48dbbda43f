import json
import math
import subprocess
import sys

import numpy as np
import pytest

from weylprod.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


# ------------------------------------------------------------------ figure

def test_figure_csv(tmp_path, capsys):
    out = tmp_path / "fig.csv"
    code, _, _ = run(["figure", "--alpha", "sqrt2m1", "--n-max", "500",
                      "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[1] == "N,value"
    assert len(lines) == 502
    values = [float(line.split(",")[1]) for line in lines[2:]]
    # spikes sit exactly at q_{l+1} - 1
    spikes = {4, 11, 28, 69, 168, 407}
    for lo, hi in ((2, 5), (5, 12), (12, 29), (29, 70), (70, 169), (169, 408)):
        seg = values[lo - 1:hi - 1]
        assert lo + int(np.argmax(seg)) in spikes


def test_figure_normalized_bounded(tmp_path, capsys):
    out = tmp_path / "fig2.csv"
    code, _, _ = run(["figure", "--n-max", "500", "--normalizer",
                      "one_over_N", "--out", str(out)], capsys)
    assert code == 0
    values = [float(line.split(",")[1])
              for line in out.read_text().strip().splitlines()[2:]]
    assert 0 < max(values) < 5.0


def test_figure_single_row(tmp_path, capsys):
    out = tmp_path / "one.csv"
    code, _, _ = run(["figure", "--n-max", "1", "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3
    assert float(lines[2].split(",")[1]) == pytest.approx(
        2 * math.sin(math.pi * (math.sqrt(2) - 1)), rel=1e-12)


def test_figure_json(capsys):
    code, stdout, _ = run(["figure", "--n-max", "3", "--format", "json"],
                          capsys)
    assert code == 0
    payload = json.loads(stdout)
    assert payload["normalizer"] == "none"
    assert len(payload["series"]) == 3


# ------------------------------------------------------------------ verify

def test_verify_vdc_limits(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code, _, _ = run(["verify", "vdc-limits", "--s-max", "10",
                      "--out", str(out)], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] is True and rep["theorem"] == "vdc-limits"


def test_verify_sandwich(capsys):
    code, stdout, _ = run(["verify", "kronecker-sandwich", "--alpha",
                           "sqrt2m1", "--q-max", "1000"], capsys)
    assert code == 0
    assert json.loads(stdout)["passed"] is True


def test_verify_hlawka_grid(capsys):
    code, stdout, _ = run(["verify", "hlawka", "--gen", "grid", "--N", "100"],
                          capsys)
    assert code == 0
    rep = json.loads(stdout)
    assert rep["empirical_constants"]["P_N"] == pytest.approx(101.0, rel=1e-9)
    assert rep["empirical_constants"]["bound"] <= 101.0 ** 2


def test_verify_conjectures_always_zero(capsys):
    code, stdout, _ = run(["verify", "conjectures", "--n-max", "100"], capsys)
    assert code == 0


def test_verify_extremal_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, stdout, _ = run(["verify", "extremal", "--n-max", "64",
                           "--format", "csv", "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("N,M,d,logP")
    assert json.loads(stdout)["passed"] is True


def test_verify_unknown_theorem_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "definitely-not-a-theorem"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------- mc

def test_mc_paths_zero_usage_error(capsys):
    code, _, err = run(["mc", "iid", "--paths", "0"], capsys)
    assert code == 2
    assert "paths" in err


def test_mc_iid_deterministic(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for prefix in ("a", "b"):
        code, _, _ = run(["mc", "iid", "--paths", "3", "--n-max", "2000",
                          "--seed", "7", "--out", prefix], capsys)
        assert code == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_mc_subsequence_identity_flag(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(["mc", "subsequence", "--alpha", "sqrt2m1", "--paths",
                      "2", "--terms", "1000", "--seed", "3", "--out", "sub"],
                     capsys)
    assert code == 0
    summary = json.loads((tmp_path / "sub.json").read_text())
    assert summary["details"]["selection_identity_max_abs_diff"] < 1e-8


def test_mc_csv_summary_round_trip(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    run(["mc", "iid", "--paths", "5", "--n-max", "1500", "--seed", "1",
         "--out", "rt"], capsys)
    rows = (tmp_path / "rt.csv").read_text().strip().splitlines()[1:]
    ratios = np.array([float(r.split(",")[4]) for r in rows])
    summary = json.loads((tmp_path / "rt.json").read_text())
    assert summary["ratio_mean"] == float(np.mean(ratios))


# ------------------------------------------------------------------- flags

def test_bad_alpha_exit_2(capsys):
    code, _, err = run(["figure", "--alpha", "notathing"], capsys)
    assert code == 2 and "alpha" in err


def test_precision_env_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("WEYL_PRECISION_BITS", "160")
    out = tmp_path / "p.csv"
    code, _, _ = run(["figure", "--n-max", "2", "--out", str(out)], capsys)
    assert code == 0
    monkeypatch.setenv("WEYL_PRECISION_BITS", "nope")
    code, _, err = run(["figure", "--n-max", "2"], capsys)
    assert code == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "weylprod.cli", "verify", "conjectures",
         "--n-max", "30"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["theorem"] == "conjectures"
