"""
End-to-end tests of the command-line entry point.

Usage:
    pytest scripts/test_cli.py
"""

import json
import os
import sys

import pandas as pd
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from scripts.analyze import EXIT_CONFIG, EXIT_OK, main

SMALL = """
N = 4
k_list = [1, 3]
lambda_max = 30.0
verify = false

[potential]
segments = [[0.0, 0.0], [0.5, 1.0]]

[scan]
points = 201

[checks]
random_lambdas = 50
random_potentials = 1
"""


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(SMALL, encoding="utf-8")
    return str(path)


def test_hill_json(config, capsys):
    assert main(["hill", "--config", config]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == 1
    assert payload["anchors"]


def test_hill_text(config, capsys):
    assert main(["hill", "--config", config, "--format", "text"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "=" * 60 in out


def test_mirror_fibers_in_bands(config, capsys):
    assert main(["bands", "-c", config]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    fibers = {f["k"]: f for f in payload["fibers"]}
    assert sorted(fibers) == [1, 3]
    lows = [[b["lo"] for b in fibers[k]["bands"]] for k in (1, 3)]
    assert lows[0] == pytest.approx(lows[1], abs=1e-9)


def test_check_only(config, capsys):
    assert main(["check", "-c", config, "--only", "monodromy-identities"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert [r["name"] for r in payload["results"]] == ["monodromy-identities"]


def test_unknown_check_is_a_config_error(config):
    assert main(["check", "-c", config, "--only", "nope"]) == EXIT_CONFIG


def test_scan_to_directory(config, tmp_path):
    out = tmp_path / "results"
    assert main(["scan", "-c", config, "-f", "csv", "-o", str(out)]) == EXIT_OK
    scan = pd.read_csv(out / "scan.csv")
    assert len(scan) == 201
    assert list(scan.columns[:4]) == ["lambda", "F", "Fminus", "k1_xi"]
    assert "k3_in2" in scan.columns
    edges = pd.read_csv(out / "scan_edges.csv")
    assert set(edges["k"]) == {1, 3}
    assert (edges["lambda"] <= 30.0).all()


def test_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text("N = 4\nlambda_max = 10.0\nn_max = 2\n", encoding="utf-8")
    assert main(["hill", "-c", str(path)]) == EXIT_CONFIG
    assert "CONFIGURATION ERROR" in capsys.readouterr().err


def test_missing_config(tmp_path):
    assert main(["hill", "-c", str(tmp_path / "absent.toml")]) == EXIT_CONFIG


@pytest.mark.slow
def test_default_check_passes(capsys):
    assert main(["check"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["results"]
    assert all(r["status"] != "fail" for r in payload["results"])


def test_full_check_on_small_config(config, capsys):
    assert main(["check", "-c", config]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    names = {r["name"] for r in payload["results"]}
    assert {"localization", "dirichlet-in-hill-gaps", "symmetry"} <= names
