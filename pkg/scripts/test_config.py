"""
Tests for configuration loading and validation.

Usage:
    pytest scripts/test_config.py
"""

import math
import os
import sys

import pytest
from pydantic import ValidationError

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.config import RunConfig, load_config
from core.errors import InvalidInputError
from core.models import OutputFormat


def test_defaults():
    config = RunConfig()
    assert config.N == 4
    assert config.k_values == [0, 1, 2, 3]
    assert config.lambda_max == 150.0
    assert config.n_max is None
    assert config.format == OutputFormat.JSON
    assert config.verify is True
    assert config.tolerances.tol_root == 1e-12
    assert len(config.build_potential().segments) == 4


def test_n_max_sets_energy_range():
    config = RunConfig(n_max=3)
    assert config.lambda_max is None
    assert config.energy_range == pytest.approx((2 * math.pi) ** 2)


def test_range_is_exclusive():
    with pytest.raises(ValidationError):
        RunConfig(lambda_max=50.0, n_max=3)


@pytest.mark.parametrize("k_list", [[4], [-1], [0, 7]])
def test_k_out_of_range(k_list):
    with pytest.raises(ValidationError):
        RunConfig(N=4, k_list=k_list)


def test_k_list_is_sorted_and_unique():
    assert RunConfig(N=6, k_list=[3, 1, 3]).k_values == [1, 3]


def test_unknown_keys_rejected():
    with pytest.raises(ValidationError):
        RunConfig(colour="blue")


def test_bad_segments_point_at_potential():
    with pytest.raises(ValidationError) as info:
        RunConfig(potential={"segments": [[0.5, 1.0], [0.25, 2.0]]})
    assert info.value.errors()[0]["loc"][0] == "potential"


def test_load_toml(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(
        'N = 3\n'
        'k_list = [1]\n'
        'n_max = 2\n'
        'format = "csv"\n'
        '\n'
        '[potential]\n'
        'samples = [1.0, -1.0]\n'
        'deltas = [[0.5, 0.25]]\n',
        encoding="utf-8"
    )
    config = load_config(path)
    assert config.N == 3
    assert config.k_values == [1]
    assert config.format == OutputFormat.CSV
    q = config.build_potential()
    assert len(q.segments) == 2
    assert len(q.deltas) == 1


def test_load_json(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"N": 2, "potential": {"segments": [[0.0, 1.0]]}}', encoding="utf-8")
    assert load_config(path).N == 2


def test_bad_extension(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("N: 4\n", encoding="utf-8")
    with pytest.raises(InvalidInputError):
        load_config(path)


def test_missing_and_unparseable_files(tmp_path):
    with pytest.raises(InvalidInputError):
        load_config(tmp_path / "absent.toml")
    broken = tmp_path / "broken.toml"
    broken.write_text("N = = 4\n", encoding="utf-8")
    with pytest.raises(InvalidInputError):
        load_config(broken)
