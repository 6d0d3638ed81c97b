"""
Tests for the monodromy matrix and the scalar Hill operator tables.

Usage:
    pytest scripts/test_hill.py
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.hill import (
    cells_below,
    dirichlet_spectrum,
    hill_anchors,
    hill_band_edges,
    hill_report,
    lyapunov_zeros,
    monodromy,
    monodromy_grid,
)
from core.models import PeriodicPotential
from core.potential import delta_potential, from_samples, random_potential, sampled
from core.rootfind import Bracket, real_roots

FREE = PeriodicPotential()


def test_free_monodromy_at_first_lyapunov_zero():
    m = monodromy(FREE, (math.pi / 2) ** 2)
    assert m.theta1 == pytest.approx(0.0, abs=1e-12)
    assert m.phi1 == pytest.approx(2 / math.pi, rel=1e-12)
    assert m.theta1p == pytest.approx(-math.pi / 2, rel=1e-12)
    assert m.phi1p == pytest.approx(0.0, abs=1e-12)
    assert m.F == pytest.approx(0.0, abs=1e-12)
    assert m.Fminus == pytest.approx(0.0, abs=1e-12)


def test_delta_anti_discriminant():
    m = monodromy(delta_potential(0.7, 1.0), 4.0)
    assert m.Fminus == pytest.approx(math.sin(0.8) / 4, abs=1e-10)
    assert m.Fminus == pytest.approx(0.1793390, abs=1e-7)


def test_negative_energy_is_real():
    m = monodromy(FREE, -4.0)
    assert isinstance(m.F, float)
    assert m.F == pytest.approx(math.cosh(2.0), rel=1e-12)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_wronskian_and_identity(seed):
    rng = np.random.default_rng(seed)
    q = random_potential(rng)
    lam = np.concatenate([
        rng.uniform(-5.0, 200.0, 200),
        rng.uniform(-5.0, 200.0, 200) + 1j * rng.uniform(-10.0, 10.0, 200),
    ])
    m = monodromy_grid(q, lam)
    a = m.theta1 * m.phi1p
    d = m.theta1p * m.phi1
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(d)))
    assert np.max(np.abs(a - d - 1.0) / scale) < 1e-10
    assert np.max(np.abs(m.F ** 2 - m.Fminus ** 2 - a) / scale) < 1e-10


def test_even_potential_has_no_anti_discriminant():
    q = sampled(lambda t: np.cos(2 * np.pi * t), 64)
    lam = np.linspace(-1.0, 150.0, 301)
    assert np.max(np.abs(monodromy_grid(q, lam).Fminus)) < 1e-9


def test_free_dirichlet_spectrum():
    values = [p.value for p in dirichlet_spectrum(FREE, 100.0)]
    assert values == pytest.approx([9.8696044, 39.4784176, 88.8264396], abs=1e-6)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_dirichlet_value_on_upper_limit_is_kept(n):
    top = (math.pi * n) ** 2
    values = [p.value for p in dirichlet_spectrum(FREE, top)]
    assert len(values) == n
    assert values[-1] == pytest.approx(top, rel=1e-9)


def test_lyapunov_zero_on_upper_limit_counts_as_cell():
    top = (1.5 * math.pi) ** 2
    assert [p.n for p in lyapunov_zeros(FREE, top)] == [1, 2]
    assert cells_below(FREE, top) == 2


def test_constant_shift():
    q = from_samples([3.0])
    mu = [p.value for p in dirichlet_spectrum(q, 50.0)]
    eta = [p.value for p in lyapunov_zeros(q, 50.0)]
    assert mu == pytest.approx([(math.pi * n) ** 2 + 3.0 for n in range(1, len(mu) + 1)], abs=1e-6)
    assert eta[0] == pytest.approx((math.pi / 2) ** 2 + 3.0, abs=1e-6)


def test_delta_dirichlet_against_closed_form():
    q = delta_potential(0.5, 2.0)

    def phi(lam):
        z = np.sqrt(lam)
        return np.sin(z) / z + 2.0 * np.sin(z / 2) ** 2 / z ** 2

    expected = [lam_from(r.z) for r in real_roots(phi, Bracket(0.1, math.sqrt(50.0)))]
    values = [p.value for p in dirichlet_spectrum(q, 50.0)]
    assert values == pytest.approx(expected, abs=1e-8)


def lam_from(z: float) -> float:
    return z * z


def test_free_lyapunov_zeros():
    eta = lyapunov_zeros(FREE, 30.0)
    assert eta[0].value == pytest.approx(2.4674011, abs=1e-7)
    assert [p.n for p in eta] == [1, 2]


def test_free_hill_gaps_are_degenerate():
    edges = hill_band_edges(FREE, 50.0)
    assert edges[0][0] == -math.inf
    assert edges[0][1] == pytest.approx(0.0, abs=1e-9)
    for n, (lo, hi) in enumerate(edges[1:], start=1):
        assert lo == pytest.approx((math.pi * n) ** 2, abs=1e-6)
        assert hi == pytest.approx((math.pi * n) ** 2, abs=1e-6)


def test_cosine_first_gap_width():
    q = sampled(lambda t: 0.5 * np.cos(2 * np.pi * t), 512)
    lo, hi = hill_band_edges(q, 15.0)[1]
    assert hi - lo == pytest.approx(0.5, rel=0.25)


def test_anchors_interlace():
    q = random_potential(np.random.default_rng(5))
    s = hill_anchors(q, 6)
    for n in range(1, s.n_cells + 1):
        assert s.eta(n) < s.mu(n) < s.eta(n + 1)
        lo, hi, _ = s.edges[n]
        assert lo <= s.mu(n) <= hi


def test_hill_report_tables():
    report = hill_report(FREE, 60.0)
    assert report.schema_version == 1
    assert [a.n for a in report.anchors] == list(range(1, len(report.anchors) + 1))
    assert report.gaps[0].lo == -math.inf
    assert report.anchors[0].mu == pytest.approx(math.pi ** 2, abs=1e-8)
