"""
Tests for the fiber Lyapunov functions and the membership predicates.

Usage:
    pytest scripts/test_lyapunov.py
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.errors import InvalidInputError
from core.hill import monodromy, monodromy_grid
from core.lyapunov import (
    TubeAngle,
    branch_values,
    discriminants,
    dminus_values,
    dplus_values,
    evaluate,
    lyapunov_table,
    membership,
    resonance_set_membership,
    rho_values,
)
from core.models import PeriodicPotential
from core.potential import random_potential

FREE = PeriodicPotential()


def free_data(lam: float, N: int = 4, k: int = 1):
    return evaluate(monodromy(FREE, lam), TubeAngle(N, k))


def test_tube_angle_symmetry():
    a, b = TubeAngle(5, 2), TubeAngle(5, 3)
    assert a.s == b.s
    assert a.c2 == b.c2
    assert a.c == -b.c
    middle = TubeAngle(4, 2)
    assert middle.is_middle and middle.c == 0.0 and middle.s == 1.0
    with pytest.raises(InvalidInputError):
        TubeAngle(4, 4)


def test_free_values_at_first_lyapunov_zero():
    d = free_data((math.pi / 2) ** 2)
    assert d.xi.real == pytest.approx(-1.0, abs=1e-12)
    assert d.rho.real == pytest.approx(-0.25, abs=1e-12)
    assert d.u == pytest.approx(-0.5, abs=1e-12)
    assert d.v == pytest.approx(-0.5, abs=1e-12)
    assert d.g1 == pytest.approx(5 - 2 * math.sqrt(2), abs=1e-12)
    assert d.g2 == pytest.approx(5 + 2 * math.sqrt(2), abs=1e-12)
    assert d.h1 == pytest.approx(1.0) and d.h2 == pytest.approx(1.0)


def test_rho_special_fibers():
    rng = np.random.default_rng(4)
    F, Fm = rng.normal(size=50), rng.normal(size=50)
    assert np.allclose(rho_values(F, Fm, TubeAngle(6, 0)), 9 * F * F)
    assert np.allclose(rho_values(F, Fm, TubeAngle(6, 3)), Fm * Fm)


def test_free_antiperiodic_discriminant_is_square():
    z = np.linspace(0.1, 12.0, 200)
    F = np.cos(z)
    Fm = np.zeros_like(z)
    for k in range(4):
        assert np.allclose(dminus_values(F, Fm, TubeAngle(4, k)).real, (9 * F * F - 1) ** 2, atol=1e-9)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_factorized_discriminants_match_products(k):
    q = random_potential(np.random.default_rng(9))
    a = TubeAngle(4, k)
    for lam in np.linspace(-2.0, 80.0, 41):
        d = evaluate(monodromy(q, float(lam)), a)
        plus, minus = discriminants(d)
        direct_plus = 4 * (d.Fk1 - 1) * (d.Fk2 - 1)
        direct_minus = 4 * (d.Fk1 + 1) * (d.Fk2 + 1)
        scale = max(1.0, abs(plus), abs(direct_plus))
        assert abs(plus - direct_plus) / scale < 1e-9
        scale = max(1.0, abs(minus), abs(direct_minus))
        assert abs(minus - direct_minus) / scale < 1e-9


def test_mirror_fibers_share_discriminants():
    q = random_potential(np.random.default_rng(2))
    lam = np.linspace(-1.0, 60.0, 101) + 0.3j
    grid = monodromy_grid(q, lam)
    for k in (1, 2):
        a, b = TubeAngle(5, k), TubeAngle(5, 5 - k)
        assert np.allclose(dplus_values(grid.F, grid.Fminus, a), dplus_values(grid.F, grid.Fminus, b), rtol=1e-12)
        assert np.allclose(dminus_values(grid.F, grid.Fminus, a), dminus_values(grid.F, grid.Fminus, b), rtol=1e-12)


@pytest.mark.parametrize("lam, k, expected", [
    (1.3, 1, (True, True)),
    (2.4, 1, (False, False)),
    (0.05, 0, (False, True)),
])
def test_free_membership(lam, k, expected):
    assert membership(free_data(lam, k=k)) == expected


def test_membership_needs_real_energy():
    d = evaluate(monodromy(FREE, complex(2.0, 1.0)), TubeAngle(4, 1))
    with pytest.raises(InvalidInputError):
        membership(d)


def test_membership_matches_branches():
    q = random_potential(np.random.default_rng(21))
    lam = np.random.default_rng(22).uniform(q.lower_bound(), 150.0, 1000)
    grid = monodromy_grid(q, lam)
    F, Fm = grid.F.real, grid.Fminus.real
    for k in range(4):
        a = TubeAngle(4, k)
        table = lyapunov_table(F, Fm, a)
        f1, f2 = branch_values(F, Fm, a)
        clear = table["rho"] > 1e-6
        for branch, flags in ((f1.real, table["in1"]), (f2.real, table["in2"])):
            inside = np.abs(branch) <= 1.0
            away = clear & (np.abs(np.abs(branch) - 1.0) > 1e-6)
            assert np.array_equal(inside[away], flags[away])


def test_resonance_sets_free_tube():
    sets = resonance_set_membership(free_data(1.6))
    assert sets["SR"]
    assert sets["sigma1"] and sets["sigma2"]
    assert not resonance_set_membership(free_data(2.4))["sigma1"]
