"""
Tests for root isolation, localization disks and zero counting.

Usage:
    pytest scripts/test_rootfind.py
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.errors import InvalidInputError, NumericFailure
from core.hill import hill_function
from core.lyapunov import TubeAngle
from core.models import PeriodicPotential
from core.potential import from_samples
from core.rootfind import (
    Bracket,
    Disk,
    count_zeros,
    family_function,
    find_n0,
    lam_from_z,
    localization_disks,
    low_energy_counts,
    real_roots,
    root_pair,
    single_root,
    z_from_lam,
)

FREE = PeriodicPotential()


def test_signed_coordinate():
    assert lam_from_z(-2.0) == -4.0
    assert z_from_lam(-4.0) == -2.0
    assert z_from_lam(9.0) == 3.0


def test_cosine_roots():
    roots = real_roots(lambda lam: np.cos(np.sqrt(lam)), Bracket(0.1, 10.0))
    assert [r.z for r in roots] == pytest.approx([math.pi / 2, 3 * math.pi / 2, 5 * math.pi / 2], abs=1e-10)
    assert all(r.multiplicity == 1 for r in roots)


def test_double_roots_of_free_antiperiodic_discriminant():
    f = family_function(FREE, TubeAngle(4, 0), "antiperiodic")

    def real_part(lam):
        return f(lam).real

    roots = real_roots(real_part, Bracket(1.0, 2.0))
    assert [r.z for r in roots] == pytest.approx([math.acos(1 / 3), math.acos(-1 / 3)], abs=1e-6)
    assert [r.multiplicity for r in roots] == [2, 2]


def test_root_on_bracket_end():
    roots = real_roots(lambda lam: np.cos(np.sqrt(lam)), Bracket(0.1, math.pi / 2))
    assert [r.z for r in roots] == pytest.approx([math.pi / 2], abs=1e-10)
    roots = real_roots(lambda lam: np.cos(np.sqrt(lam)), Bracket(math.pi / 2, 3.0))
    assert [r.z for r in roots] == pytest.approx([math.pi / 2], abs=1e-10)


def test_no_roots():
    assert real_roots(lambda lam: 2.0 + np.cos(np.sqrt(lam)), Bracket(0.1, 10.0)) == []


def test_expected_count_mismatch():
    with pytest.raises(NumericFailure):
        real_roots(lambda lam: np.cos(np.sqrt(lam)), Bracket(0.1, 10.0, expected_count=2))


def test_bracket_order():
    with pytest.raises(InvalidInputError):
        Bracket(2.0, 1.0)


def test_single_root_without_sign_change():
    with pytest.raises(NumericFailure):
        single_root(lambda lam: 1.0 + 0.0 * lam, 0.5, 1.0)


def test_root_pair_and_tangency():
    lo, hi, degenerate = root_pair(lambda lam: 0.25 - (np.sqrt(lam) - 2.0) ** 2, 1.0, 2.0, 3.0)
    assert (lo, hi, degenerate) == (pytest.approx(1.5), pytest.approx(2.5), False)
    lo, hi, degenerate = root_pair(lambda lam: -((np.sqrt(lam) - 2.0) ** 2), 1.0, 2.0, 3.0)
    assert degenerate and lo == hi == pytest.approx(2.0, abs=1e-6)


def test_antiperiodic_disks():
    disks = localization_disks("antiperiodic", TubeAngle(4, 1), 5)
    shift = math.asin(1 / 3)
    assert [d.center.real for d in disks] == pytest.approx([5.5 * math.pi - shift, 5.5 * math.pi + shift])
    assert all(d.radius == pytest.approx(1 / 3) and d.expected_count == 2 for d in disks)


def test_periodic_disks():
    disks = localization_disks("periodic", TubeAngle(4, 1), 5)
    shifts = sorted(math.asin(math.sqrt(5 + s * 2 * math.sqrt(2)) / 3) for s in (-1, 1))
    base = 5.5 * math.pi
    expected = sorted([base - shifts[1], base - shifts[0], base + shifts[0], base + shifts[1]])
    assert [d.center.real for d in disks] == pytest.approx(expected)
    assert all(d.expected_count == 1 for d in disks)


def test_periodic_disks_merge_for_zero_fiber():
    disks = localization_disks("periodic", TubeAngle(4, 0), 5)
    assert len(disks) == 3
    assert disks[-1].center.real == pytest.approx(6 * math.pi)
    assert disks[-1].expected_count == 2


def test_periodic_disks_for_middle_fiber():
    a = TubeAngle(4, 2)
    disks = localization_disks("periodic", a, 3)
    shift = math.asin(math.sqrt(5) / 3)
    assert [d.center.real for d in disks] == pytest.approx([3.5 * math.pi - shift, 3.5 * math.pi + shift])
    f = family_function(FREE, a, "periodic")
    assert [count_zeros(f, d) for d in disks] == [2, 2]


def test_periodic_radius_keeps_disks_apart():
    a = TubeAngle(40, 1)
    outer = math.asin(math.sqrt(5 + 4 * abs(a.c)) / 3)
    disks = localization_disks("periodic", a, 5)
    assert disks[0].radius == pytest.approx(0.5 * (math.pi - 2 * outer))
    assert disks[0].radius < 1 / 3
    assert localization_disks("periodic", TubeAngle(4, 1), 5)[0].radius == pytest.approx(1 / 3)


def test_resonance_disks():
    disks = localization_disks("resonance", TubeAngle(4, 1), 5)
    shift = math.asin(math.sqrt(2) / 6)
    assert [d.center.real for d in disks] == pytest.approx([4.5 * math.pi - shift, 4.5 * math.pi + shift])
    assert all(d.radius == pytest.approx(math.sqrt(2) / 6) for d in disks)
    with pytest.raises(InvalidInputError):
        localization_disks("resonance", TubeAngle(4, 2), 5)
    with pytest.raises(InvalidInputError):
        localization_disks("resonance", TubeAngle(4, 0), 5)


def test_count_zeros_free_oracles():
    f = family_function(FREE, TubeAngle(4, 0), "antiperiodic")
    assert count_zeros(f, Disk(1.5 * math.pi - math.asin(1 / 3), 1 / 3)) == 2

    rho = family_function(FREE, TubeAngle(4, 1), "resonance")
    for disk in localization_disks("resonance", TubeAngle(4, 1), 3):
        assert count_zeros(rho, disk) == 1

    assert count_zeros(hill_function(FREE, "F"), Disk(math.pi, 0.3)) == 0


@pytest.mark.parametrize("q", [FREE, from_samples([0.5])])
def test_n0_of_free_and_shifted_tube(q):
    assert find_n0(q, TubeAngle(4, 1)) == 2


def test_low_energy_counts_free_tube():
    counts = low_energy_counts(FREE, TubeAngle(4, 1), 3)
    for found, expected in counts.values():
        assert found == expected


@pytest.mark.parametrize("N, k", [(4, 0), (4, 2), (5, 2), (12, 5)])
@pytest.mark.parametrize("q", [FREE, from_samples([0.5, -1.0, 2.0])])
def test_low_energy_counts_on_large_circles(q, N, k):
    a = TubeAngle(N, k)
    counts = low_energy_counts(q, a, find_n0(q, a) + 2)
    for found, expected in counts.values():
        assert found == expected


def test_winding_grows_with_imaginary_part_without_flagging():
    # |cos z| reaches ~e^30 on this circle; no zero sits near it
    f = hill_function(FREE, "F")
    assert count_zeros(f, Disk(0.0, 30.0)) == 20
