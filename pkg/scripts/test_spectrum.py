"""
Tests for the per-k band pipelines and the full nanotube spectrum.

Most expected values come from the free tube (q = 0), where every
eigenvalue solves 9 cos^2 z = const in closed form.

Usage:
    pytest scripts/test_spectrum.py
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from analysis.checks import EVEN_SAMPLE
from analysis.spectrum import (
    SpectrumSolver,
    antiperiodic_eigenvalues,
    asymptotic_edges,
    band_edges,
    classify_gap,
    full_spectrum,
    gaps_for_k,
    hausdorff_to_hill,
    mirror_fiber,
    multiplicity,
    periodic_eigenvalues,
    resonances,
)
from core.errors import InvalidInputError
from core.hill import monodromy, monodromy_grid
from core.lyapunov import TubeAngle, evaluate
from core.models import EigenKind, GapKind, PeriodicPotential, SpectrumReport
from core.potential import delta_potential, is_even, sampled, tube_test_potential
from reporting.writer import to_json

FREE = PeriodicPotential()
K1 = TubeAngle(4, 1)

ANTI_LO = math.acos(1 / 3) ** 2
ANTI_HI = math.acos(-1 / 3) ** 2
RES_LO = math.acos(math.sqrt(2) / 6) ** 2
RES_HI = math.acos(-math.sqrt(2) / 6) ** 2


def free_periodic(g: float, branch: int = 0) -> float:
    """lambda with 9 cos^2 z = g on the given half-period branch."""
    z = math.acos(math.sqrt(g) / 3)
    return (z if branch == 0 else math.pi - z) ** 2


def cos_potential(M: int = 64) -> PeriodicPotential:
    return sampled(lambda t: np.cos(2 * np.pi * t), M)


# ============================================================================
# EIGENVALUE FAMILIES
# ============================================================================


def test_free_periodic_eigenvalues():
    values = periodic_eigenvalues(FREE, K1, 2.0)
    lowest = {(e.nu, e.n, e.sign): e.value for e in values}
    assert lowest[(2, 0, "+")] == pytest.approx(0.1362, abs=1e-3)
    assert lowest[(1, 0, "+")] == pytest.approx(1.1177, abs=1e-3)
    assert lowest[(2, 0, "+")] == pytest.approx(free_periodic(5 + 2 * math.sqrt(2)), abs=1e-9)
    assert all(e.kind == EigenKind.PERIODIC and e.k == 1 for e in values)


def test_free_zero_fiber_periodic_points():
    values = periodic_eigenvalues(FREE, TubeAngle(4, 0), 12.0)
    points = sorted(e.value for e in values)
    assert points[0] == pytest.approx(0.0, abs=1e-9)
    assert ANTI_LO in [pytest.approx(v, abs=1e-8) for v in points]
    assert sum(abs(v - math.pi ** 2) < 1e-6 for v in points) == 2


def test_periodic_points_agree_for_mirror_fibers():
    q = delta_potential(0.3, 2.0)
    a = [e.value for e in periodic_eigenvalues(q, TubeAngle(5, 2), 60.0)]
    b = [e.value for e in periodic_eigenvalues(q, TubeAngle(5, 3), 60.0)]
    assert a == b


def test_free_antiperiodic_eigenvalues():
    values, kappa = antiperiodic_eigenvalues(FREE, 5.0)
    assert [e.value for e in values] == pytest.approx([ANTI_LO, ANTI_LO, ANTI_HI, ANTI_HI], abs=1e-6)
    assert ANTI_LO == pytest.approx(1.5152611, abs=1e-5)
    assert ANTI_HI == pytest.approx(3.650523, abs=1e-5)
    assert kappa[0].lo == pytest.approx(ANTI_LO, abs=1e-6)
    assert kappa[0].hi == pytest.approx(ANTI_HI, abs=1e-6)


def test_even_potential_antiperiodic_pairs_collapse():
    values, _ = antiperiodic_eigenvalues(cos_potential(), 40.0)
    by_label = {(e.nu, e.n, e.sign): e.value for e in values}
    for (nu, n, sign), value in by_label.items():
        if nu == 1 and (2, n, sign) in by_label:
            assert value == pytest.approx(by_label[(2, n, sign)], abs=1e-7)


def test_free_resonances():
    found = resonances(FREE, K1, 5.0)
    assert [r.value for r in found] == pytest.approx([RES_LO, RES_HI], abs=1e-8)
    assert [r.value for r in found] == pytest.approx([1.7765, 3.2716], abs=1e-3)
    assert all(r.kind == EigenKind.RESONANCE and r.n == 1 for r in found)


def test_zero_fiber_resonance_is_lyapunov_zero():
    found = resonances(FREE, TubeAngle(4, 0), 5.0)
    assert [r.value for r in found] == pytest.approx([(math.pi / 2) ** 2] * 2, abs=1e-8)


def test_even_potential_resonances_are_distinct():
    found = resonances(cos_potential(), K1, 50.0)
    by_cell = {}
    for r in found:
        by_cell.setdefault(r.n, []).append(r.value)
    assert by_cell
    for values in by_cell.values():
        assert len(values) == 2 and values[0] < values[1]


# ============================================================================
# BANDS, MULTIPLICITY, GAPS
# ============================================================================


def test_free_bands():
    bands = {(b.nu, b.n): b for b in band_edges(FREE, K1, 8.0)}
    expected = {
        (2, 1): (0.1362, 1.5152),
        (1, 1): (1.1177, 1.7765),
        (1, 2): (3.2716, 4.3447),
        (2, 2): (3.6505, 7.6873),
    }
    for key, (lo, hi) in expected.items():
        assert bands[key].lo == pytest.approx(lo, abs=1e-3)
        assert bands[key].hi == pytest.approx(hi, abs=1e-3)
    assert bands[(1, 1)].lo_edge.kind == EigenKind.PERIODIC
    assert bands[(1, 1)].hi_edge.kind == EigenKind.RESONANCE


def test_even_potential_uses_resonance_edges():
    for band in band_edges(cos_potential(), K1, 60.0):
        if band.nu == 1 and band.n % 2 == 1:
            assert band.hi_edge.kind == EigenKind.RESONANCE
        if band.nu == 1 and band.n % 2 == 0:
            assert band.lo_edge.kind == EigenKind.RESONANCE


def test_free_multiplicity():
    pieces = multiplicity(FREE, K1, 8.0)
    assert pieces.multiplicity_at(0.5) == 2
    for lam in (1.3, 1.6, 3.4, 4.0):
        assert pieces.multiplicity_at(lam) == 4
    assert pieces.multiplicity_at(2.4) == 0
    assert pieces.multiplicity_at(6.0) == 2


def test_even_potential_overlaps_have_multiplicity_four():
    q = cos_potential()
    pieces = multiplicity(q, K1, 60.0)
    bands = band_edges(q, K1, 60.0)
    for b1 in (b for b in bands if b.nu == 1):
        b2 = next((b for b in bands if b.nu == 2 and b.n == b1.n), None)
        if b2 is None:
            continue
        lo, hi = max(b1.lo, b2.lo), min(b1.hi, b2.hi)
        if hi - lo > 1e-6:
            assert pieces.multiplicity_at(0.5 * (lo + hi)) == 4


def test_free_gaps():
    gaps = {g.index: g for g in gaps_for_k(FREE, K1, 8.0)}
    assert gaps[0].lo == -math.inf
    assert gaps[0].hi == pytest.approx(0.1362, abs=1e-3)
    assert gaps[1].kind == GapKind.EMPTY
    assert gaps[2].kind == GapKind.RESONANCE
    assert gaps[2].lo == pytest.approx(1.7765, abs=1e-3)
    assert gaps[2].hi == pytest.approx(3.2716, abs=1e-3)
    assert gaps[3].kind == GapKind.EMPTY
    assert gaps[4].kind == GapKind.PERIODIC


def test_even_potential_resonance_gaps():
    for g in gaps_for_k(cos_potential(), K1, 80.0):
        if g.index % 4 == 2 and not g.empty:
            assert g.kind == GapKind.RESONANCE


def test_classify_gap_table():
    assert classify_gap(3, 2.0, 1.0, EigenKind.PERIODIC, EigenKind.PERIODIC) == GapKind.EMPTY
    assert classify_gap(0, -math.inf, 0.0, None, EigenKind.PERIODIC) == GapKind.PERIODIC
    assert classify_gap(1, 1.0, 2.0, EigenKind.ANTIPERIODIC, EigenKind.PERIODIC) == GapKind.P_MIX
    assert classify_gap(2, 1.0, 2.0, EigenKind.RESONANCE, EigenKind.ANTIPERIODIC) == GapKind.R_MIX


def test_mirror_fiber_relabels():
    solver = SpectrumSolver(FREE, 4, 2)
    source = solver.fiber(1)
    mirrored = mirror_fiber(source, 3)
    assert mirrored.k == 3
    assert mirrored.c == pytest.approx(-source.c)
    assert [b.lo for b in mirrored.bands] == [b.lo for b in source.bands]
    assert all(g.k == 3 for g in mirrored.gaps)


# ============================================================================
# EDGE ATTRIBUTION FOR A SEPARATING DELTA
# ============================================================================


def test_tube_test_potential_keeps_antiperiodic_edges():
    eps = 0.01
    q = tube_test_potential(4, 1, eps)
    lam = np.linspace(0.0, (3 * math.pi) ** 2, 2001)
    Fm = monodromy_grid(q, lam).Fminus.real
    assert np.max(np.abs(Fm - (math.cos(math.pi / 4) + eps))) <= 2 * eps

    bands = {(b.nu, b.n): b for b in band_edges(q, K1, 30.0)}
    assert bands[(1, 1)].hi_edge.kind == EigenKind.ANTIPERIODIC
    assert bands[(1, 2)].lo_edge.kind == EigenKind.ANTIPERIODIC


def test_tube_test_potential_zero_fiber_bands_stay_apart():
    q = tube_test_potential(4, 1, 0.01)
    a = TubeAngle(4, 0)
    bands = {(b.nu, b.n): b for b in band_edges(q, a, 30.0)}
    second = bands[(2, 1)]
    for lam in (second.lo, second.hi):
        assert evaluate(monodromy(q, lam), a).u > 0
    first = bands[(1, 1)]
    assert max(first.lo, second.lo) > min(first.hi, second.hi)


# ============================================================================
# FULL OPERATOR
# ============================================================================


def test_free_full_spectrum_has_no_gaps():
    report = full_spectrum(FREE, 4, lambda_max=60.0)
    g0 = next(g for g in report.gaps if g.index == 0)
    assert g0.lo == -math.inf
    assert g0.hi == pytest.approx(0.0, abs=1e-8)
    assert all(g.width <= 1e-8 for g in report.gaps if g.index > 0)


@pytest.mark.parametrize("N", [3, 4])
def test_even_potential_matches_hill_spectrum(N):
    report = full_spectrum(cos_potential(1024), N, lambda_max=200.0)
    assert hausdorff_to_hill(report) <= 1e-5


def test_even_sample_of_the_suite_is_a_fine_cosine():
    assert is_even(EVEN_SAMPLE)
    assert len(EVEN_SAMPLE.segments) == 1024


def test_full_spectrum_argument_checks():
    with pytest.raises(InvalidInputError):
        full_spectrum(FREE, 4)
    with pytest.raises(InvalidInputError):
        full_spectrum(FREE, 4, lambda_max=10.0, n_max=3)


def test_k_list_selects_fibers():
    report = full_spectrum(FREE, 4, lambda_max=20.0, k_list=[1, 3])
    assert [f.k for f in report.fibers] == [1, 3]
    one, three = report.fibers
    assert [(b.lo, b.hi) for b in one.bands] == [(b.lo, b.hi) for b in three.bands]


def test_verified_run_records_n0():
    report = full_spectrum(FREE, 4, lambda_max=40.0, verify=True)
    assert report.n0 == 2
    assert report.n_cells >= report.n0 + 2
    assert "observed n0=2" in report.notes


def test_json_round_trip_and_thread_independence():
    q = delta_potential(0.3, 2.0)
    one = full_spectrum(q, 3, lambda_max=50.0, threads=1)
    two = full_spectrum(q, 3, lambda_max=50.0, threads=2)
    text = to_json(one)
    assert text == to_json(two)
    assert SpectrumReport.model_validate_json(text) == one
    assert '"schema": 1' in text
    assert '"-inf"' in text


# ============================================================================
# ASYMPTOTICS
# ============================================================================


def test_asymptotic_edges_of_delta():
    lo, hi = asymptotic_edges(delta_potential(0.25, 1.0), 1)
    assert hi - lo == pytest.approx(2 * math.sqrt(2 / 3), abs=1e-9)
    assert 0.5 * (lo + hi) == pytest.approx(math.pi ** 2 + 1.0)


def test_asymptotics_improve_with_n():
    q = sampled(lambda t: np.cos(2 * np.pi * t) + 0.3 * np.cos(4 * np.pi * t), 256)
    report = full_spectrum(q, 4, n_max=24)
    residuals = {row.n: max(row.residuals) for row in report.asymptotics}
    early = np.median([n * residuals[n] for n in range(5, 9)])
    late = np.median([n * residuals[n] for n in range(9, 13)])
    assert late <= early

    first = report.asymptotics[0]
    predicted = asymptotic_edges(q, 1)
    width = first.computed_hi - first.computed_lo
    assert width == pytest.approx(predicted[1] - predicted[0], rel=0.3)
