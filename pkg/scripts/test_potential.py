"""
Tests for potential construction, Fourier data and parity.

Usage:
    pytest scripts/test_potential.py
"""

import math
import os
import sys

import numpy as np
import pytest
from pydantic import ValidationError

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.errors import InvalidInputError
from core.models import PeriodicPotential
from core.potential import (
    delta_potential,
    fourier_coeffs,
    from_samples,
    is_even,
    random_potential,
    sampled,
    tube_test_potential,
)


def cos_potential(M: int = 512) -> PeriodicPotential:
    return sampled(lambda t: np.cos(2 * np.pi * t), M)


def test_single_sample_is_constant():
    q = from_samples([5.0])
    assert q.segments == ((0.0, 5.0),)
    assert q.pieces == [(0.0, 1.0, 5.0)]


def test_empty_samples_rejected():
    with pytest.raises(InvalidInputError):
        from_samples([])


def test_sampled_cosine_first_harmonic():
    _, qs, qc = fourier_coeffs(cos_potential(), 1)
    assert abs(qc - 0.5) < 1e-4
    assert abs(qs) < 1e-10


def test_fourier_of_zero_potential():
    assert fourier_coeffs(PeriodicPotential(), 3) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_constant_potential_is_orthogonal_to_harmonics(n):
    q0, qs, qc = fourier_coeffs(from_samples([3.0]), n)
    assert q0 == pytest.approx(3.0)
    assert qs == pytest.approx(0.0, abs=1e-12)
    assert qc == pytest.approx(0.0, abs=1e-12)


def test_delta_sifting():
    q0, qs, qc = fourier_coeffs(delta_potential(0.25, 1.0), 1)
    assert q0 == pytest.approx(1.0)
    assert qs == pytest.approx(1.0)
    assert qc == pytest.approx(0.0, abs=1e-12)


def test_fourier_is_linear():
    rng = np.random.default_rng(11)
    p, r = random_potential(rng), random_potential(rng)
    cuts = sorted({t for t, _ in p.segments} | {t for t, _ in r.segments})
    total = PeriodicPotential(segments=tuple(
        (t, _value(p, t) + _value(r, t)) for t in cuts
    ))
    for n in (1, 2, 3):
        expected = np.add(fourier_coeffs(p, n), fourier_coeffs(r, n))
        assert np.allclose(fourier_coeffs(total, n), expected, atol=1e-12)


def _value(q: PeriodicPotential, t: float) -> float:
    return [v for start, end, v in q.pieces if start <= t < end][0]


def test_fourier_rejects_bad_index():
    with pytest.raises(InvalidInputError):
        fourier_coeffs(PeriodicPotential(), 0)


def test_parity():
    assert is_even(PeriodicPotential())
    assert is_even(cos_potential(64))
    assert not is_even(delta_potential(0.7, 1.0))
    assert is_even(PeriodicPotential(deltas=((0.3, 2.0), (0.7, 2.0))))


def test_random_potential_shape():
    q = random_potential(np.random.default_rng(3), segments=4, amplitude=3.0)
    assert len(q.segments) == 4
    assert all(abs(v) <= 3.0 for _, v in q.segments)


def test_tube_test_potential_position():
    eps = 0.01
    q = tube_test_potential(4, 1, eps)
    (position, weight), = q.deltas
    assert weight == pytest.approx(100.0)
    assert position == pytest.approx(0.5 + math.cos(math.pi / 4) * eps + eps * eps)
    with pytest.raises(InvalidInputError):
        tube_test_potential(4, 2, eps)


@pytest.mark.parametrize("segments", [
    ((0.1, 1.0),),
    ((0.0, 1.0), (0.5, 2.0), (0.4, 0.0)),
    ((0.0, 1.0), (1.0, 2.0)),
    ((0.0, float("nan")),),
])
def test_invalid_segments(segments):
    with pytest.raises(ValidationError):
        PeriodicPotential(segments=segments)


def test_invalid_delta_position():
    with pytest.raises(ValidationError):
        PeriodicPotential(deltas=((1.0, 1.0),))
