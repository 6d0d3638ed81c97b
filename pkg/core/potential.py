"""
Periodic potential construction and Fourier analysis.

Covers:
- Conversion of midpoint samples into the exact piecewise-constant form
- Closed-form Fourier coefficients q0, q_sn, q_cn (segments plus deltas)
- Evenness test q(t) = q(1 - t)
- The single-delta potentials used to produce non-even test cases
- Seeded random step potentials for the invariant checks
"""

import logging
import math
from typing import Callable, Iterable, List, Tuple

import numpy as np

from .errors import InvalidInputError
from .models import PeriodicPotential

logger = logging.getLogger(__name__)


def from_samples(samples: Iterable[float]) -> PeriodicPotential:
    """
    Build a step potential from M midpoint samples.

    Args:
        samples: Values f((m + 1/2)/M), m = 0..M-1

    Returns:
        PeriodicPotential with M equal-width segments and no deltas

    Example:
        >>> from_samples([5.0]).segments
        ((0.0, 5.0),)
    """
    values = [float(v) for v in samples]
    if not values:
        raise InvalidInputError("from_samples needs at least one sample")
    M = len(values)
    return PeriodicPotential(
        segments=tuple((m / M, v) for m, v in enumerate(values))
    )


def sampled(func: Callable[[np.ndarray], np.ndarray], M: int) -> PeriodicPotential:
    """Sample a vectorized 1-periodic function at M midpoints."""
    if M < 1:
        raise InvalidInputError(f"M must be positive, got {M}")
    t = (np.arange(M) + 0.5) / M
    return from_samples(np.asarray(func(t), dtype=float).tolist())


def random_potential(
    rng: np.random.Generator,
    segments: int = 4,
    amplitude: float = 3.0
) -> PeriodicPotential:
    """
    A random step potential: breakpoints uniform in (0.05, 0.95), values
    uniform in [-amplitude, amplitude], both rounded to 4 decimals.
    """
    if segments < 1:
        raise InvalidInputError(f"segments must be positive, got {segments}")
    while True:
        cuts = np.round(np.sort(rng.uniform(0.05, 0.95, segments - 1)), 4)
        if np.all(np.diff(np.concatenate(([0.0], cuts))) > 0):
            break
    values = np.round(rng.uniform(-amplitude, amplitude, segments), 4)
    starts = [0.0] + cuts.tolist()
    return PeriodicPotential(segments=tuple(zip(starts, values.tolist())))


def delta_potential(position: float, weight: float) -> PeriodicPotential:
    """A single delta of the given weight on top of q = 0."""
    return PeriodicPotential(deltas=((position, weight),))


def tube_test_potential(N: int, k: int, eps: float) -> PeriodicPotential:
    """
    The delta potential (1/eps)*delta(t - 1/2 - c_k*eps - eps^2).

    For small eps its anti-discriminant is close to c_k + eps on low
    energies, which pushes v_k above zero: the ν = 1 antiperiodic points
    then remain band edges and the two branch bands of small k separate.

    Args:
        N: Tube circumference index
        k: Quasi-momentum index, not 0 or N/2
        eps: Small nonzero parameter

    Returns:
        PeriodicPotential with one delta term
    """
    if eps == 0:
        raise InvalidInputError("eps must be nonzero")
    if k % N == 0 or 2 * k == N:
        raise InvalidInputError(f"k={k} must avoid 0 and N/2")
    c = math.cos(math.pi * k / N)
    position = 0.5 + c * eps + eps * eps
    return delta_potential(position, 1.0 / eps)


def fourier_coeffs(q: PeriodicPotential, n: int) -> Tuple[float, float, float]:
    """
    Exact Fourier data of q.

    Args:
        q: Potential
        n: Harmonic index, n >= 1

    Returns:
        (q0, q_sn, q_cn) with q0 = int q, q_sn = int q sin(2 pi n s) ds and
        q_cn = int q cos(2 pi n s) ds; a delta (a, w) adds w, w sin(2 pi n a)
        and w cos(2 pi n a)
    """
    if n < 1:
        raise InvalidInputError(f"harmonic index must be >= 1, got {n}")

    omega = 2.0 * math.pi * n
    q0 = qs = qc = 0.0
    for start, end, value in q.pieces:
        q0 += value * (end - start)
        qs += value * (math.cos(omega * start) - math.cos(omega * end)) / omega
        qc += value * (math.sin(omega * end) - math.sin(omega * start)) / omega
    for position, weight in q.deltas:
        q0 += weight
        qs += weight * math.sin(omega * position)
        qc += weight * math.cos(omega * position)
    return q0, qs, qc


def fourier_table(q: PeriodicPotential, n_max: int) -> List[Tuple[int, float, float]]:
    """(n, q_sn, q_cn) for n = 1..n_max."""
    return [(n, *fourier_coeffs(q, n)[1:]) for n in range(1, n_max + 1)]


def is_even(q: PeriodicPotential, tol: float = 1e-12) -> bool:
    """
    Test q(t) = q(1 - t) within tol in positions and values.

    Args:
        q: Potential
        tol: Positive tolerance

    Returns:
        True when the segments and the deltas are mirror symmetric
    """
    if tol <= 0:
        raise InvalidInputError("tol must be positive")

    pieces = q.pieces
    mirrored = [(1.0 - end, 1.0 - start, value) for start, end, value in pieces]

    cuts = sorted({p[0] for p in pieces} | {p[0] for p in mirrored} | {1.0})
    for left, right in zip(cuts, cuts[1:]):
        if right - left <= tol:
            continue
        mid = 0.5 * (left + right)
        if abs(_value_at(pieces, mid) - _value_at(mirrored, mid)) > tol:
            return False

    deltas = list(q.deltas)
    for position, weight in deltas:
        partner = [
            w for a, w in deltas
            if abs(a - (1.0 - position)) <= tol
        ]
        if not partner or min(abs(w - weight) for w in partner) > tol:
            return False
    return True


def _value_at(pieces: List[Tuple[float, float, float]], t: float) -> float:
    for start, end, value in pieces:
        if start <= t < end:
            return value
    return pieces[-1][2]
