"""
Hill operator quantities of a 1-periodic potential.

Covers:
- Monodromy of the fundamental solutions theta, phi at t = 1 (scalar and
  vectorized over lambda grids)
- Hill discriminant F = (phi1' + theta1)/2 and anti-discriminant
  F_- = (phi1' - theta1)/2
- Dirichlet eigenvalues mu_n, Lyapunov zeros eta_n and the Hill band edges
  lambda~_n^+- (zeros of F -+ 1)
- Interlacing anchors eta_1 < mu_1 < eta_2 < ... used to isolate roots
- Leading large-energy asymptotics of F and F_-
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from .errors import InvalidInputError, NumericFailure
from .models import (
    EigenKind,
    HillAnchor,
    HillGap,
    HillReport,
    LabeledEigenvalue,
    PeriodicPotential,
)
from .rootfind import (
    TOL_ROOT,
    TOL_TANG,
    Bracket,
    lam_from_z,
    real_roots,
    root_pair,
    single_root,
    z_from_lam,
)

logger = logging.getLogger(__name__)

HILL_STEP = 0.05
SERIES_THRESHOLD = 1e-8
CHUNK_ENTRIES = 2 ** 18
MAX_WINDOWS = 64


# ============================================================================
# TRANSFER MATRICES
# ============================================================================


class TransferChain:
    """
    A potential flattened into elementary pieces in position order.

    A piece is either a constant segment (length x, value v) or a delta
    jump (length 0, weight w). Segment pieces map (y, y') by
    [[c, s], [-w s, c]] with w = lambda - v; a delta maps by [[1, 0], [w, 1]].
    """

    def __init__(self, q: PeriodicPotential):
        lengths, values, weights = [], [], []

        def add(length, value, weight):
            lengths.append(length)
            values.append(value)
            weights.append(weight)

        for start, end, value in q.pieces:
            position = start
            for a, w in q.deltas:
                if not start <= a < end:
                    continue
                if a > position:
                    add(a - position, value, 0.0)
                add(0.0, 0.0, w)
                position = a
            if end > position:
                add(end - position, value, 0.0)

        self.lengths = np.array(lengths, dtype=float)
        self.values = np.array(values, dtype=float)
        self.weights = np.array(weights, dtype=float)

    def __len__(self):
        return len(self.lengths)

    def _element_matrices(self, lam: np.ndarray) -> np.ndarray:
        w = lam[:, None] - self.values[None, :]
        x = self.lengths[None, :]
        wx2 = w * x * x
        small = np.abs(wx2) < SERIES_THRESHOLD

        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            if np.iscomplexobj(w):
                k = np.sqrt(w)
                c = np.cos(k * x)
                s = np.sin(k * x) / np.where(small, 1.0, k)
            else:
                k = np.sqrt(np.abs(w))
                oscillating = w > 0
                c = np.where(oscillating, np.cos(k * x), np.cosh(k * x))
                s = np.where(oscillating, np.sin(k * x), np.sinh(k * x)) / np.where(small, 1.0, k)

        c = np.where(small, 1.0 - wx2 / 2.0 + wx2 * wx2 / 24.0, c)
        s = np.where(small, x * (1.0 - wx2 / 6.0 + wx2 * wx2 / 120.0), s)
        d = -w * s + self.weights[None, :]

        return np.stack([np.stack([c, s], axis=-1), np.stack([d, c], axis=-1)], axis=-2)

    def product(self, lam: np.ndarray) -> np.ndarray:
        """
        Monodromy matrices for a 1-D array of lambda values.

        Returns:
            Array of shape (len(lam), 2, 2)
        """
        mats = self._element_matrices(lam)
        while mats.shape[1] > 1:
            if mats.shape[1] % 2:
                eye = np.broadcast_to(np.eye(2, dtype=mats.dtype), (mats.shape[0], 1, 2, 2))
                mats = np.concatenate([mats, eye], axis=1)
            mats = mats[:, 1::2] @ mats[:, 0::2]
        return mats[:, 0]


@lru_cache(maxsize=32)
def chain_for(q: PeriodicPotential) -> TransferChain:
    return TransferChain(q)


# ============================================================================
# MONODROMY
# ============================================================================


@dataclass(frozen=True)
class MonodromyData:
    """Monodromy entries at one lambda plus the derived F and F_-."""
    lam: Union[float, complex]
    theta1: Union[float, complex]
    theta1p: Union[float, complex]
    phi1: Union[float, complex]
    phi1p: Union[float, complex]
    F: Union[float, complex] = field(init=False)
    Fminus: Union[float, complex] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "F", (self.phi1p + self.theta1) / 2)
        object.__setattr__(self, "Fminus", (self.phi1p - self.theta1) / 2)

    @property
    def determinant(self):
        return self.theta1 * self.phi1p - self.theta1p * self.phi1


@dataclass
class MonodromyGrid:
    """Monodromy entries over an array of lambda values."""
    lam: np.ndarray
    theta1: np.ndarray
    theta1p: np.ndarray
    phi1: np.ndarray
    phi1p: np.ndarray

    @property
    def F(self) -> np.ndarray:
        return (self.phi1p + self.theta1) / 2

    @property
    def Fminus(self) -> np.ndarray:
        return (self.phi1p - self.theta1) / 2


def monodromy_grid(q: PeriodicPotential, lam) -> MonodromyGrid:
    """
    Vectorized monodromy over a lambda grid (real or complex).

    The grid is processed in chunks to bound memory.
    """
    lam = np.atleast_1d(np.asarray(lam))
    if not np.iscomplexobj(lam):
        lam = lam.astype(float)
    chain = chain_for(q)
    rows = max(1, CHUNK_ENTRIES // max(1, len(chain)))

    flat = lam.ravel()
    out = np.empty((flat.size, 2, 2), dtype=flat.dtype)
    for start in range(0, flat.size, rows):
        out[start:start + rows] = chain.product(flat[start:start + rows])

    shape = lam.shape
    return MonodromyGrid(
        lam=lam,
        theta1=out[:, 0, 0].reshape(shape),
        theta1p=out[:, 1, 0].reshape(shape),
        phi1=out[:, 0, 1].reshape(shape),
        phi1p=out[:, 1, 1].reshape(shape),
    )


def monodromy(q: PeriodicPotential, lam: Union[float, complex]) -> MonodromyData:
    """
    Monodromy at a single spectral parameter.

    Real lambda gives real (float) entries.

    Example:
        >>> m = monodromy(PeriodicPotential(), (math.pi / 2) ** 2)
        >>> round(m.phi1, 12), round(m.theta1p, 12)
        (0.636619772368, -1.570796326795)
    """
    real = not isinstance(lam, complex)
    value = float(lam) if real else complex(lam)
    grid = monodromy_grid(q, np.array([value]))
    cast = float if real else complex
    return MonodromyData(
        lam=value,
        theta1=cast(grid.theta1[0]),
        theta1p=cast(grid.theta1p[0]),
        phi1=cast(grid.phi1[0]),
        phi1p=cast(grid.phi1p[0]),
    )


def hill_function(q: PeriodicPotential, which: str) -> Callable[[np.ndarray], np.ndarray]:
    """
    A vectorized function of lambda: 'F', 'Fminus', 'phi1' or 'theta1'.
    """
    if which not in ("F", "Fminus", "phi1", "theta1"):
        raise InvalidInputError(f"unknown Hill function '{which}'")

    def evaluate(lam):
        return getattr(monodromy_grid(q, lam), which)

    return evaluate


# ============================================================================
# ASYMPTOTICS
# ============================================================================


def asymptotic_F(q: PeriodicPotential, lam):
    """cos z + q0 sin z / (2z), the leading terms of F for large |lambda|."""
    z = np.sqrt(np.asarray(lam, dtype=complex))
    q0 = sum(v * (e - s) for s, e, v in q.pieces) + sum(w for _, w in q.deltas)
    return np.cos(z) + q0 * np.sin(z) / (2 * z)


def asymptotic_Fminus(q: PeriodicPotential, lam):
    """(1/(2z)) * integral of q(t) sin(z(2t - 1)) dt, the leading term of F_-."""
    z = np.sqrt(np.asarray(lam, dtype=complex))
    total = np.zeros_like(z)
    for start, end, value in q.pieces:
        total += value * (np.cos(z * (2 * start - 1)) - np.cos(z * (2 * end - 1))) / (2 * z)
    for a, w in q.deltas:
        total += w * np.sin(z * (2 * a - 1))
    return total / (2 * z)


# ============================================================================
# AUXILIARY HILL SPECTRA
# ============================================================================


def _zeros_up_to(f, z_lo: float, z_hi: float, step: float = HILL_STEP) -> List[float]:
    """Simple zeros of f in (z_lo, z_hi]; a zero sitting on z_hi is kept."""
    if z_hi <= z_lo:
        return []
    limit = z_hi + 10 * TOL_ROOT * max(1.0, abs(z_hi))
    roots = [r for r in real_roots(f, Bracket(z_lo, z_hi + step), step=step) if r.z <= limit]
    for r in roots:
        if r.multiplicity != 1:
            raise NumericFailure("expected only simple zeros", bracket=(z_lo, z_hi))
    return [r.z for r in roots]


def _first_zeros(f, z_start: float, count: int, step: float = HILL_STEP) -> List[float]:
    """The first `count` zeros of f above z_start, scanning window by window."""
    found: List[float] = []
    lo = z_start
    hi = max(lo, 0.0) + math.pi * (count + 1)
    for _ in range(MAX_WINDOWS):
        for z in _zeros_up_to(f, lo, hi, step):
            if not found or z - found[-1] > 1e-9:
                found.append(z)
        if len(found) >= count:
            return found[:count]
        lo, hi = hi, hi + math.pi * (count - len(found) + 1)
    raise NumericFailure(f"found only {len(found)} of {count} zeros", bracket=(z_start, hi))


def _labeled(zs: List[float], kind: EigenKind) -> List[LabeledEigenvalue]:
    return [
        LabeledEigenvalue(value=float(lam_from_z(z)), kind=kind, n=i)
        for i, z in enumerate(zs, start=1)
    ]


def dirichlet_spectrum(q: PeriodicPotential, lambda_max: float) -> List[LabeledEigenvalue]:
    """
    Zeros mu_n of phi(1, lambda) up to lambda_max.

    Args:
        q: Potential
        lambda_max: Upper end of the search

    Returns:
        Labeled Dirichlet eigenvalues, n = 1, 2, ...
    """
    if not math.isfinite(lambda_max):
        raise InvalidInputError("lambda_max must be finite")
    zs = _zeros_up_to(hill_function(q, "phi1"), float(z_from_lam(q.lower_bound())),
                      float(z_from_lam(lambda_max)))
    return _labeled(zs, EigenKind.DIRICHLET)


def lyapunov_zeros(q: PeriodicPotential, lambda_max: float) -> List[LabeledEigenvalue]:
    """Zeros eta_n of the Hill discriminant up to lambda_max."""
    if not math.isfinite(lambda_max):
        raise InvalidInputError("lambda_max must be finite")
    zs = _zeros_up_to(hill_function(q, "F"), float(z_from_lam(q.lower_bound())),
                      float(z_from_lam(lambda_max)))
    return _labeled(zs, EigenKind.LYAPUNOV_ZERO)


@dataclass(frozen=True)
class HillStructure:
    """
    Interlacing anchors of a potential over n_cells cells.

    eta_z holds eta_1..eta_{n_cells+1} and mu_z holds mu_1..mu_{n_cells},
    all in the signed z coordinate; eta_1 < mu_1 < eta_2 < mu_2 < ...
    edges[n] = (lambda~_n^-, lambda~_n^+, degenerate), edges[0] = (-inf, lambda~_0^+).
    """
    z_low: float
    eta_z: Tuple[float, ...]
    mu_z: Tuple[float, ...]
    edges: Tuple[Tuple[float, float, bool], ...]

    @property
    def n_cells(self) -> int:
        return len(self.mu_z)

    @property
    def lam_low(self) -> float:
        return float(lam_from_z(self.z_low))

    def eta(self, n: int) -> float:
        """eta_n, 1-based."""
        return float(lam_from_z(self.eta_z[n - 1]))

    def mu(self, n: int) -> float:
        """mu_n, 1-based."""
        return float(lam_from_z(self.mu_z[n - 1]))


@lru_cache(maxsize=64)
def hill_anchors(
    q: PeriodicPotential,
    n_cells: int,
    tol: float = TOL_ROOT,
    tol_tang: float = TOL_TANG
) -> HillStructure:
    """
    Anchors and Hill gaps for cells 1..n_cells.

    Each Hill gap n >= 1 lies in [eta_n, eta_{n+1}] and contains mu_n;
    the edges are the roots of (-1)^n F - 1 there.

    Raises:
        NumericFailure: anchors do not interlace or a root pair is missing
    """
    if n_cells < 1:
        raise InvalidInputError(f"n_cells must be >= 1, got {n_cells}")

    z_low = float(z_from_lam(q.lower_bound()))
    F = hill_function(q, "F")
    eta_z = _first_zeros(F, z_low, n_cells + 1)
    mu_z = _first_zeros(hill_function(q, "phi1"), z_low, n_cells)

    for n in range(1, n_cells + 1):
        if not eta_z[n - 1] < mu_z[n - 1] < eta_z[n]:
            raise NumericFailure("eta and mu do not interlace", n=n,
                                 bracket=(eta_z[n - 1], eta_z[n]))

    edges = [(-math.inf, float(lam_from_z(single_root(lambda lam: F(lam) - 1.0, z_low, eta_z[0], tol, tol_tang))), False)]
    for n in range(1, n_cells + 1):
        sign = -1.0 if n % 2 else 1.0
        try:
            lo, hi, degenerate = root_pair(
                lambda lam, sign=sign: sign * F(lam) - 1.0,
                eta_z[n - 1], mu_z[n - 1], eta_z[n], tol, tol_tang
            )
        except NumericFailure as exc:
            raise NumericFailure(f"Hill gap: {exc.message}", n=n, bracket=exc.bracket) from exc
        edges.append((float(lam_from_z(lo)), float(lam_from_z(hi)), degenerate))

    logger.debug(f"Hill anchors for {n_cells} cells: eta_1={lam_from_z(eta_z[0]):.6g}")
    return HillStructure(z_low, tuple(eta_z), tuple(mu_z), tuple(edges))


def cells_below(q: PeriodicPotential, lambda_max: float) -> int:
    """Number of Lyapunov zeros eta_n <= lambda_max (at least 1)."""
    # inclusive: eta_n == lambda_max counts
    return max(1, len(lyapunov_zeros(q, lambda_max)))


def hill_band_edges(
    q: PeriodicPotential,
    lambda_max: float,
    tol: float = TOL_ROOT,
    tol_tang: float = TOL_TANG
) -> List[Tuple[float, float]]:
    """
    Hill gaps (lambda~_n^-, lambda~_n^+) with lambda~_n^- <= lambda_max.

    Entry 0 is (-inf, lambda~_0^+). Degenerate gaps have equal ends.

    Example:
        >>> [round(hi, 6) for _, hi in hill_band_edges(PeriodicPotential(), 50)]
        [0.0, 9.869604, 39.478418]
    """
    structure = hill_anchors(q, cells_below(q, lambda_max), tol, tol_tang)
    return [(lo, hi) for lo, hi, _ in structure.edges if lo <= lambda_max]


def hill_report(q: PeriodicPotential, lambda_max: float) -> HillReport:
    """Tables printed by the `hill` subcommand."""
    structure = hill_anchors(q, cells_below(q, lambda_max))
    anchors = []
    for n in range(1, structure.n_cells + 1):
        at_mu = monodromy(q, structure.mu(n))
        at_eta = monodromy(q, structure.eta(n))
        anchors.append(HillAnchor(
            n=n, eta=structure.eta(n), mu=structure.mu(n),
            F_at_mu=at_mu.F, Fminus_at_mu=at_mu.Fminus, Fminus_at_eta=at_eta.Fminus
        ))
    gaps = [
        HillGap(n=n, lo=lo, hi=hi, degenerate=degenerate)
        for n, (lo, hi, degenerate) in enumerate(structure.edges)
        if lo <= lambda_max
    ]
    return HillReport(
        potential=q,
        anchors=anchors,
        gaps=gaps,
        dirichlet=dirichlet_spectrum(q, lambda_max),
        lyapunov_zeros=lyapunov_zeros(q, lambda_max),
    )
