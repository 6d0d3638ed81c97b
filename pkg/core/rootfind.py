"""
Real root isolation and complex zero counting.

All brackets and tolerances live in the signed coordinate
z = sign(lambda) * sqrt(|lambda|), so lambda = z*|z|. On lambda > 0 this is
the usual z = sqrt(lambda), where zeros of the Hill functions are spaced
about pi apart; negative energies get negative z.

Covers:
- Dense scans with sign-change refinement and tangency detection
- Single roots and root pairs between interlacing anchors
- Localization disks for the three zero families and winding-number counts
- Numerical determination of n0 (first index from which the disk counts hold)
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import InvalidInputError, NumericFailure
from .lyapunov import TubeAngle, dminus_values, dplus_values, rho_values
from .models import PeriodicPotential

logger = logging.getLogger(__name__)

TOL_ROOT = 1e-12
TOL_TANG = 1e-9
SCAN_STEP = 0.02

# Argument principle
MIN_SAMPLES = 256
MAX_SAMPLES = 2 ** 14
INTEGER_WINDOW = 0.25
BOUNDARY_RATIO = 1e-6

# find_n0
N0_START = 2
N0_WINDOW = 6
N0_LIMIT = 64

FAMILIES = ("antiperiodic", "periodic", "resonance")

RealFunction = Callable[[np.ndarray], np.ndarray]


def lam_from_z(z):
    """lambda = z*|z|."""
    return z * np.abs(z)


def z_from_lam(lam):
    """Inverse of lam_from_z."""
    return np.sign(lam) * np.sqrt(np.abs(lam))


@dataclass(frozen=True)
class Bracket:
    """Interval [z_lo, z_hi] of the signed z coordinate."""
    z_lo: float
    z_hi: float
    expected_count: Optional[int] = None

    def __post_init__(self):
        if not self.z_lo < self.z_hi:
            raise InvalidInputError(f"bracket needs z_lo < z_hi, got ({self.z_lo}, {self.z_hi})")

    @property
    def as_tuple(self) -> Tuple[float, float]:
        return (self.z_lo, self.z_hi)


@dataclass(frozen=True)
class Disk:
    """Disk |z - center| < radius in the z plane with the zero count it should hold."""
    center: complex
    radius: float
    expected_count: Optional[int] = None

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidInputError(f"disk radius must be positive, got {self.radius}")

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius

    @property
    def real_span(self) -> Tuple[float, float]:
        """Projection of the disk onto the real z axis."""
        x = float(np.real(self.center))
        return (x - self.radius, x + self.radius)


@dataclass(frozen=True)
class RealRoot:
    z: float
    multiplicity: int = 1

    @property
    def lam(self) -> float:
        return float(lam_from_z(self.z))


def _scalar(f: RealFunction) -> Callable[[float], float]:
    """Wrap a vectorized function of lambda as a scalar function of z."""
    def g(z: float) -> float:
        return float(np.real(f(np.array([lam_from_z(z)]))[0]))
    return g


# ============================================================================
# REAL ROOTS
# ============================================================================


def single_root(
    f: RealFunction,
    z_lo: float,
    z_hi: float,
    tol: float = TOL_ROOT,
    tol_tang: float = TOL_TANG
) -> float:
    """
    Refine the unique sign change of f on [z_lo, z_hi].

    An endpoint where |f| <= tol_tang with no sign change is accepted as
    the root (touching or coinciding with an anchor).

    Returns:
        Root in z
    """
    g = _scalar(f)
    fa, fb = g(z_lo), g(z_hi)
    if fa == 0.0:
        return z_lo
    if fb == 0.0:
        return z_hi
    if fa * fb > 0:
        if min(abs(fa), abs(fb)) <= tol_tang:
            return z_lo if abs(fa) <= abs(fb) else z_hi
        raise NumericFailure("no sign change in bracket", bracket=(z_lo, z_hi))

    z, info = brentq(g, z_lo, z_hi, xtol=tol, maxiter=200, full_output=True, disp=False)
    if not info.converged:
        raise NumericFailure("root refinement did not converge", bracket=(z_lo, z_hi))
    return z


def root_pair(
    f: RealFunction,
    z_lo: float,
    z_split: float,
    z_hi: float,
    tol: float = TOL_ROOT,
    tol_tang: float = TOL_TANG
) -> Tuple[float, float, bool]:
    """
    Two roots of f on [z_lo, z_hi] around a peak: f < 0 at the ends, f > 0
    between the roots.

    If f(z_split) > tol_tang the roots are refined on either side of z_split.
    Otherwise the maximum of f is located; a positive maximum becomes the
    new split, a maximum within tol_tang of zero is a double root.

    Args:
        f: Vectorized function of lambda
        z_lo, z_hi: Bracket in z
        z_split: Expected location of the peak

    Returns:
        (z_minus, z_plus, degenerate)
    """
    g = _scalar(f)
    f_split = g(z_split)
    peak, f_peak = z_split, f_split

    if not f_peak > tol_tang:
        grid = np.linspace(z_lo, z_hi, 65)
        values = np.real(f(lam_from_z(grid)))
        i = int(np.argmax(values))
        a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        res = minimize_scalar(lambda t: -g(t), bounds=(a, b), method="bounded",
                              options={"xatol": tol})
        candidates = [(float(-res.fun), float(res.x)), (float(values[i]), float(grid[i])),
                      (f_split, z_split)]
        f_peak, peak = max(candidates)

        if not f_peak > tol_tang:
            if f_peak >= -tol_tang:
                return peak, peak, True
            raise NumericFailure(
                f"expected a root pair, maximum of f is {f_peak:.3e}",
                bracket=(z_lo, z_hi)
            )

    z_minus = single_root(f, z_lo, peak, tol, tol_tang)
    z_plus = single_root(f, peak, z_hi, tol, tol_tang)
    return z_minus, z_plus, False


def real_roots(
    f: RealFunction,
    bracket: Bracket,
    tol: float = TOL_ROOT,
    tol_tang: float = TOL_TANG,
    step: float = SCAN_STEP
) -> List[RealRoot]:
    """
    All real roots of f in a bracket.

    Scans on a uniform z grid, refines every sign change with brentq and
    reports local minima of |f| at or below tol_tang as double roots.
    The bracket is closed: an end where |f| <= tol_tang is a root too.

    Args:
        f: Vectorized real function of lambda
        bracket: Interval in z
        tol: Refinement tolerance in z
        tol_tang: Tangency threshold on |f|
        step: Scan step in z

    Returns:
        Roots sorted by z

    Example:
        >>> [round(r.z, 6) for r in real_roots(lambda lam: np.cos(np.sqrt(lam)), Bracket(0.1, 10))]
        [1.570796, 4.712389, 7.853982]
    """
    z_lo, z_hi = bracket.as_tuple
    n_points = max(3, int(math.ceil((z_hi - z_lo) / step)) + 1)
    grid = np.linspace(z_lo, z_hi, n_points)
    values = np.real(np.asarray(f(lam_from_z(grid)), dtype=complex))
    signs = np.sign(values)
    g = _scalar(f)

    roots: List[RealRoot] = []
    for i in np.flatnonzero(signs == 0):
        left = signs[i - 1] if i > 0 else 0
        right = signs[i + 1] if i + 1 < n_points else 0
        roots.append(RealRoot(float(grid[i]), 2 if left * right > 0 else 1))

    for i in np.flatnonzero(signs[:-1] * signs[1:] < 0):
        roots.append(RealRoot(single_root(f, grid[i], grid[i + 1], tol, tol_tang)))

    magnitude = np.abs(values)
    for i in range(1, n_points - 1):
        if signs[i - 1] * signs[i] <= 0 or signs[i] * signs[i + 1] <= 0:
            continue
        if magnitude[i] > magnitude[i - 1] or magnitude[i] > magnitude[i + 1]:
            continue
        res = minimize_scalar(lambda t: abs(g(t)), bounds=(grid[i - 1], grid[i + 1]),
                              method="bounded", options={"xatol": tol})
        if res.fun <= tol_tang:
            roots.append(RealRoot(float(res.x), 2))

    # both ends are part of the bracket
    for i in (0, n_points - 1):
        if signs[i] != 0 and magnitude[i] <= tol_tang and all(abs(r.z - grid[i]) > grid[1] - grid[0] for r in roots):
            roots.append(RealRoot(float(grid[i])))

    roots.sort(key=lambda r: r.z)
    if bracket.expected_count is not None:
        found = sum(r.multiplicity for r in roots)
        if found != bracket.expected_count:
            raise NumericFailure(
                f"expected {bracket.expected_count} roots, found {found}",
                bracket=bracket.as_tuple
            )
    return roots


# ============================================================================
# LOCALIZATION DISKS
# ============================================================================


def _periodic_centers(a: TubeAngle, n: int) -> List[Tuple[float, int]]:
    """Centers and zero counts of the periodic disks of index n."""
    base = math.pi * n + math.pi / 2
    if a.is_middle:
        shift = math.asin(math.sqrt(5.0) / 3.0)
        return [(base - shift, 2), (base + shift, 2)]
    centers = []
    for inner in (-1.0, 1.0):
        shift = math.asin(min(1.0, math.sqrt(5.0 + inner * 4.0 * abs(a.c)) / 3.0))
        if abs(shift - math.pi / 2) < 1e-12:
            # k = 0: the outer pair meets at pi*(n + 1) as one double zero;
            # pi*n belongs to index n - 1
            centers.append((base + math.pi / 2, 2))
            continue
        centers += [(base - shift, 1), (base + shift, 1)]
    return sorted(centers)


def localization_disks(kind: str, a: TubeAngle, n: int) -> List[Disk]:
    """
    Disks of index n that hold the large-energy zeros.

    - antiperiodic: centers pi*n + pi/2 +- arcsin(1/3), radius 1/3, two zeros each
    - periodic: centers pi*n + pi/2 +- arcsin(sqrt(5 +- 4|c_k|)/3), radius 1/3,
      one zero each; for k = 0 two of them meet at a multiple of pi and that
      disk holds a double zero, for k = N/2 the two pairs coincide. The
      radius shrinks below 1/3 when neighbouring centers come closer than 2/3
    - resonance: centers pi*n - pi/2 +- arcsin(s_k/3), radius s_k/3, one zero
      each; k in {0, N/2} is rejected

    Returns:
        Disks sorted by center
    """
    base = math.pi * n + math.pi / 2
    if kind == "antiperiodic":
        shift = math.asin(1.0 / 3.0)
        disks = [Disk(base - shift, 1.0 / 3.0, 2), Disk(base + shift, 1.0 / 3.0, 2)]
    elif kind == "periodic":
        nearby = sorted(c for m in (n - 1, n, n + 1) for c, _ in _periodic_centers(a, m))
        spacing = min(right - left for left, right in zip(nearby, nearby[1:]))
        radius = min(1.0 / 3.0, 0.5 * spacing)
        disks = [Disk(center, radius, count) for center, count in _periodic_centers(a, n)]
    elif kind == "resonance":
        if not a.generic:
            raise InvalidInputError(
                f"resonance disks need k not in {{0, N/2}}, got k={a.k}, N={a.N}"
            )
        shift = math.asin(a.s / 3.0)
        base = math.pi * n - math.pi / 2
        disks = [Disk(base - shift, a.s / 3.0, 1), Disk(base + shift, a.s / 3.0, 1)]
    else:
        raise InvalidInputError(f"unknown disk family '{kind}'")
    return sorted(disks, key=lambda d: d.center.real)


def scan_step(a: TubeAngle, step: float = SCAN_STEP) -> float:
    """Scan step capped at a quarter of the smallest asymptotic zero spacing."""
    spacings = [2 * math.asin(1.0 / 3.0), math.pi - 2 * math.asin(1.0 / 3.0)]
    inner = math.asin(math.sqrt(5.0 - 4.0 * abs(a.c)) / 3.0)
    outer = math.asin(min(1.0, math.sqrt(5.0 + 4.0 * abs(a.c)) / 3.0))
    spacings += [outer - inner, 2 * inner, math.pi - 2 * outer]
    if a.generic:
        spacings.append(2 * math.asin(a.s / 3.0))
    positive = [d for d in spacings if d > 1e-12]
    return min(step, 0.25 * min(positive))


# ============================================================================
# ARGUMENT PRINCIPLE
# ============================================================================


class _BoundaryProximity(Exception):
    pass


def _near_zero(z: np.ndarray, values: np.ndarray) -> bool:
    """
    True when some sample of f is tiny against the growth trend of |f|.

    The functions grow like exp(p*|Im z|), so log|f| is fitted linearly in
    |Im z| over the contour and a zero close to it shows up as a residual
    below log(BOUNDARY_RATIO).
    """
    magnitude = np.abs(values)
    if not np.all(np.isfinite(magnitude)) or not np.all(magnitude > 0):
        return True
    x = np.abs(z.imag)
    y = np.log(magnitude)
    if np.ptp(x) > 0:
        slope, intercept = np.polyfit(x, y, 1)
        trend = slope * x + intercept
    else:
        trend = np.full_like(y, np.median(y))
    return bool((y - trend).min() <= math.log(BOUNDARY_RATIO))


def _winding(f, center: complex, radius: float, plane: str = "z") -> int:
    """
    Winding number of f along the circle |w - center| = radius.

    plane="z" evaluates f(w^2); plane="lambda" evaluates f(w).
    """
    previous = None
    winding = float("nan")
    samples = MIN_SAMPLES
    while samples <= MAX_SAMPLES:
        theta = 2.0 * np.pi * np.arange(samples) / samples
        w = center + radius * np.exp(1j * theta)
        values = np.asarray(f(w * w if plane == "z" else w), dtype=complex)

        if _near_zero(w if plane == "z" else np.sqrt(w), values):
            raise _BoundaryProximity()

        ratio = np.roll(values, -1) / values
        winding = float(np.angle(ratio).sum() / (2.0 * np.pi))
        nearest = int(round(winding))
        close = abs(winding - nearest) < INTEGER_WINDOW
        if close and previous == nearest:
            return nearest
        previous = nearest if close else None
        samples *= 2
    raise NumericFailure(f"winding number did not settle (last value {winding:.3f})")


def count_zeros(f: Callable[[np.ndarray], np.ndarray], disk: Disk) -> int:
    """
    Number of zeros of lambda -> f(lambda) with sqrt(lambda) in the disk.

    The winding number of f(z^2) around the circle, with boundary samples
    doubled from 256 until two successive estimates agree on an integer.
    A boundary passing too close to a zero is retried at radius +5% and -5%.

    Args:
        f: Vectorized complex-analytic function of lambda
        disk: Disk in the z plane

    Returns:
        Zero count with multiplicity
    """
    for scale in (1.0, 1.05, 0.95):
        try:
            return _winding(f, disk.center, disk.radius * scale)
        except _BoundaryProximity:
            logger.debug(f"zero near boundary of disk at {disk.center} (scale {scale}), retrying")
    raise NumericFailure(
        f"zero too close to the boundary of disk |z - {disk.center:.6g}| < {disk.radius:.6g}",
        bracket=disk.real_span
    )


# ============================================================================
# n0
# ============================================================================


def family_function(q: PeriodicPotential, a: TubeAngle, kind: str) -> Callable[[np.ndarray], np.ndarray]:
    """
    The analytic function whose zeros a disk family localizes:
    D_0^- (antiperiodic), D_k^+ (periodic) or rho_k (resonance).
    """
    from .hill import monodromy_grid

    if kind not in FAMILIES:
        raise InvalidInputError(f"unknown disk family '{kind}'")

    def evaluate(lam: np.ndarray) -> np.ndarray:
        grid = monodromy_grid(q, np.asarray(lam, dtype=complex))
        if kind == "antiperiodic":
            return dminus_values(grid.F, grid.Fminus, a)
        if kind == "periodic":
            return dplus_values(grid.F, grid.Fminus, a)
        return rho_values(grid.F, grid.Fminus, a)

    return evaluate


def families_for(a: TubeAngle) -> Tuple[str, ...]:
    return FAMILIES if a.generic else FAMILIES[:2]


def disks_hold(q: PeriodicPotential, a: TubeAngle, kind: str, n: int) -> bool:
    """True when every disk of index n holds its asserted count."""
    return _disks_hold(q, a.N, a.k, kind, n)


@lru_cache(maxsize=4096)
def _disks_hold(q: PeriodicPotential, N: int, k: int, kind: str, n: int) -> bool:
    a = TubeAngle(N, k)
    f = family_function(q, a, kind)
    for disk in localization_disks(kind, a, n):
        try:
            found = count_zeros(f, disk)
        except NumericFailure as exc:
            logger.debug(f"{kind} disk n={n}: {exc}")
            return False
        if found != disk.expected_count:
            logger.debug(f"{kind} disk n={n} at {disk.center:.6f}: {found} zeros, expected {disk.expected_count}")
            return False
    return True


def find_n0(q: PeriodicPotential, a: TubeAngle, limit: int = N0_LIMIT) -> int:
    """
    Smallest n* >= 2 such that the disks of every family hold their counts
    for all n in [n*, n* + 5].

    Computed per family and maximized over families.

    Raises:
        NumericFailure: no such n* below `limit`
    """
    n0 = N0_START
    for kind in families_for(a):
        run = 0
        n = N0_START
        while run < N0_WINDOW:
            if n - run > limit:
                raise NumericFailure(
                    f"no n0 below {limit} for the {kind} family (potential too rough?)",
                    k=a.k, n=n
                )
            run = run + 1 if disks_hold(q, a, kind, n) else 0
            n += 1
        family_n0 = n - N0_WINDOW
        logger.debug(f"k={a.k}: {kind} family settles at n={family_n0}")
        n0 = max(n0, family_n0)
    logger.info(f"k={a.k}: n0={n0}")
    return n0


def low_energy_counts(q: PeriodicPotential, a: TubeAngle, n0: int) -> Dict[str, Tuple[int, int]]:
    """
    Zero counts of each family inside the low-energy region next to n0.

    D_0^- has 4*n0 zeros with |z| < pi*n0, D_k^+ has 4*n0 + 2 zeros with
    |z| < pi*n0 + pi/2, and rho_k (generic k) has 2*n0 zeros with |z| < pi*n0.

    Returns:
        {family: (found, expected)}
    """
    regions = {
        "antiperiodic": (math.pi * n0, 4 * n0),
        "periodic": (math.pi * n0 + math.pi / 2, 4 * n0 + 2),
        "resonance": (math.pi * n0, 2 * n0),
    }
    counts = {}
    for kind in families_for(a):
        radius, expected = regions[kind]
        f = family_function(q, a, kind)
        counts[kind] = (_count_in_lambda_disk(f, radius * radius), expected)
    return counts


def _count_in_lambda_disk(f, radius: float) -> int:
    """Zeros of f with |lambda| < radius."""
    for scale in (1.0, 1.05, 0.95):
        try:
            return _winding(f, 0.0, radius * scale, plane="lambda")
        except _BoundaryProximity:
            logger.debug(f"zero near |lambda| = {radius * scale:.6g}, retrying")
    raise NumericFailure(f"zero too close to the circle |lambda| = {radius:.6g}")
