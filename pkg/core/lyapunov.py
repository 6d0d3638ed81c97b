"""
Fiber Lyapunov functions of the armchair nanotube.

For each quasi-momentum index k the fiber operator H_k has the two-valued
Lyapunov function F_{k,1/2} = xi_k +- sqrt(rho_k), built from the Hill
discriminant F and the anti-discriminant F_- of the 1-periodic potential.

Covers:
- TubeAngle: s_k = sin(pi k/N), c_k = cos(pi k/N)
- Scalar evaluation (LyapunovData) and vectorized tables over lambda grids
- Discriminants D_k^+ (periodic) and D_k^- (antiperiodic)
- Band membership via the real inequalities in 9F^2, g_{k,nu}, h_nu,
  |F_-| and c_k^2, with no square-root branch on the real line
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import InvalidInputError

logger = logging.getLogger(__name__)

TOL_EDGE = 1e-9


@dataclass(frozen=True)
class TubeAngle:
    """
    Quasi-momentum data of the fiber k of an (N, N) armchair tube.

    s and c are computed from min(k, N - k), so s_{N-k} = s_k and
    c_{N-k}^2 = c_k^2 hold bit for bit.
    """

    N: int
    """Tube circumference index, N >= 1"""

    k: int
    """Quasi-momentum index, 0 <= k < N"""

    s: float = field(init=False)
    c: float = field(init=False)

    def __post_init__(self):
        if self.N < 1:
            raise InvalidInputError(f"N must be >= 1, got {self.N}")
        if not 0 <= self.k < self.N:
            raise InvalidInputError(f"k must lie in 0..{self.N - 1}, got {self.k}")
        m = self.mirror_index
        if 2 * m == self.N:
            s, c = 1.0, 0.0
        else:
            s = math.sin(math.pi * m / self.N)
            c = math.cos(math.pi * m / self.N)
            if m != self.k:
                c = -c
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "c", c)

    @property
    def mirror_index(self) -> int:
        """Representative min(k, N - k) of the pair {k, N - k}."""
        return min(self.k, self.N - self.k) if self.k else 0

    @property
    def s2(self) -> float:
        return self.s * self.s

    @property
    def c2(self) -> float:
        return self.c * self.c

    @property
    def is_zero(self) -> bool:
        return self.k == 0

    @property
    def is_middle(self) -> bool:
        """True for k = N/2, where c_k = 0."""
        return 2 * self.k == self.N

    @property
    def generic(self) -> bool:
        return not (self.is_zero or self.is_middle)

    def __repr__(self):
        return f"TubeAngle(N={self.N}, k={self.k}, s={self.s:.6f}, c={self.c:.6f})"


@dataclass(frozen=True)
class LyapunovData:
    """
    All k-dependent scalars at one spectral parameter.

    The factor quantities g, h, u, v, f are defined for real lambda only and
    are None otherwise; f is also None when c_k = 0.
    """
    lam: complex
    F: complex
    Fminus: complex
    angle: TubeAngle
    xi: complex
    rho: complex
    Fk1: complex
    Fk2: complex
    g1: Optional[float] = None
    g2: Optional[float] = None
    h1: Optional[float] = None
    h2: Optional[float] = None
    u: Optional[float] = None
    v: Optional[float] = None
    f: Optional[float] = None

    @property
    def is_real(self) -> bool:
        return self.g1 is not None

    @property
    def nine_F2(self) -> float:
        return 9.0 * float(np.real(self.F)) ** 2


# ============================================================================
# VECTORIZED BUILDING BLOCKS
# ============================================================================


def xi_values(F, Fminus, a: TubeAngle):
    """xi_k = (9F^2 - F_-^2 - 1)/2 - s_k^2."""
    return (9.0 * F * F - Fminus * Fminus - 1.0) / 2.0 - a.s2


def rho_values(F, Fminus, a: TubeAngle):
    """rho_k = (9F^2 - s_k^2) c_k^2 + s_k^2 F_-^2 (entire in lambda)."""
    return (9.0 * F * F - a.s2) * a.c2 + a.s2 * Fminus * Fminus


def factor_values(Fminus, a: TubeAngle) -> Dict[str, np.ndarray]:
    """
    Real-axis factor functions g_{k,1}, g_{k,2}, h_1, h_2, u_k, v_k.

    Args:
        Fminus: Real anti-discriminant values
        a: Tube angle

    Returns:
        Dict of arrays keyed g1, g2, h1, h2, u, v
    """
    A = np.abs(Fminus)
    root = 2.0 * np.sqrt(A * A + 4.0 * a.c2)
    base = 5.0 + A * A
    return {
        "g1": base - root,
        "g2": base + root,
        "h1": (1.0 - A) ** 2,
        "h2": (1.0 + A) ** 2,
        "u": A - a.s2,
        "v": A - a.c2,
    }


def branch_values(F, Fminus, a: TubeAngle) -> Tuple[np.ndarray, np.ndarray]:
    """
    F_{k,1}, F_{k,2} with the principal complex square root.

    On real lambda with rho > 0 this is the positive root, so F_{k,1} > F_{k,2}.
    """
    xi = xi_values(F, Fminus, a)
    root = np.sqrt(np.asarray(rho_values(F, Fminus, a), dtype=complex))
    return xi + root, xi - root


def dplus_values(F, Fminus, a: TubeAngle):
    """D_k^+ = 4(F_{k,1} - 1)(F_{k,2} - 1) on complex lambda."""
    f1, f2 = branch_values(F, Fminus, a)
    return 4.0 * (f1 - 1.0) * (f2 - 1.0)


def dminus_values(F, Fminus, a: TubeAngle):
    """D_k^- = 4(F_{k,1} + 1)(F_{k,2} + 1) on complex lambda; independent of k."""
    f1, f2 = branch_values(F, Fminus, a)
    return 4.0 * (f1 + 1.0) * (f2 + 1.0)


def membership_flags(
    nine_F2,
    Fminus_abs,
    rho,
    factors: Dict[str, np.ndarray],
    a: TubeAngle,
    tol: float = TOL_EDGE
):
    """
    Decide F_{k,nu} in [-1, 1] from real quantities only.

    F_{k,nu} <= 1   iff 9F^2 <= g_{k,nu}
    F_{k,1} >= -1   iff 9F^2 >= h_1 or |F_-| <= c_k^2
    F_{k,2} >= -1   iff 9F^2 >= h_2 or (9F^2 <= h_1 and |F_-| <= c_k^2)

    These hold where rho_k > 0; where rho_k < -tol both branches are
    non-real and neither belongs to the spectrum. Equalities within tol
    count as membership.

    Returns:
        (in_sigma1, in_sigma2) boolean arrays (or bools for scalars)
    """
    X = nine_F2
    small_fm = Fminus_abs <= a.c2 + tol
    real_branches = rho >= -tol
    below1 = X <= factors["g1"] + tol
    below2 = X <= factors["g2"] + tol
    above1 = (X >= factors["h1"] - tol) | small_fm
    above2 = (X >= factors["h2"] - tol) | ((X <= factors["h1"] + tol) & small_fm)
    return real_branches & below1 & above1, real_branches & below2 & above2


def lyapunov_table(F, Fminus, a: TubeAngle, tol: float = TOL_EDGE) -> Dict[str, np.ndarray]:
    """
    All real-axis quantities of fiber k over a lambda grid.

    Args:
        F: Real Hill discriminant values
        Fminus: Real anti-discriminant values
        a: Tube angle
        tol: Boundary tolerance for the membership bits

    Returns:
        Dict of arrays: xi, rho, g1, g2, h1, h2, u, v, F1_re, F1_im,
        F2_re, F2_im, in1, in2
    """
    F = np.asarray(F, dtype=float)
    Fminus = np.asarray(Fminus, dtype=float)
    factors = factor_values(Fminus, a)
    rho = rho_values(F, Fminus, a)
    f1, f2 = branch_values(F, Fminus, a)
    in1, in2 = membership_flags(9.0 * F * F, np.abs(Fminus), rho, factors, a, tol)
    table = {"xi": xi_values(F, Fminus, a), "rho": rho}
    table.update(factors)
    table.update({
        "F1_re": f1.real, "F1_im": f1.imag,
        "F2_re": f2.real, "F2_im": f2.imag,
        "in1": in1, "in2": in2,
    })
    return table


# ============================================================================
# SCALAR OPERATIONS
# ============================================================================


def evaluate(m, a: TubeAngle) -> LyapunovData:
    """
    Evaluate the fiber functions from a monodromy record.

    Args:
        m: MonodromyData (from core.hill.monodromy)
        a: Tube angle

    Returns:
        LyapunovData; factor quantities filled only on the real axis

    Example:
        >>> d = evaluate(monodromy(PeriodicPotential(), (math.pi / 2) ** 2), TubeAngle(4, 1))
        >>> round(d.xi.real, 12), round(d.rho.real, 12)
        (-1.0, -0.25)
    """
    F, Fm = m.F, m.Fminus
    real = all(isinstance(x, float) for x in (m.lam, F, Fm))

    xi = xi_values(F, Fm, a)
    rho = rho_values(F, Fm, a)
    if real:
        root = math.sqrt(rho) if rho >= 0 else 1j * math.sqrt(-rho)
    else:
        root = cmath.sqrt(rho)
    data = dict(lam=m.lam, F=F, Fminus=Fm, angle=a, xi=xi, rho=rho,
                Fk1=xi + root, Fk2=xi - root)

    if real:
        factors = {key: float(val) for key, val in factor_values(Fm, a).items()}
        data.update(factors)
        data["f"] = a.s2 * (1.0 - Fm * Fm / a.c2) if a.c2 > 0 else None
    return LyapunovData(**data)


def discriminants(d: LyapunovData) -> Tuple[complex, complex]:
    """
    D_k^+ and D_k^-.

    On real lambda the factorized forms (9F^2 - g_{k,1})(9F^2 - g_{k,2}) and
    (9F^2 - h_1)(9F^2 - h_2) are used; off the axis the product definition.
    """
    if d.is_real:
        X = d.nine_F2
        return (X - d.g1) * (X - d.g2), (X - d.h1) * (X - d.h2)
    return (
        4.0 * (d.Fk1 - 1.0) * (d.Fk2 - 1.0),
        4.0 * (d.Fk1 + 1.0) * (d.Fk2 + 1.0)
    )


def membership(d: LyapunovData, tol: float = TOL_EDGE) -> Tuple[bool, bool]:
    """
    Band membership (lambda in sigma_{k,1}, lambda in sigma_{k,2}).

    Args:
        d: LyapunovData at a real lambda
        tol: Boundary tolerance in the compared quantities

    Returns:
        Pair of booleans
    """
    if not d.is_real:
        raise InvalidInputError("membership is defined for real lambda only")
    factors = {key: getattr(d, key) for key in ("g1", "g2", "h1", "h2")}
    in1, in2 = membership_flags(d.nine_F2, abs(d.Fminus), d.rho, factors, d.angle, tol)
    return bool(in1), bool(in2)


def resonance_set_membership(d: LyapunovData, tol: float = TOL_EDGE) -> Dict[str, bool]:
    """
    The sets behind the band structure at a real lambda.

    S_nu = {h_nu <= 9F^2 <= g_{k,nu}} (branch inside [-1, 1] with real
    branch values), SR = {rho_k > 0, 9F^2 <= h_1, v_k <= 0} (both branches
    between the resonance and the antiperiodic point; empty for k = N/2),
    and sigma_nu = S_nu or SR.
    """
    X = d.nine_F2
    S1 = d.h1 - tol <= X <= d.g1 + tol
    S2 = d.h2 - tol <= X <= d.g2 + tol
    SR = (not d.angle.is_middle) and d.rho > tol and X <= d.h1 + tol and d.v <= tol
    return {"S1": S1, "S2": S2, "SR": SR, "sigma1": S1 or SR, "sigma2": S2 or SR}
