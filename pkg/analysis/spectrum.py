"""
Spectral assembly for the fiber operators H_k and the full nanotube operator.

Covers:
- Periodic / antiperiodic eigenvalues as roots of 9F^2 - g_{k,nu} and
  9F^2 - h_nu, isolated between the Hill anchors eta_n, mu_n
- Resonances r_{k,n}^+- (real zeros of rho_k inside the closed kappa_n)
- Band edges E_{nu,n}^{k,+-} with the antiperiodic-or-resonance decision
  driven by the sign of v_k
- Multiplicity map (2 or 4) and the classified gaps G_{k,n}
- Full-operator gaps G_n as intersections over k, with closed-form
  cross-checks, and the high-energy asymptotics of E_{2,2n}^+-
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.config import Tolerances
from core.errors import InvalidInputError, NumericFailure
from core.hill import HillStructure, cells_below, hill_anchors, monodromy, monodromy_grid
from core.lyapunov import TubeAngle, factor_values, rho_values, xi_values
from core.models import (
    AsymptoticRow,
    Band,
    EdgeDecision,
    EigenKind,
    FiberReport,
    Gap,
    GapKind,
    HillGap,
    Interval,
    LabeledEigenvalue,
    MultiplicityMap,
    MultiplicityPiece,
    PeriodicPotential,
    SpectrumReport,
)
from core.potential import fourier_coeffs, is_even
from core.rootfind import (
    Bracket,
    RealRoot,
    find_n0,
    lam_from_z,
    localization_disks,
    real_roots,
    root_pair,
    scan_step,
    single_root,
    z_from_lam,
)

logger = logging.getLogger(__name__)

REL_TOL = 1e-9
OVERLAP_U_TOL = 1e-6
MAX_LOWERING = 60

EdgeKey = Tuple[int, int, str]


def _close(a: float, b: float, tol: float = REL_TOL) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass
class FiberEdges:
    """Raw (unrounded) edge data of one fiber."""
    k: int
    periodic: Dict[EdgeKey, float] = field(default_factory=dict)
    resonances: Dict[int, List[RealRoot]] = field(default_factory=dict)
    edges: Dict[EdgeKey, LabeledEigenvalue] = field(default_factory=dict)
    raw: Dict[EdgeKey, float] = field(default_factory=dict)
    decisions: List[EdgeDecision] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    band_warnings: Dict[EdgeKey, str] = field(default_factory=dict)


class SpectrumSolver:
    """
    Shared Hill anchors of one potential plus the per-k assembly.

    The antiperiodic eigenvalues do not depend on k and are computed once
    at construction; `fiber(k)` is then safe to call from several threads.
    """

    def __init__(
        self,
        q: PeriodicPotential,
        N: int,
        n_cells: int,
        tolerances: Optional[Tolerances] = None,
        n0: Optional[int] = None
    ):
        if N < 1:
            raise InvalidInputError(f"N must be >= 1, got {N}")
        if n_cells < 1:
            raise InvalidInputError(f"n_cells must be >= 1, got {n_cells}")

        self.q = q
        self.N = N
        self.n_cells = n_cells
        self.n0 = n0
        self.tol = tolerances or Tolerances()
        self.structure: HillStructure = hill_anchors(q, n_cells, self.tol.tol_root, self.tol.tol_tang)
        self.z_low = self._safe_low()
        self.even = is_even(q)
        self.antiperiodic: Dict[EdgeKey, float] = self._antiperiodic_points()
        logger.info(f"Solver ready: N={N}, {n_cells} cells, lambda_low={lam_from_z(self.z_low):.6g}")

    # ------------------------------------------------------------------
    # scalar helpers
    # ------------------------------------------------------------------

    def _safe_low(self) -> float:
        """A z below which every factor 9F^2 - g, 9F^2 - h is positive."""
        lam = self.structure.lam_low
        for _ in range(MAX_LOWERING):
            m = monodromy(self.q, lam)
            A = abs(m.Fminus)
            g_max = 5.0 + A * A + 2.0 * math.sqrt(A * A + 4.0)
            if 9.0 * m.F * m.F > g_max + 1.0:
                return float(z_from_lam(lam))
            lam -= max(1.0, abs(lam))
        raise NumericFailure(f"could not find an energy below the spectrum (reached {lam:.6g})")

    def _factor(self, a: TubeAngle, key: str, sign: float = 1.0):
        q = self.q

        def f(lam):
            grid = monodromy_grid(q, lam)
            F = np.real(grid.F)
            return sign * (9.0 * F * F - factor_values(np.real(grid.Fminus), a)[key])

        return f

    def _rho(self, a: TubeAngle):
        q = self.q

        def f(lam):
            grid = monodromy_grid(q, lam)
            return rho_values(np.real(grid.F), np.real(grid.Fminus), a)

        return f

    def _fminus(self):
        q = self.q
        return lambda lam: np.real(monodromy_grid(q, lam).Fminus)

    def _pair(self, f, lo, split, hi, k, n):
        try:
            return root_pair(f, lo, split, hi, self.tol.tol_root, self.tol.tol_tang)
        except NumericFailure as exc:
            raise NumericFailure(exc.message, k=k, n=n, bracket=exc.bracket) from exc

    # ------------------------------------------------------------------
    # eigenvalues and resonances
    # ------------------------------------------------------------------

    def _antiperiodic_points(self) -> Dict[EdgeKey, float]:
        """
        lambda_{nu,2n-1}^{0,+-}: the pair of 9F^2 - h_nu around eta_n, inside
        [mu_{n-1}, mu_n] (mu_0 is the low end of the scan).
        """
        s = self.structure
        a0 = TubeAngle(self.N, 0)
        points = {}
        for nu in (1, 2):
            f = self._factor(a0, f"h{nu}", sign=-1.0)
            for n in range(1, self.n_cells + 1):
                left = self.z_low if n == 1 else s.mu_z[n - 2]
                lo, hi, _ = self._pair(f, left, s.eta_z[n - 1], s.mu_z[n - 1], None, n)
                p = 2 * n - 1
                points[(nu, p, "-")] = float(lam_from_z(lo))
                points[(nu, p, "+")] = float(lam_from_z(hi))
        return points

    def periodic_points(self, a: TubeAngle) -> Dict[EdgeKey, float]:
        """
        lambda_{nu,0}^{k,+} in (-inf, eta_1] and the pairs lambda_{nu,2j}^{k,+-}
        in [eta_j, eta_{j+1}] around mu_j.
        """
        s = self.structure
        points = {}
        for nu in (1, 2):
            f = self._factor(a, f"g{nu}")
            try:
                z0 = single_root(f, self.z_low, s.eta_z[0], self.tol.tol_root, self.tol.tol_tang)
            except NumericFailure as exc:
                raise NumericFailure(exc.message, k=a.k, n=0, bracket=exc.bracket) from exc
            points[(nu, 0, "+")] = float(lam_from_z(z0))
            for j in range(1, self.n_cells + 1):
                lo, hi, _ = self._pair(f, s.eta_z[j - 1], s.mu_z[j - 1], s.eta_z[j], a.k, j)
                points[(nu, 2 * j, "-")] = float(lam_from_z(lo))
                points[(nu, 2 * j, "+")] = float(lam_from_z(hi))
        return points

    def kappa(self, n: int) -> Tuple[float, float]:
        """Closed kappa_n = [lambda_{1,2n-1}^{0,-}, lambda_{1,2n-1}^{0,+}]."""
        p = 2 * n - 1
        return self.antiperiodic[(1, p, "-")], self.antiperiodic[(1, p, "+")]

    def resonance_roots(self, a: TubeAngle, n: int) -> List[RealRoot]:
        """
        Real zeros of rho_k in the closed kappa_n.

        k = 0 gives the double zero eta_n; k = N/2 gives the zeros of F_-
        (none at all for even q, where F_- vanishes identically).

        Raises:
            NumericFailure: odd number of zeros (with multiplicity)
        """
        if a.is_zero:
            return [RealRoot(self.structure.eta_z[n - 1], 2)]
        if a.is_middle and self.even:
            return []

        f = self._fminus() if a.is_middle else self._rho(a)
        lo, hi = (float(z_from_lam(x)) for x in self.kappa(n))
        if hi - lo <= self.tol.tol_root:
            value = abs(float(f(np.array([lam_from_z(lo)]))[0]))
            return [RealRoot(lo, 2)] if value <= self.tol.tol_tang else []

        try:
            roots = real_roots(f, Bracket(lo, hi), self.tol.tol_root, self.tol.tol_tang,
                               step=scan_step(a))
        except NumericFailure as exc:
            raise NumericFailure(exc.message, k=a.k, n=n, bracket=exc.bracket) from exc

        if a.is_middle:
            # zeros of F_- are zeros of rho = F_-^2 of twice the order
            return [RealRoot(r.z, 2 * r.multiplicity) for r in roots]
        if sum(r.multiplicity for r in roots) % 2:
            raise NumericFailure("odd number of resonances in kappa", k=a.k, n=n, bracket=(lo, hi))
        return roots

    # ------------------------------------------------------------------
    # band edges
    # ------------------------------------------------------------------

    def fiber_edges(self, k: int) -> FiberEdges:
        """All E_{nu,p}^{k,+-} with their attribution."""
        a = TubeAngle(self.N, k)
        data = FiberEdges(k=k, periodic=self.periodic_points(a))

        for (nu, p, sign), value in data.periodic.items():
            data.raw[(nu, p, sign)] = value
            data.edges[(nu, p, sign)] = LabeledEigenvalue(
                value=value, kind=EigenKind.PERIODIC, nu=nu, n=p, sign=sign, k=k
            )

        for n in range(1, self.n_cells + 1):
            p = 2 * n - 1
            for sign in ("-", "+"):
                value = self.antiperiodic[(2, p, sign)]
                data.raw[(2, p, sign)] = value
                data.edges[(2, p, sign)] = LabeledEigenvalue(
                    value=value, kind=EigenKind.ANTIPERIODIC, nu=2, n=p, sign=sign
                )

            roots = self.resonance_roots(a, n)
            data.resonances[n] = roots
            for sign in ("-", "+"):
                self._decide(a, n, sign, roots, data)
        return data

    def _decide(self, a: TubeAngle, n: int, sign: str, roots: List[RealRoot], data: FiberEdges):
        """E_{1,p}^{k,sign}: the antiperiodic point if v_k >= 0 there, else r_{k,n}^sign."""
        p = 2 * n - 1
        lam0 = self.antiperiodic[(1, p, sign)]
        v = abs(monodromy(self.q, lam0).Fminus) - a.c2

        r = None
        xi_r = None
        if roots:
            r = roots[0].lam if sign == "-" else roots[-1].lam
            m = monodromy(self.q, r)
            xi_r = float(xi_values(m.F, m.Fminus, a))

        warning = None
        if a.is_middle or v >= -self.tol.tol_edge:
            chosen = EigenKind.ANTIPERIODIC
            if abs(v) <= self.tol.tol_edge and not a.is_middle:
                warning = f"v_k={v:.3e} at lambda_(1,{p})^(0,{sign}) is within tol_edge of zero"
            value = lam0
            label = LabeledEigenvalue(value=lam0, kind=EigenKind.ANTIPERIODIC, nu=1, n=p, sign=sign)
        else:
            if r is None:
                raise NumericFailure(
                    f"v_k={v:.3e} < 0 but no resonance in kappa_{n}", k=a.k, n=n,
                    bracket=tuple(float(z_from_lam(x)) for x in self.kappa(n))
                )
            chosen = EigenKind.RESONANCE
            value = r
            label = LabeledEigenvalue(value=r, kind=EigenKind.RESONANCE, n=n, sign=sign, k=a.k)

        if warning:
            logger.warning(f"k={a.k}, n={n}: {warning}")
            data.warnings.append(warning)
            data.band_warnings[(1, p, sign)] = warning

        data.raw[(1, p, sign)] = value
        data.edges[(1, p, sign)] = label
        data.decisions.append(EdgeDecision(
            n=n, sign=sign, antiperiodic=lam0, v_test=v,
            resonance=r, xi_at_resonance=xi_r, chosen=chosen, warning=warning
        ))

    # ------------------------------------------------------------------
    # bands, multiplicity, gaps
    # ------------------------------------------------------------------

    def bands(self, data: FiberEdges) -> List[Band]:
        """S_{nu,n}^k = [E_{nu,n-1}^{k,+}, E_{nu,n}^{k,-}] for n = 1..2*n_cells."""
        bands = []
        for nu in (1, 2):
            for n in range(1, 2 * self.n_cells + 1):
                lo_key, hi_key = (nu, n - 1, "+"), (nu, n, "-")
                lo, hi = data.raw[lo_key], data.raw[hi_key]
                warnings = [data.band_warnings[key] for key in (lo_key, hi_key) if key in data.band_warnings]
                hi_edge = data.edges[hi_key]
                if lo > hi:
                    if not _close(lo, hi, 1e-8):
                        raise NumericFailure(f"band ({nu},{n}) has crossed edges {lo:.12g} > {hi:.12g}",
                                             k=data.k, n=n)
                    hi = lo
                    warnings.append(f"band ({nu},{n}) edges coincide within tolerance")
                bands.append(Band(
                    nu=nu, n=n, k=data.k, lo=lo, hi=hi,
                    lo_edge=data.edges[lo_key], hi_edge=hi_edge, warnings=warnings
                ))
        return bands

    def multiplicity(self, data: FiberEdges) -> MultiplicityMap:
        """
        Multiplicity 4 where both branch bands overlap or on kappa_{k,n}^+-
        (when the edge is a resonance), 2 elsewhere in the bands.

        The overlap verdicts are cross-checked against the sign of u_k at
        the antiperiodic edges E_{2,p}^{k,+-}.
        """
        self._check_overlaps(data)

        intervals = {1: [], 2: []}
        for nu in (1, 2):
            for n in range(1, 2 * self.n_cells + 1):
                intervals[nu].append((data.raw[(nu, n - 1, "+")], data.raw[(nu, n, "-")]))

        kappa_pieces = []
        for decision in data.decisions:
            if decision.chosen != EigenKind.RESONANCE:
                continue
            lam0, r = self.antiperiodic[(1, 2 * decision.n - 1, decision.sign)], data.raw[(1, 2 * decision.n - 1, decision.sign)]
            kappa_pieces.append((min(lam0, r), max(lam0, r)))

        points = sorted({x for iv in intervals[1] + intervals[2] + kappa_pieces for x in iv})
        pieces: List[List[float]] = []
        for lo, hi in zip(points, points[1:]):
            if not hi > lo:
                continue
            mid = 0.5 * (lo + hi)
            in1 = any(a <= mid <= b for a, b in intervals[1])
            in2 = any(a <= mid <= b for a, b in intervals[2])
            if not (in1 or in2):
                continue
            four = (in1 and in2) or any(a < mid < b for a, b in kappa_pieces)
            mult = 4 if four else 2
            if pieces and pieces[-1][1] == lo and pieces[-1][2] == mult:
                pieces[-1][1] = hi
            else:
                pieces.append([lo, hi, mult])

        return MultiplicityMap(
            k=data.k,
            pieces=[MultiplicityPiece(lo=lo, hi=hi, multiplicity=m) for lo, hi, m in pieces]
        )

    def _check_overlaps(self, data: FiberEdges):
        a = TubeAngle(self.N, data.k)
        for n in range(1, self.n_cells + 1):
            p = 2 * n - 1
            tests = (
                (data.raw[(2, p, "-")], data.raw[(2, p, "-")] - data.raw[(1, p - 1, "+")]),
                (data.raw[(2, p, "+")], data.raw[(1, p + 1, "-")] - data.raw[(2, p, "+")]),
            )
            for lam, gap in tests:
                u = abs(monodromy(self.q, lam).Fminus) - a.s2
                if abs(u) <= OVERLAP_U_TOL or abs(gap) <= REL_TOL * max(1.0, abs(lam)):
                    continue
                if (gap > 0) != (u < 0):
                    raise NumericFailure(
                        f"overlap verdict {gap > 0} contradicts u_k={u:.3e} at {lam:.12g}",
                        k=data.k, n=p
                    )

    def gaps(self, data: FiberEdges) -> List[Gap]:
        """G_{k,0..4*n_cells} per the edge pattern of the two branch band families."""
        k = data.k
        e = data.edges
        gaps = [_make_gap(k, 0, None, e[(2, 0, "+")])]
        for n in range(1, self.n_cells + 1):
            gaps.append(_make_gap(k, 4 * n - 3, e[(2, 2 * n - 1, "-")], e[(1, 2 * n - 2, "+")]))
            gaps.append(_make_gap(k, 4 * n - 2, e[(1, 2 * n - 1, "-")], e[(1, 2 * n - 1, "+")]))
            gaps.append(_make_gap(k, 4 * n - 1, e[(1, 2 * n, "-")], e[(2, 2 * n - 1, "+")]))
            gaps.append(_make_gap(k, 4 * n, e[(2, 2 * n, "-")], e[(2, 2 * n, "+")]))
        return gaps

    def verify_disks(self, k: int, data: FiberEdges):
        """
        Beyond n0 every localization disk must hold its count of computed
        periodic and antiperiodic eigenvalues. Each root goes to the nearest
        disk center over all indices, so neighbouring disks never share one.
        """
        if self.n0 is None:
            return
        a = TubeAngle(self.N, k)
        families = {
            "periodic": [float(z_from_lam(v)) for v in data.periodic.values()],
            "antiperiodic": [float(z_from_lam(v)) for v in self.antiperiodic.values()],
        }
        for kind, zs in families.items():
            disks = [
                (n, disk)
                for n in range(max(1, self.n0), self.n_cells + 1)
                for disk in localization_disks(kind, a, n)
            ]
            counts = [0] * len(disks)
            for z in zs:
                nearest = min(range(len(disks)), key=lambda i: abs(z - disks[i][1].center))
                if disks[nearest][1].contains(z):
                    counts[nearest] += 1
            for (n, disk), found in zip(disks, counts):
                if self.n0 < n < self.n_cells and found != disk.expected_count:
                    raise NumericFailure(
                        f"{kind} disk at z={disk.center.real:.6f} holds {found} roots, "
                        f"expected {disk.expected_count}",
                        k=k, n=n, bracket=disk.real_span
                    )

    # ------------------------------------------------------------------
    # reports
    # ------------------------------------------------------------------

    def fiber(self, k: int, mirror: bool = True) -> FiberReport:
        """
        Full per-k report for k in 0..N-1.

        With mirror=True a fiber k > N/2 is the N - k report relabelled;
        mirror=False runs the pipeline for k itself.
        """
        if not 0 <= k < self.N:
            raise InvalidInputError(f"k must lie in 0..{self.N - 1}, got {k}")
        if mirror and 2 * k > self.N:
            return mirror_fiber(self.fiber(self.N - k), k)

        logger.info(f"Assembling fiber k={k}")
        a = TubeAngle(self.N, k)
        data = self.fiber_edges(k)
        self.verify_disks(k, data)

        periodic = sorted(
            (LabeledEigenvalue(value=v, kind=EigenKind.PERIODIC, nu=nu, n=p, sign=s, k=k)
             for (nu, p, s), v in data.periodic.items()),
            key=lambda e: (e.value, e.nu)
        )
        antiperiodic = sorted(
            (LabeledEigenvalue(value=v, kind=EigenKind.ANTIPERIODIC, nu=nu, n=p, sign=s)
             for (nu, p, s), v in self.antiperiodic.items()),
            key=lambda e: (e.value, e.nu)
        )
        resonances = []
        for n, roots in data.resonances.items():
            for i, root in enumerate(roots):
                sign = "-" if i == 0 else "+" if i == len(roots) - 1 else None
                resonances.append(LabeledEigenvalue(
                    value=root.lam, kind=EigenKind.RESONANCE, n=n, sign=sign, k=k
                ))
                if len(roots) == 1:
                    resonances.append(LabeledEigenvalue(
                        value=root.lam, kind=EigenKind.RESONANCE, n=n, sign="+", k=k
                    ))

        if a.is_middle and self.even:
            data.warnings.append("F_- vanishes identically (even potential): no resonances at k = N/2")

        return FiberReport(
            k=k, N=self.N, s=a.s, c=a.c,
            periodic=periodic,
            antiperiodic=antiperiodic,
            kappa=[Interval(lo=self.kappa(n)[0], hi=self.kappa(n)[1], n=n)
                   for n in range(1, self.n_cells + 1)],
            resonances=resonances,
            decisions=data.decisions,
            bands=self.bands(data),
            multiplicity=self.multiplicity(data),
            gaps=self.gaps(data),
            warnings=data.warnings,
        )

    def hill_gaps(self) -> List[HillGap]:
        return [
            HillGap(n=n, lo=lo, hi=hi, degenerate=degenerate)
            for n, (lo, hi, degenerate) in enumerate(self.structure.edges)
        ]

    def dirichlet(self) -> List[LabeledEigenvalue]:
        return [
            LabeledEigenvalue(value=self.structure.mu(n), kind=EigenKind.DIRICHLET, n=n)
            for n in range(1, self.n_cells + 1)
        ]


# ============================================================================
# HELPERS
# ============================================================================


_KIND_TABLE = {
    frozenset({EigenKind.PERIODIC}): GapKind.PERIODIC,
    frozenset({EigenKind.ANTIPERIODIC}): GapKind.ANTIPERIODIC,
    frozenset({EigenKind.RESONANCE}): GapKind.RESONANCE,
    frozenset({EigenKind.ANTIPERIODIC, EigenKind.PERIODIC}): GapKind.P_MIX,
    frozenset({EigenKind.ANTIPERIODIC, EigenKind.RESONANCE}): GapKind.R_MIX,
}


def classify_gap(index: int, lo: float, hi: float,
                 lo_kind: Optional[EigenKind], hi_kind: Optional[EigenKind]) -> GapKind:
    """Gap type from its two endpoint families; G_0 counts as periodic."""
    if lo >= hi:
        return GapKind.EMPTY
    if index == 0:
        return GapKind.PERIODIC
    kind = _KIND_TABLE.get(frozenset({lo_kind, hi_kind}))
    if kind is None:
        raise NumericFailure(f"gap {index} has unexpected endpoint families {lo_kind}, {hi_kind}")
    return kind


def _make_gap(k: Optional[int], index: int,
              lo_edge: Optional[LabeledEigenvalue], hi_edge: LabeledEigenvalue) -> Gap:
    lo = -math.inf if lo_edge is None else lo_edge.value
    lo_kind = EigenKind.PERIODIC if lo_edge is None else lo_edge.kind
    return Gap(
        k=k, index=index, lo=lo, hi=hi_edge.value,
        kind=classify_gap(index, lo, hi_edge.value, lo_kind, hi_edge.kind),
        lo_kind=None if lo_edge is None else lo_edge.kind,
        hi_kind=hi_edge.kind,
    )


def mirror_fiber(report: FiberReport, k: int) -> FiberReport:
    """The report of k' = N - k relabelled as fiber k (c changes sign)."""
    source = report.k

    def relabel(node):
        if isinstance(node, dict):
            return {
                key: (k if key == "k" and value == source else relabel(value))
                for key, value in node.items()
            }
        if isinstance(node, list):
            return [relabel(item) for item in node]
        return node

    data = relabel(report.model_dump())
    data["c"] = -report.c
    return FiberReport.model_validate(data)


# ============================================================================
# MODULE-LEVEL OPERATIONS
# ============================================================================


def _solver_for(q: PeriodicPotential, N: int, lambda_max: float,
                tolerances: Optional[Tolerances] = None) -> SpectrumSolver:
    if not math.isfinite(lambda_max):
        raise InvalidInputError("lambda_max must be finite")
    return SpectrumSolver(q, N, cells_below(q, lambda_max) + 1, tolerances)


def periodic_eigenvalues(q: PeriodicPotential, a: TubeAngle, lambda_max: float) -> List[LabeledEigenvalue]:
    """Labeled lambda_{nu,2j}^{k,+-} up to lambda_max, sorted."""
    solver = _solver_for(q, a.N, lambda_max)
    points = solver.periodic_points(a)
    return sorted(
        (LabeledEigenvalue(value=v, kind=EigenKind.PERIODIC, nu=nu, n=p, sign=s, k=a.k)
         for (nu, p, s), v in points.items() if v <= lambda_max),
        key=lambda e: (e.value, e.nu)
    )


def antiperiodic_eigenvalues(q: PeriodicPotential, lambda_max: float) -> Tuple[List[LabeledEigenvalue], List[Interval]]:
    """
    Labeled lambda_{nu,2n-1}^{0,+-} up to lambda_max and the intervals kappa_n.

    Example:
        >>> values, kappa = antiperiodic_eigenvalues(PeriodicPotential(), 5.0)
        >>> [round(i.lo, 5) for i in kappa]
        [1.51526]
    """
    solver = _solver_for(q, 1, lambda_max)
    values = sorted(
        (LabeledEigenvalue(value=v, kind=EigenKind.ANTIPERIODIC, nu=nu, n=p, sign=s)
         for (nu, p, s), v in solver.antiperiodic.items() if v <= lambda_max),
        key=lambda e: (e.value, e.nu)
    )
    kappa = []
    for n in range(1, solver.n_cells + 1):
        lo, hi = solver.kappa(n)
        if lo <= lambda_max:
            kappa.append(Interval(lo=lo, hi=hi, n=n))
    return values, kappa


def resonances(q: PeriodicPotential, a: TubeAngle, lambda_max: float) -> List[LabeledEigenvalue]:
    """Resonances r_{k,n}^+- (and interior zeros) in the kappa_n below lambda_max."""
    report = _solver_for(q, a.N, lambda_max).fiber(a.k)
    return [r for r in report.resonances if r.value <= lambda_max]


def band_edges(q: PeriodicPotential, a: TubeAngle, lambda_max: float) -> List[Band]:
    """Bands S_{nu,n}^k starting at or below lambda_max."""
    report = _solver_for(q, a.N, lambda_max).fiber(a.k)
    return [b for b in report.bands if b.lo <= lambda_max]


def multiplicity(q: PeriodicPotential, a: TubeAngle, lambda_max: float) -> MultiplicityMap:
    """Multiplicity pieces of sigma_ac(H_k) starting at or below lambda_max."""
    report = _solver_for(q, a.N, lambda_max).fiber(a.k)
    pieces = [p for p in report.multiplicity.pieces if p.lo <= lambda_max]
    return MultiplicityMap(k=a.k, pieces=pieces)


def gaps_for_k(q: PeriodicPotential, a: TubeAngle, lambda_max: float) -> List[Gap]:
    """Gaps G_{k,n} whose lower end lies at or below lambda_max."""
    report = _solver_for(q, a.N, lambda_max).fiber(a.k)
    return [g for g in report.gaps if g.lo <= lambda_max]


def asymptotic_edges(q: PeriodicPotential, n: int) -> Tuple[float, float]:
    """
    Leading-order E_{2,2n}^{-}, E_{2,2n}^{+}:
    (pi n)^2 + q0 -+ sqrt((2/3) q_sn^2 + q_cn^2).

    Example:
        >>> lo, hi = asymptotic_edges(delta_potential(0.25, 1.0), 1)
        >>> round(hi - lo, 6)
        1.632993
    """
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    q0, qs, qc = fourier_coeffs(q, n)
    center = (math.pi * n) ** 2 + q0
    half = math.sqrt(2.0 / 3.0 * qs * qs + qc * qc)
    return center - half, center + half


def _intersect(index: int, gaps: List[Gap]) -> Gap:
    lo_gap = max(gaps, key=lambda g: g.lo)
    hi_gap = min(gaps, key=lambda g: g.hi)
    lo, hi = lo_gap.lo, hi_gap.hi
    lo_kind = lo_gap.lo_kind if index else None
    kind = classify_gap(index, lo, hi, lo_kind or EigenKind.PERIODIC, hi_gap.hi_kind)
    return Gap(k=None, index=index, lo=lo, hi=hi, kind=kind, lo_kind=lo_kind, hi_kind=hi_gap.hi_kind)


def _same_gap(a: Gap, b: Gap) -> bool:
    a_empty = a.lo >= a.hi or _close(a.lo, a.hi)
    b_empty = b.lo >= b.hi or _close(b.lo, b.hi)
    if a_empty or b_empty:
        return a_empty and b_empty
    return _close(a.lo, b.lo) and _close(a.hi, b.hi)


def full_gaps(solver: SpectrumSolver, fibers: Dict[int, FiberReport]) -> Tuple[List[Gap], List[str]]:
    """
    G_n as intersections over k = 0..floor(N/2), cross-checked against
    the closed forms G_{4n} = G_{0,4n} and, for even N, G_{4n-3} = G_{N/2,4n-3},
    G_{4n-1} = G_{N/2,4n-1}; plus G_{4n-4} within the closed Hill gap and
    eta_n inside the closure of G_{4n-2}.

    Returns:
        (gaps, notes)

    Raises:
        NumericFailure: a cross-check fails
    """
    N = solver.N
    half = N // 2
    notes = []
    indices = range(0, 4 * solver.n_cells + 1)
    result = []
    for index in indices:
        per_k = [fibers[k].gap(index) for k in range(half + 1)]
        gap = _intersect(index, per_k)
        result.append(gap)

        if index % 4 == 0 and not _same_gap(gap, per_k[0]):
            raise NumericFailure(f"G_{index} differs from G_(0,{index})", n=index)
        if N % 2 == 0 and index % 2 == 1 and not _same_gap(gap, per_k[half]):
            raise NumericFailure(f"G_{index} differs from G_({half},{index})", k=half, n=index)

    if N % 2 == 1:
        notes.append(
            f"N={N} is odd: G_(4n-3) and G_(4n-1) are plain intersections over k, "
            f"without a closed form to compare against"
        )

    for m, (h_lo, h_hi, _) in enumerate(solver.structure.edges):
        gap = result[4 * m]
        if gap.lo >= gap.hi:
            continue
        if gap.hi > h_hi + REL_TOL * max(1.0, abs(h_hi)) or (
            m > 0 and gap.lo < h_lo - REL_TOL * max(1.0, abs(h_lo))
        ):
            raise NumericFailure(f"G_{4 * m} is not inside the Hill gap {m}", n=4 * m)

    for n in range(1, solver.n_cells + 1):
        eta = solver.structure.eta(n)
        per_k = [fibers[k].gap(4 * n - 2) for k in range(half + 1)]
        lo = max(g.lo for g in per_k)
        hi = min(g.hi for g in per_k)
        if lo > eta + REL_TOL * max(1.0, eta) or eta > hi + REL_TOL * max(1.0, eta):
            raise NumericFailure(f"eta_{n}={eta:.12g} outside the closure of G_{4 * n - 2}", n=n)

    return result, notes


def full_spectrum(
    q: PeriodicPotential,
    N: int,
    lambda_max: Optional[float] = None,
    n_max: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
    verify: bool = False,
    threads: int = 1,
    k_list: Optional[List[int]] = None
) -> SpectrumReport:
    """
    Spectrum of the nanotube operator.

    Args:
        q: Potential
        N: Tube circumference index
        lambda_max: Energy range (or give n_max, the number of bands per branch)
        tolerances: Root/edge/tangency tolerances
        verify: Determine n0 and check the localization disks past it
        threads: Worker threads for the per-k pipelines
        k_list: Fibers to include in the report (all by default); the gaps
            G_n always use k = 0..floor(N/2)

    Returns:
        SpectrumReport
    """
    if (lambda_max is None) == (n_max is None):
        raise InvalidInputError("give exactly one of lambda_max and n_max")
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")

    if lambda_max is not None:
        n_cells = cells_below(q, lambda_max) + 1
    else:
        n_cells = max(1, math.ceil(n_max / 2))

    half = N // 2
    n0 = None
    if verify:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            n0 = max(pool.map(lambda k: find_n0(q, TubeAngle(N, k)), range(half + 1)))
        n_cells = max(n_cells, n0 + 2)
        logger.info(f"n0={n0}, using {n_cells} cells")

    solver = SpectrumSolver(q, N, n_cells, tolerances, n0=n0)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        base = dict(zip(range(half + 1), pool.map(solver.fiber, range(half + 1))))

    gaps, notes = full_gaps(solver, base)
    if n0 is not None:
        notes.append(f"observed n0={n0}")

    wanted = k_list if k_list is not None else list(range(N))
    fibers = [base[k] if k <= half else mirror_fiber(base[N - k], k) for k in sorted(set(wanted))]

    k0 = base[0]
    asymptotics = []
    for n in range(1, n_cells + 1):
        predicted = asymptotic_edges(q, n)
        lo_edge = next(e for e in k0.periodic if e.nu == 2 and e.n == 2 * n and e.sign == "-")
        hi_edge = next(e for e in k0.periodic if e.nu == 2 and e.n == 2 * n and e.sign == "+")
        asymptotics.append(AsymptoticRow(
            n=n, predicted_lo=predicted[0], predicted_hi=predicted[1],
            computed_lo=lo_edge.value, computed_hi=hi_edge.value
        ))

    return SpectrumReport(
        N=N,
        potential=q,
        n_cells=n_cells,
        lambda_max=lambda_max,
        n0=n0,
        fibers=fibers,
        gaps=gaps,
        hill_gaps=solver.hill_gaps(),
        dirichlet=solver.dirichlet(),
        asymptotics=asymptotics,
        notes=notes,
    )


def _merge(intervals: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    merged: List[List[float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def _directed(A: List[Tuple[float, float]], B: List[Tuple[float, float]]) -> float:
    """sup over a in A of dist(a, B) for disjoint sorted interval lists."""
    def dist(x):
        return min(0.0 if lo <= x <= hi else min(abs(x - lo), abs(x - hi)) for lo, hi in B)

    worst = 0.0
    holes = [(B[i][1], B[i + 1][0]) for i in range(len(B) - 1)]
    for lo, hi in A:
        candidates = [lo, hi]
        for h_lo, h_hi in holes:
            mid = 0.5 * (h_lo + h_hi)
            if h_hi > lo and h_lo < hi:
                candidates.append(min(max(mid, lo), hi))
        candidates += [min(max(B[0][0], lo), hi), min(max(B[-1][1], lo), hi)]
        worst = max(worst, max(dist(x) for x in candidates))
    return worst


def hausdorff_to_hill(report: SpectrumReport, lambda_max: Optional[float] = None) -> float:
    """
    Hausdorff distance between the union over k of the fiber bands and the
    Hill spectrum, both cut at lambda_max (default: the report's range).
    """
    top = lambda_max if lambda_max is not None else report.lambda_max
    if top is None:
        top = max(b.hi for f in report.fibers for b in f.bands)

    tube = _merge([(b.lo, min(b.hi, top)) for f in report.fibers for b in f.bands if b.lo <= top])
    hill_bands = []
    gaps = sorted(report.hill_gaps, key=lambda g: g.n)
    for left, right in zip(gaps, gaps[1:]):
        if left.hi <= top:
            hill_bands.append((left.hi, min(right.lo, top)))
    hill = _merge(hill_bands)
    if not tube or not hill:
        raise InvalidInputError("nothing to compare below lambda_max")
    return max(_directed(tube, hill), _directed(hill, tube))
