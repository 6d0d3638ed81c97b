"""
Invariant suite behind the `check` subcommand.

Architecture:
- InvariantCheck: abstract base, one small class per named invariant
- CheckContext: the potentials under test plus cached spectrum reports
- CheckSuite: runs the checks and collects a CheckReport

Every check reports pass / fail / skipped together with its evidence.
A NumericFailure raised while evaluating a check turns into a failure of
that check only.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.config import ChecksSection, RunConfig, Tolerances
from core.errors import InvalidInputError, NumericFailure
from core.hill import asymptotic_F, dirichlet_spectrum, hill_anchors, monodromy, monodromy_grid
from core.lyapunov import (
    TubeAngle,
    branch_values,
    dminus_values,
    dplus_values,
    factor_values,
    lyapunov_table,
    membership_flags,
    rho_values,
    xi_values,
)
from core.models import (
    CheckReport,
    CheckResult,
    CheckStatus,
    EigenKind,
    FiberReport,
    Gap,
    GapKind,
    PeriodicPotential,
    SpectrumReport,
)
from core.potential import is_even, random_potential, sampled
from core.rootfind import disks_hold, families_for, find_n0, low_energy_counts

from .spectrum import SpectrumSolver, full_spectrum, hausdorff_to_hill

logger = logging.getLogger(__name__)

REL_TOL = 1e-9
MAX_EVIDENCE = 8

# cos(2 pi t) on a fine grid; even, so q(t) = q(1 - t)
EVEN_SAMPLE = sampled(lambda t: np.cos(2 * np.pi * t), 1024)


def _slack(*values: float) -> float:
    return REL_TOL * max([1.0] + [abs(v) for v in values if math.isfinite(v)])


def _result(name: str, failures: List[str], cases: int, notes: Sequence[str] = ()) -> CheckResult:
    if failures:
        status = CheckStatus.FAIL
    elif cases == 0:
        status = CheckStatus.SKIPPED
    else:
        status = CheckStatus.PASS
    evidence = failures[:MAX_EVIDENCE]
    if len(failures) > MAX_EVIDENCE:
        evidence.append(f"... {len(failures) - MAX_EVIDENCE} more")
    evidence.extend(notes)
    evidence.append(f"{cases} comparisons, {len(failures)} violations")
    return CheckResult(name=name, status=status, cases=cases, evidence=evidence)


def _band_edges(fiber: FiberReport) -> Dict[Tuple[int, int, str], float]:
    """E_{nu,n}^{k,+-} read back from the bands."""
    edges = {}
    for band in fiber.bands:
        edges[(band.nu, band.n - 1, "+")] = band.lo
        edges[(band.nu, band.n, "-")] = band.hi
    return edges


def _points(values) -> Dict[Tuple[int, int, str], float]:
    return {(e.nu, e.n, e.sign): e.value for e in values}


def _chain(label: str, values: Sequence[Tuple[str, float]], failures: List[str]) -> int:
    """Check that the named values are non-decreasing; returns the comparison count."""
    for (left_name, left), (right_name, right) in zip(values, values[1:]):
        if left > right + _slack(left, right):
            failures.append(f"{label}: {left_name}={left:.12g} > {right_name}={right:.12g}")
    return max(0, len(values) - 1)


def _inside(inner: Gap, outer: Gap) -> bool:
    if inner.lo >= inner.hi:
        return True
    return outer.lo <= inner.lo + _slack(inner.lo) and inner.hi <= outer.hi + _slack(inner.hi)


# ============================================================================
# CONTEXT
# ============================================================================


@dataclass
class CheckContext:
    """Potentials under test and the reports computed for them."""
    q: PeriodicPotential
    N: int
    lambda_max: float
    tolerances: Tolerances = field(default_factory=Tolerances)
    settings: ChecksSection = field(default_factory=ChecksSection)
    threads: int = 1
    _reports: Dict[PeriodicPotential, SpectrumReport] = field(default_factory=dict, repr=False)
    _randoms: Optional[List[PeriodicPotential]] = field(default=None, repr=False)

    @classmethod
    def from_config(cls, config: RunConfig) -> "CheckContext":
        """Context for a run; n_max is turned into an energy range first."""
        q = config.build_potential()
        lambda_max = config.energy_range
        return cls(q=q, N=config.N, lambda_max=lambda_max, tolerances=config.tolerances,
                   settings=config.checks, threads=config.threads)

    def rng(self, offset: int = 0) -> np.random.Generator:
        """Seeded generator; offsets keep the checks independent of their order."""
        return np.random.default_rng(self.settings.seed + offset)

    @property
    def random_potentials(self) -> List[PeriodicPotential]:
        if self._randoms is None:
            rng = self.rng()
            self._randoms = [random_potential(rng) for _ in range(self.settings.random_potentials)]
        return self._randoms

    @property
    def potentials(self) -> List[PeriodicPotential]:
        return [self.q] + self.random_potentials

    def report(self, q: PeriodicPotential) -> SpectrumReport:
        if q not in self._reports:
            logger.info(f"Computing spectrum for check potential {len(self._reports) + 1}")
            self._reports[q] = full_spectrum(
                q, self.N, lambda_max=self.lambda_max, tolerances=self.tolerances,
                threads=self.threads
            )
        return self._reports[q]

    @property
    def half(self) -> List[int]:
        return list(range(self.N // 2 + 1))

    def random_lambdas(self, q: PeriodicPotential, offset: int) -> np.ndarray:
        rng = self.rng(offset)
        return rng.uniform(q.lower_bound(), self.lambda_max, self.settings.random_lambdas)


# ============================================================================
# CHECK BASE
# ============================================================================


class InvariantCheck(ABC):
    """
    One named invariant.

    Subclasses set `name` and implement `evaluate`.
    """

    name: str = ""

    @abstractmethod
    def evaluate(self, ctx: CheckContext) -> CheckResult:
        """
        Evaluate this invariant.

        Args:
            ctx: Potentials, settings and cached reports

        Returns:
            CheckResult with status and evidence
        """
        pass


class MonodromyIdentities(InvariantCheck):
    """det M = 1 and F^2 - F_-^2 = theta1 * phi1' at random real and complex lambda."""

    name = "monodromy-identities"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            real = ctx.random_lambdas(q, 100 + i)
            imag = ctx.rng(200 + i).uniform(-10.0, 10.0, real.size)
            for lam in (real, real + 1j * imag):
                m = monodromy_grid(q, lam)
                a, d = m.theta1 * m.phi1p, m.theta1p * m.phi1
                scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(d)))
                det_err = np.abs(a - d - 1.0) / scale
                F, Fm = m.F, m.Fminus
                id_err = np.abs(F * F - Fm * Fm - a) / scale
                cases += 2 * lam.size
                for name, err in (("det", det_err), ("F^2 - F_-^2", id_err)):
                    worst = int(np.argmax(err))
                    if err[worst] > 1e-10:
                        failures.append(f"potential {i}: {name} off by {err[worst]:.2e} at lambda={lam[worst]:.6g}")
        return _result(self.name, failures, cases)


class HillAsymptotics(InvariantCheck):
    """lambda * |F - cos z - q0 sin z / (2z)| stays bounded along lambda = (pi m)^2."""

    name = "hill-asymptotics"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        notes = []
        m = np.arange(10, 41)
        lam = (np.pi * m) ** 2
        for i, q in enumerate(ctx.potentials):
            scaled = lam * np.abs(np.real(monodromy_grid(q, lam).F - asymptotic_F(q, lam)))
            early, late = scaled[m <= 20].max(), scaled[m > 30].max()
            notes.append(f"potential {i}: max scaled residual {early:.3g} (m<=20), {late:.3g} (m>30)")
            if late > 2.0 * early + 1.0:
                failures.append(f"potential {i}: scaled residual grows from {early:.3g} to {late:.3g}")
        return _result(self.name, failures, len(ctx.potentials), notes)


class DirichletInHillGaps(InvariantCheck):
    """mu_n lies in the closed Hill gap n and matches an independent scan of phi1."""

    name = "dirichlet-in-hill-gaps"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            report = ctx.report(q)
            structure = hill_anchors(q, report.n_cells, ctx.tolerances.tol_root, ctx.tolerances.tol_tang)
            scanned = [e.value for e in dirichlet_spectrum(q, structure.mu(structure.n_cells))]
            for n in range(1, structure.n_cells + 1):
                mu = structure.mu(n)
                lo, hi, _ = structure.edges[n]
                cases += 2
                if not lo - _slack(lo) <= mu <= hi + _slack(hi):
                    failures.append(f"potential {i}: mu_{n}={mu:.12g} outside [{lo:.12g}, {hi:.12g}]")
                if n > len(scanned) or abs(scanned[n - 1] - mu) > 1e-8 * max(1.0, mu):
                    failures.append(f"potential {i}: scanned Dirichlet value {n} does not match mu_{n}={mu:.12g}")
        return _result(self.name, failures, cases)


class LyapunovIdentities(InvariantCheck):
    """
    Branch sum and product, the factorized D_k^+- and rho_k = c_k^2 (9F^2 - f_k)
    at random real lambda.
    """

    name = "lyapunov-identities"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            lam = ctx.random_lambdas(q, 300 + i)
            m = monodromy_grid(q, lam)
            F, Fm = np.real(m.F), np.real(m.Fminus)
            X = 9.0 * F * F
            for k in range(ctx.N):
                a = TubeAngle(ctx.N, k)
                xi, rho = xi_values(F, Fm, a), rho_values(F, Fm, a)
                f1, f2 = branch_values(F, Fm, a)
                fac = factor_values(Fm, a)
                scale = np.maximum(1.0, np.maximum(xi * xi, np.abs(rho)))
                dplus = (X - fac["g1"]) * (X - fac["g2"])
                dminus = (X - fac["h1"]) * (X - fac["h2"])
                checks = {
                    "F1 + F2 = 2 xi": np.abs(f1 + f2 - 2 * xi) / np.maximum(1.0, np.abs(xi)),
                    "F1 F2 = xi^2 - rho": np.abs(f1 * f2 - (xi * xi - rho)) / scale,
                    "D+ factorized": np.abs(dplus_values(F, Fm, a) - dplus) / (4.0 * scale),
                    "D- factorized": np.abs(dminus_values(F, Fm, a) - dminus) / (4.0 * scale),
                }
                if a.c2 > 0:
                    f_k = a.s2 * (1.0 - Fm * Fm / a.c2)
                    checks["rho = c^2 (9F^2 - f)"] = np.abs(rho - a.c2 * (X - f_k)) / np.maximum(1.0, np.abs(rho) + X)
                for name, err in checks.items():
                    cases += lam.size
                    worst = int(np.argmax(err))
                    if err[worst] > 1e-9:
                        failures.append(f"potential {i}, k={k}: {name} off by {err[worst]:.2e} at lambda={lam[worst]:.6g}")
        return _result(self.name, failures, cases)


class LyapunovChain(InvariantCheck):
    """h_1 <= min{h_2, g_{k,1}} <= max{h_2, g_{k,1}} <= g_{k,2} on real lambda."""

    name = "lyapunov-chain"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            lam = ctx.random_lambdas(q, 400 + i)
            Fm = np.real(monodromy_grid(q, lam).Fminus)
            for k in ctx.half:
                fac = factor_values(Fm, TubeAngle(ctx.N, k))
                low = np.minimum(fac["h2"], fac["g1"])
                high = np.maximum(fac["h2"], fac["g1"])
                bad = (fac["h1"] > low + 1e-12) | (high > fac["g2"] + 1e-12)
                cases += lam.size
                if bad.any():
                    failures.append(f"potential {i}, k={k}: chain broken at {int(bad.sum())} points")
        return _result(self.name, failures, cases)


class GMonotonicity(InvariantCheck):
    """g_{l,2} <= g_{k,2} and g_{k,1} <= g_{l,1} for 0 <= k < l <= N/2."""

    name = "g-monotonicity"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            lam = ctx.random_lambdas(q, 500 + i)
            Fm = np.real(monodromy_grid(q, lam).Fminus)
            factors = {k: factor_values(Fm, TubeAngle(ctx.N, k)) for k in ctx.half}
            for k in ctx.half:
                for ell in ctx.half:
                    if ell <= k:
                        continue
                    cases += lam.size
                    bad = (factors[ell]["g2"] > factors[k]["g2"] + 1e-12) | (
                        factors[k]["g1"] > factors[ell]["g1"] + 1e-12
                    )
                    if bad.any():
                        failures.append(f"potential {i}: g ordering between k={k} and k={ell} broken at {int(bad.sum())} points")
        return _result(self.name, failures, cases)


class MembershipOracle(InvariantCheck):
    """
    The inequality predicates agree with the direct test F_{k,nu} in [-1, 1]
    wherever rho_k is clearly positive and F_{k,nu} is clearly off +-1.
    """

    name = "membership-oracle"

    MARGIN = 1e-6

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        tol = ctx.tolerances.tol_edge
        for i, q in enumerate(ctx.potentials):
            lam = ctx.random_lambdas(q, 600 + i)
            m = monodromy_grid(q, lam)
            F, Fm = np.real(m.F), np.real(m.Fminus)
            for k in range(ctx.N):
                a = TubeAngle(ctx.N, k)
                rho = rho_values(F, Fm, a)
                flags = membership_flags(9.0 * F * F, np.abs(Fm), rho, factor_values(Fm, a), a, tol)
                for nu, branch, flag in zip((1, 2), branch_values(F, Fm, a), flags):
                    value = branch.real
                    direct = np.abs(value) <= 1.0
                    usable = (rho > self.MARGIN) & (np.abs(np.abs(value) - 1.0) > self.MARGIN)
                    bad = usable & (direct != flag)
                    cases += int(usable.sum())
                    if bad.any():
                        worst = lam[bad][0]
                        failures.append(f"potential {i}, k={k}, nu={nu}: {int(bad.sum())} disagreements (first at {worst:.6g})")
        return _result(self.name, failures, cases)


class BandMembership(InvariantCheck):
    """
    Assembled bands and multiplicities against the membership predicates
    on a uniform lambda grid, away from every band and multiplicity edge.
    """

    name = "band-membership"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        margin = max(10 * ctx.tolerances.tol_edge, 1e-6)
        for i, q in enumerate(ctx.potentials):
            report = ctx.report(q)
            for k in ctx.half:
                fiber = report.fiber(k)
                lo = min(b.lo for b in fiber.bands) - 1.0
                lam = np.linspace(lo, ctx.lambda_max, ctx.settings.grid_points)
                m = monodromy_grid(q, lam)
                table = lyapunov_table(np.real(m.F), np.real(m.Fminus), TubeAngle(ctx.N, k),
                                       ctx.tolerances.tol_edge)
                in1, in2 = table["in1"], table["in2"]

                in_bands = np.zeros(lam.size, dtype=bool)
                for band in fiber.bands:
                    in_bands |= (lam >= band.lo) & (lam <= band.hi)
                mult = np.array([fiber.multiplicity.multiplicity_at(x) for x in lam])

                cuts = np.array(sorted(
                    {b.lo for b in fiber.bands} | {b.hi for b in fiber.bands}
                    | {p.lo for p in fiber.multiplicity.pieces} | {p.hi for p in fiber.multiplicity.pieces}
                ))
                at = np.clip(np.searchsorted(cuts, lam), 1, cuts.size - 1)
                distance = np.minimum(np.abs(lam - cuts[at - 1]), np.abs(lam - cuts[at]))
                far = distance > margin * np.maximum(1.0, np.abs(lam))

                expected = np.where(in1 & in2, 4, np.where(in1 | in2, 2, 0))
                bad_union = far & ((in1 | in2) != in_bands)
                bad_mult = far & (expected != mult)
                cases += 2 * int(far.sum())
                if bad_union.any():
                    failures.append(f"potential {i}, k={k}: band union disagrees at {int(bad_union.sum())} points "
                                    f"(first at {lam[bad_union][0]:.8g})")
                if bad_mult.any():
                    failures.append(f"potential {i}, k={k}: multiplicity disagrees at {int(bad_mult.sum())} points "
                                    f"(first at {lam[bad_mult][0]:.8g})")
        return _result(self.name, failures, cases)


class Interlacing(InvariantCheck):
    """
    Ordering of periodic and antiperiodic eigenvalues around each eta_n:

    lambda_{2,p-1}^+ <= min{lambda_{2,p}^{0,-}, lambda_{1,p-1}^+} <= max{...}
    <= lambda_{1,p}^{0,-} <= eta_n <= lambda_{1,p}^{0,+}
    <= min{lambda_{2,p}^{0,+}, lambda_{1,p+1}^-} <= max{...} <= lambda_{2,p+1}^- <= mu_n
    """

    name = "interlacing"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            report = ctx.report(q)
            structure = hill_anchors(q, report.n_cells, ctx.tolerances.tol_root, ctx.tolerances.tol_tang)
            for k in ctx.half:
                fiber = report.fiber(k)
                per, anti = _points(fiber.periodic), _points(fiber.antiperiodic)
                for n in range(1, report.n_cells + 1):
                    p = 2 * n - 1
                    low_pair = (anti[(2, p, "-")], per[(1, p - 1, "+")])
                    high_pair = (anti[(2, p, "+")], per[(1, p + 1, "-")])
                    chain = [
                        ("lambda_(2,p-1)^+", per[(2, p - 1, "+")]),
                        ("min", min(low_pair)),
                        ("max", max(low_pair)),
                        ("lambda_(1,p)^(0,-)", anti[(1, p, "-")]),
                        ("eta_n", structure.eta(n)),
                        ("lambda_(1,p)^(0,+)", anti[(1, p, "+")]),
                        ("min", min(high_pair)),
                        ("max", max(high_pair)),
                        ("lambda_(2,p+1)^-", per[(2, p + 1, "-")]),
                        ("mu_n", structure.mu(n)),
                    ]
                    cases += _chain(f"potential {i}, k={k}, n={n}", chain, failures)
        return _result(self.name, failures, cases)


class EdgeOrdering(InvariantCheck):
    """
    E_{2,p-1}^+ <= min{E_{2,p}^-, E_{1,p-1}^+} <= max{...} <= E_{1,p}^- <= E_{1,p}^+
    <= min{E_{1,p+1}^-, E_{2,p}^+} <= max{...} <= E_{2,p+1}^- for odd p.
    """

    name = "edge-ordering"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            report = ctx.report(q)
            for k in ctx.half:
                E = _band_edges(report.fiber(k))
                for n in range(1, report.n_cells + 1):
                    p = 2 * n - 1
                    low_pair = (E[(2, p, "-")], E[(1, p - 1, "+")])
                    high_pair = (E[(1, p + 1, "-")], E[(2, p, "+")])
                    chain = [
                        ("E_(2,p-1)^+", E[(2, p - 1, "+")]),
                        ("min", min(low_pair)),
                        ("max", max(low_pair)),
                        ("E_(1,p)^-", E[(1, p, "-")]),
                        ("E_(1,p)^+", E[(1, p, "+")]),
                        ("min", min(high_pair)),
                        ("max", max(high_pair)),
                        ("E_(2,p+1)^-", E[(2, p + 1, "-")]),
                    ]
                    cases += _chain(f"potential {i}, k={k}, p={p}", chain, failures)
        return _result(self.name, failures, cases)


class OverlapCriteria(InvariantCheck):
    """
    E_{2,p}^- > E_{1,p-1}^+ iff u_k(E_{2,p}^-) < 0, and
    E_{1,p+1}^- > E_{2,p}^+ iff u_k(E_{2,p}^+) < 0.
    """

    name = "overlap-criteria"

    U_MARGIN = 1e-6

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        skipped = 0
        for i, q in enumerate(ctx.potentials):
            report = ctx.report(q)
            for k in ctx.half:
                a = TubeAngle(ctx.N, k)
                E = _band_edges(report.fiber(k))
                for n in range(1, report.n_cells + 1):
                    p = 2 * n - 1
                    tests = (
                        (E[(2, p, "-")], E[(2, p, "-")] - E[(1, p - 1, "+")]),
                        (E[(2, p, "+")], E[(1, p + 1, "-")] - E[(2, p, "+")]),
                    )
                    for lam, overlap in tests:
                        u = abs(monodromy(q, lam).Fminus) - a.s2
                        if abs(u) <= self.U_MARGIN or abs(overlap) <= _slack(lam):
                            skipped += 1
                            continue
                        cases += 1
                        if (overlap > 0) != (u < 0):
                            failures.append(f"potential {i}, k={k}, p={p}: overlap {overlap:.3e} but u_k={u:.3e}")
        return _result(self.name, failures, cases, [f"{skipped} boundary cases skipped"])


class Symmetry(InvariantCheck):
    """
    Fibers k and N - k: identical D_k^+- at random complex lambda, and the
    fiber N - k computed on its own has the bands and multiplicity of fiber k.
    """

    name = "symmetry"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            lam = ctx.random_lambdas(q, 700 + i).astype(complex)
            m = monodromy_grid(q, lam)
            report = ctx.report(q)
            solver = None
            for k in range(1, ctx.N):
                if 2 * k >= ctx.N:
                    continue
                a, b = TubeAngle(ctx.N, k), TubeAngle(ctx.N, ctx.N - k)
                cases += 2
                if not np.allclose(dplus_values(m.F, m.Fminus, a), dplus_values(m.F, m.Fminus, b), rtol=1e-12, atol=1e-12):
                    failures.append(f"potential {i}: D+ differs between k={k} and k={ctx.N - k}")
                if not np.allclose(dminus_values(m.F, m.Fminus, a), dminus_values(m.F, m.Fminus, b), rtol=1e-12, atol=1e-12):
                    failures.append(f"potential {i}: D- differs between k={k} and k={ctx.N - k}")

                mine = report.fiber(k)
                if mine is None:
                    continue
                if solver is None:
                    solver = SpectrumSolver(q, ctx.N, report.n_cells, ctx.tolerances)
                theirs = solver.fiber(ctx.N - k, mirror=False)
                cases += 1
                failures.extend(
                    f"potential {i}, k={k} vs k={ctx.N - k}: {line}"
                    for line in _fiber_differences(mine, theirs)
                )
        return _result(self.name, failures, cases)


def _fiber_differences(left: FiberReport, right: FiberReport) -> List[str]:
    """Band and multiplicity mismatches between two fibers, labels k ignored."""
    differences = []
    if len(left.bands) != len(right.bands):
        return [f"{len(left.bands)} bands against {len(right.bands)}"]
    for mine, theirs in zip(left.bands, right.bands):
        if (mine.nu, mine.n) != (theirs.nu, theirs.n) or not _close_pair((mine.lo, mine.hi), (theirs.lo, theirs.hi)):
            differences.append(f"band ({mine.nu},{mine.n}) [{mine.lo:.12g}, {mine.hi:.12g}] "
                               f"against [{theirs.lo:.12g}, {theirs.hi:.12g}]")
    pieces = [(p.lo, p.hi, p.multiplicity) for p in left.multiplicity.pieces]
    others = [(p.lo, p.hi, p.multiplicity) for p in right.multiplicity.pieces]
    if len(pieces) != len(others) or any(
        x[2] != y[2] or not _close_pair(x[:2], y[:2]) for x, y in zip(pieces, others)
    ):
        differences.append("multiplicity pieces differ")
    return differences


def _close_pair(x: Tuple[float, float], y: Tuple[float, float]) -> bool:
    return all(abs(u - v) <= _slack(u, v) for u, v in zip(x, y))


class GapMonotonicity(InvariantCheck):
    """G_{k,4n} within G_{l,4n}, and G_{l,m} within G_{k,m} for odd m, 0 <= k < l <= N/2."""

    name = "gap-monotonicity"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            report = ctx.report(q)
            for k in ctx.half:
                for ell in ctx.half:
                    if ell <= k:
                        continue
                    mine, theirs = report.fiber(k), report.fiber(ell)
                    for gap in mine.gaps:
                        if gap.index == 0 or gap.index % 2 == 0 and gap.index % 4:
                            continue
                        other = theirs.gap(gap.index)
                        inner, outer = (gap, other) if gap.index % 4 == 0 else (other, gap)
                        cases += 1
                        if not _inside(inner, outer):
                            failures.append(
                                f"potential {i}: G_({inner.k},{gap.index})=({inner.lo:.10g}, {inner.hi:.10g}) "
                                f"not inside G_({outer.k},{gap.index})=({outer.lo:.10g}, {outer.hi:.10g})"
                            )
        return _result(self.name, failures, cases)


class FullGapClosedForms(InvariantCheck):
    """
    The full-operator gaps pass their closed-form cross-checks; q = 0 has no
    gaps above 0; an even potential reproduces the Hill spectrum and has
    only resonance gaps G_{k,4n-2} for k not in {0, N/2}.
    """

    name = "full-gap-closed-forms"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        notes = []
        cases = 0
        for i, q in enumerate(ctx.potentials):
            cases += 1
            try:
                ctx.report(q)
            except NumericFailure as exc:
                failures.append(f"potential {i}: {exc}")

        zero = ctx.report(PeriodicPotential())
        for gap in zero.gaps:
            cases += 1
            if gap.index == 0:
                if abs(gap.hi) > 1e-8:
                    failures.append(f"q=0: G_0 ends at {gap.hi:.3e}, expected 0")
            elif gap.hi - gap.lo > 1e-8:
                failures.append(f"q=0: G_{gap.index}=({gap.lo:.10g}, {gap.hi:.10g}) is not empty")

        even = ctx.report(EVEN_SAMPLE)
        distance = hausdorff_to_hill(even)
        notes.append(f"even potential: Hausdorff distance to the Hill spectrum {distance:.3e}")
        cases += 1
        if distance > 1e-5:
            failures.append(f"even potential: Hausdorff distance {distance:.3e} > 1e-5")
        for fiber in even.fibers:
            if not TubeAngle(ctx.N, fiber.k).generic:
                continue
            for gap in fiber.gaps:
                if gap.index % 4 == 2 and gap.kind != GapKind.EMPTY:
                    cases += 1
                    if gap.kind != GapKind.RESONANCE:
                        failures.append(f"even potential: G_({fiber.k},{gap.index}) classified {gap.kind.value}")
        return _result(self.name, failures, cases, notes)


class ResonanceValues(InvariantCheck):
    """
    xi_k at the resonances: in (-1, -1/2] when the resonance is a band edge,
    <= -1 when the antiperiodic point wins; -(s_k^2 + 1)/2 for even q.
    """

    name = "resonance-values"

    TOL = 1e-7

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        cases = 0
        for i, q in enumerate(ctx.potentials + [EVEN_SAMPLE]):
            even = is_even(q)
            report = ctx.report(q)
            for k in ctx.half:
                a = TubeAngle(ctx.N, k)
                for decision in report.fiber(k).decisions:
                    if decision.resonance is None:
                        continue
                    xi = decision.xi_at_resonance
                    cases += 1
                    where = f"potential {i}, k={k}, n={decision.n}{decision.sign}"
                    if decision.chosen == EigenKind.RESONANCE:
                        if not -1.0 - self.TOL < xi <= -0.5 + self.TOL:
                            failures.append(f"{where}: edge resonance has xi={xi:.10g}")
                    elif xi > -1.0 + self.TOL:
                        failures.append(f"{where}: resonance below an antiperiodic edge has xi={xi:.10g}")
                    if even and a.generic and abs(xi + (a.s2 + 1.0) / 2.0) > self.TOL:
                        failures.append(f"{where}: even potential, xi={xi:.10g} != {-(a.s2 + 1) / 2:.10g}")
        return _result(self.name, failures, cases)


class Localization(InvariantCheck):
    """
    Beyond n0 every localization disk holds its asserted zero count, and the
    low-energy regions hold the matching totals.
    """

    name = "localization"

    def evaluate(self, ctx: CheckContext) -> CheckResult:
        failures = []
        notes = []
        cases = 0
        depth = ctx.settings.localization_depth
        for label, q in (("config potential", ctx.q), ("q=0", PeriodicPotential())):
            for k in ctx.half:
                a = TubeAngle(ctx.N, k)
                n0 = find_n0(q, a)
                notes.append(f"{label}, k={k}: n0={n0}")
                for kind in families_for(a):
                    for n in range(n0 + 1, n0 + depth + 1):
                        cases += 1
                        if not disks_hold(q, a, kind, n):
                            failures.append(f"{label}, k={k}: {kind} disks of index {n} miscount")
                for kind, (found, expected) in low_energy_counts(q, a, n0).items():
                    cases += 1
                    if found != expected:
                        failures.append(f"{label}, k={k}: {found} {kind} zeros below n0, expected {expected}")
        return _result(self.name, failures, cases, notes)


# ============================================================================
# SUITE
# ============================================================================


ALL_CHECKS = (
    MonodromyIdentities,
    HillAsymptotics,
    DirichletInHillGaps,
    LyapunovIdentities,
    LyapunovChain,
    GMonotonicity,
    MembershipOracle,
    BandMembership,
    Interlacing,
    EdgeOrdering,
    OverlapCriteria,
    Symmetry,
    GapMonotonicity,
    FullGapClosedForms,
    ResonanceValues,
    Localization,
)


class CheckSuite:
    """
    Runs invariant checks against one context.

    Extension: subclass InvariantCheck and add it to ALL_CHECKS.
    """

    def __init__(self, ctx: CheckContext, checks: Optional[Sequence[InvariantCheck]] = None):
        self.ctx = ctx
        self.checks: List[InvariantCheck] = list(checks) if checks is not None else [c() for c in ALL_CHECKS]

    @property
    def names(self) -> List[str]:
        return [c.name for c in self.checks]

    def run(self, only: Optional[Sequence[str]] = None) -> CheckReport:
        """
        Evaluate the selected checks (all by default).

        Raises:
            InvalidInputError: unknown check name
        """
        if only:
            unknown = sorted(set(only) - set(self.names))
            if unknown:
                raise InvalidInputError(f"unknown check(s): {', '.join(unknown)}")

        results = []
        for check in self.checks:
            if only and check.name not in only:
                continue
            logger.info(f"Running check {check.name}")
            try:
                result = check.evaluate(self.ctx)
            except NumericFailure as exc:
                logger.error(f"{check.name}: {exc}")
                result = CheckResult(name=check.name, status=CheckStatus.FAIL, evidence=[str(exc)])
            if result.status == CheckStatus.FAIL:
                logger.warning(f"{check.name} failed: {result.evidence[0]}")
            results.append(result)
        return CheckReport(N=self.ctx.N, results=results)
