"""
Table layouts for the emitted reports.

Every report is flattened into one or more pandas DataFrames with fixed
column names; the writer turns them into CSV and the narrator into text.

Columns:
    hill_anchors:   n, eta, mu, F_at_mu, Fminus_at_mu, Fminus_at_eta
    hill_gaps:      n, lo, hi, degenerate
    hill_points:    kind, n, value
    eigenvalues:    k, kind, nu, n, sign, value
    bands:          k, nu, n, lo, hi, lo_label, hi_label
    gaps:           k, index, lo, hi, kind, lo_kind, hi_kind
    multiplicity:   k, lo, hi, multiplicity
    decisions:      k, n, sign, antiperiodic, v_test, resonance, chosen
    full_gaps:      index, lo, hi, width, kind
    asymptotics:    n, predicted_lo, predicted_hi, computed_lo, computed_hi
    checks:         name, status, cases, evidence
    scan:           lambda, F, Fminus, then k{k}_<field> per fiber
    scan_edges:     k, nu, n, side, lambda, kind
"""

import math
from typing import Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from core.hill import monodromy_grid
from core.lyapunov import TOL_EDGE, TubeAngle, lyapunov_table
from core.models import (
    BandsReport,
    CheckReport,
    FiberReport,
    HillReport,
    LabeledEigenvalue,
    PeriodicPotential,
    SpectrumReport,
)

FLOAT_FORMAT = "%.12g"

SCAN_FIELDS = (
    "xi", "rho", "g1", "g2", "h1", "h2", "u", "v",
    "in1", "in2", "F1_re", "F1_im", "F2_re", "F2_im",
)

Tables = Dict[str, pd.DataFrame]


def format_real(value: Optional[float]) -> str:
    """Twelve significant digits; None prints as '-'."""
    if value is None:
        return "-"
    if math.isinf(value):
        return "-inf" if value < 0 else "inf"
    return FLOAT_FORMAT % value


def _frame(rows: List[dict], columns: Iterable[str]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=list(columns))


def _point_rows(points: Iterable[LabeledEigenvalue], k: Optional[int] = None) -> List[dict]:
    return [
        {"k": p.k if p.k is not None else k, "kind": p.kind.value, "nu": p.nu,
         "n": p.n, "sign": p.sign, "value": p.value}
        for p in points
    ]


# ============================================================================
# HILL TABLES
# ============================================================================


def hill_tables(report: HillReport) -> Tables:
    anchors = _frame(
        [a.model_dump() for a in report.anchors],
        ("n", "eta", "mu", "F_at_mu", "Fminus_at_mu", "Fminus_at_eta")
    )
    gaps = _frame([g.model_dump() for g in report.gaps], ("n", "lo", "hi", "degenerate"))
    points = _frame(
        [{"kind": p.kind.value, "n": p.n, "value": p.value}
         for p in report.dirichlet + report.lyapunov_zeros],
        ("kind", "n", "value")
    )
    return {"hill_anchors": anchors, "hill_gaps": gaps, "hill_points": points}


# ============================================================================
# FIBER TABLES
# ============================================================================


def fiber_tables(fibers: List[FiberReport]) -> Tables:
    """Band, gap, multiplicity, eigenvalue and decision tables over several fibers."""
    eigen, bands, gaps, pieces, decisions = [], [], [], [], []
    for fiber in fibers:
        eigen += _point_rows(fiber.periodic + fiber.antiperiodic + fiber.resonances, fiber.k)
        bands += [
            {"k": fiber.k, "nu": b.nu, "n": b.n, "lo": b.lo, "hi": b.hi,
             "lo_label": b.lo_edge.label, "hi_label": b.hi_edge.label}
            for b in fiber.bands
        ]
        gaps += [
            {"k": fiber.k, "index": g.index, "lo": g.lo, "hi": g.hi, "kind": g.kind.value,
             "lo_kind": g.lo_kind.value if g.lo_kind else None,
             "hi_kind": g.hi_kind.value if g.hi_kind else None}
            for g in fiber.gaps
        ]
        pieces += [
            {"k": fiber.k, "lo": p.lo, "hi": p.hi, "multiplicity": p.multiplicity}
            for p in fiber.multiplicity.pieces
        ]
        decisions += [
            {"k": fiber.k, "n": d.n, "sign": d.sign, "antiperiodic": d.antiperiodic,
             "v_test": d.v_test, "resonance": d.resonance, "chosen": d.chosen.value}
            for d in fiber.decisions
        ]
    return {
        "eigenvalues": _frame(eigen, ("k", "kind", "nu", "n", "sign", "value")),
        "bands": _frame(bands, ("k", "nu", "n", "lo", "hi", "lo_label", "hi_label")),
        "gaps": _frame(gaps, ("k", "index", "lo", "hi", "kind", "lo_kind", "hi_kind")),
        "multiplicity": _frame(pieces, ("k", "lo", "hi", "multiplicity")),
        "decisions": _frame(decisions, ("k", "n", "sign", "antiperiodic", "v_test", "resonance", "chosen")),
    }


def bands_tables(report: BandsReport) -> Tables:
    return fiber_tables(report.fibers)


def spectrum_tables(report: SpectrumReport) -> Tables:
    tables = fiber_tables(report.fibers)
    tables["full_gaps"] = _frame(
        [{"index": g.index, "lo": g.lo, "hi": g.hi, "width": g.width, "kind": g.kind.value}
         for g in report.gaps],
        ("index", "lo", "hi", "width", "kind")
    )
    tables["asymptotics"] = _frame(
        [r.model_dump() for r in report.asymptotics],
        ("n", "predicted_lo", "predicted_hi", "computed_lo", "computed_hi")
    )
    return tables


def check_tables(report: CheckReport) -> Tables:
    return {"checks": _frame(
        [{"name": r.name, "status": r.status.value, "cases": r.cases,
          "evidence": "; ".join(r.evidence)} for r in report.results],
        ("name", "status", "cases", "evidence")
    )}


# ============================================================================
# SCAN TABLES
# ============================================================================


def scan_frame(
    q: PeriodicPotential,
    N: int,
    ks: List[int],
    lambda_min: float,
    lambda_max: float,
    points: int,
    tol: float = TOL_EDGE
) -> pd.DataFrame:
    """
    Real-axis scan of F, F_- and the fiber functions of each k.

    Membership bits are written as 0/1.
    """
    lam = np.linspace(lambda_min, lambda_max, points)
    grid = monodromy_grid(q, lam)
    F, Fminus = grid.F.real, grid.Fminus.real
    columns = {"lambda": lam, "F": F, "Fminus": Fminus}
    for k in ks:
        table = lyapunov_table(F, Fminus, TubeAngle(N, k), tol)
        for name in SCAN_FIELDS:
            values = table[name]
            columns[f"k{k}_{name}"] = values.astype(int) if values.dtype == bool else values
    return pd.DataFrame(columns)


def edge_ticks(fibers: List[FiberReport], lambda_max: float) -> pd.DataFrame:
    """Band edges inside the scanned range, for plotting next to the scan."""
    rows = []
    for fiber in fibers:
        for b in fiber.bands:
            for side, edge in (("lo", b.lo_edge), ("hi", b.hi_edge)):
                if edge.value <= lambda_max:
                    rows.append({"k": fiber.k, "nu": b.nu, "n": b.n, "side": side,
                                 "lambda": edge.value, "kind": edge.kind.value})
    return _frame(rows, ("k", "nu", "n", "side", "lambda", "kind"))
