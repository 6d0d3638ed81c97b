"""
Text narrator - fixed-width tables with section banners.

Turns the report models into the `--format text` output.
"""

from typing import Callable, Dict, List, Optional

import pandas as pd

from core.models import BandsReport, CheckReport, CheckStatus, HillReport, SpectrumReport
from .formats import (
    FLOAT_FORMAT,
    Tables,
    bands_tables,
    check_tables,
    hill_tables,
    spectrum_tables,
)

RULE = "=" * 60

SECTION_TITLES = {
    "hill_anchors": "HILL CELLS (eta_n, mu_n)",
    "hill_gaps": "HILL GAPS",
    "hill_points": "DIRICHLET POINTS AND LYAPUNOV ZEROS",
    "eigenvalues": "PERIODIC, ANTIPERIODIC AND RESONANCE POINTS",
    "bands": "BANDS",
    "gaps": "FIBER GAPS",
    "multiplicity": "MULTIPLICITY",
    "decisions": "EDGE DECISIONS",
    "full_gaps": "GAPS OF THE FULL OPERATOR",
    "asymptotics": "HIGH-ENERGY ASYMPTOTICS",
    "checks": "INVARIANT CHECKS",
    "flat_bands": "FLAT BANDS (DIRICHLET POINTS)",
}


def render_table(frame: pd.DataFrame) -> str:
    if frame.empty:
        return "  (none)"
    text = frame.to_string(index=False, float_format=lambda v: FLOAT_FORMAT % v, na_rep="-")
    return "\n".join("  " + line for line in text.splitlines())


class Narrator:
    """
    Text renderer for the report models.

    One section per table, framed by a header and a closing rule.
    """

    def __init__(self, title: str, tables: Tables, summary: Optional[List[str]] = None,
                 notes: Optional[List[str]] = None):
        """
        Args:
            title: Report title shown in the header banner
            tables: Named tables in display order
            summary: Key-value lines under the header
            notes: Warnings and remarks printed at the end
        """
        self.title = title
        self.tables = tables
        self.summary = summary or []
        self.notes = notes or []

    def generate_full_report(self) -> str:
        lines = [RULE, self.title, RULE]
        lines.extend(self.summary)
        for name, frame in self.tables.items():
            lines.append(self._narrate_section(name, frame))
        if self.notes:
            lines.append(self._narrate_notes())
        lines.append(RULE)
        return "\n".join(lines) + "\n"

    def _narrate_section(self, name: str, frame: pd.DataFrame) -> str:
        title = SECTION_TITLES.get(name, name.upper())
        return "\n".join(["", title, "-" * len(title), render_table(frame)])

    def _narrate_notes(self) -> str:
        lines = ["", "NOTES", "-----"]
        lines.extend(f"  * {note}" for note in self.notes)
        return "\n".join(lines)


# ============================================================================
# PER-REPORT NARRATORS
# ============================================================================


def _fiber_warnings(fibers) -> List[str]:
    notes = []
    for fiber in fibers:
        notes.extend(f"k={fiber.k}: {w}" for w in fiber.warnings)
        for band in fiber.bands:
            notes.extend(f"k={fiber.k} band ({band.nu},{band.n}): {w}" for w in band.warnings)
    return notes


def narrate_hill(report: HillReport) -> str:
    summary = [f"cells: {len(report.anchors)}", f"segments: {list(report.potential.segments)}"]
    return Narrator("HILL OPERATOR", hill_tables(report), summary).generate_full_report()


def narrate_bands(report: BandsReport) -> str:
    summary = [f"N: {report.N}", f"cells: {report.n_cells}",
               f"k: {[f.k for f in report.fibers]}"]
    return Narrator("FIBER BANDS", bands_tables(report), summary,
                    _fiber_warnings(report.fibers)).generate_full_report()


def narrate_spectrum(report: SpectrumReport) -> str:
    summary = [
        f"N: {report.N}",
        f"cells: {report.n_cells}",
        f"n0: {report.n0 if report.n0 is not None else '-'}",
    ]
    tables = spectrum_tables(report)
    flat = report.dirichlet
    if flat:
        tables["flat_bands"] = pd.DataFrame(
            [{"n": p.n, "value": p.value} for p in flat], columns=["n", "value"]
        )
    return Narrator("NANOTUBE SPECTRUM", tables, summary,
                    report.notes + _fiber_warnings(report.fibers)).generate_full_report()


def narrate_checks(report: CheckReport) -> str:
    failed = [r.name for r in report.results if r.status == CheckStatus.FAIL]
    summary = [
        f"N: {report.N}",
        f"checks: {len(report.results)}",
        f"result: {'FAIL ' + ', '.join(failed) if failed else 'PASS'}",
    ]
    notes = [f"{r.name}: {line}" for r in report.results for line in r.evidence]
    return Narrator("INVARIANT CHECKS", check_tables(report), summary, notes).generate_full_report()


NARRATORS: Dict[type, Callable[..., str]] = {
    HillReport: narrate_hill,
    BandsReport: narrate_bands,
    SpectrumReport: narrate_spectrum,
    CheckReport: narrate_checks,
}


def narrate(report) -> str:
    """Text rendering of any report model."""
    return NARRATORS[type(report)](report)
