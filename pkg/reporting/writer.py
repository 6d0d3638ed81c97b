"""
Report emission: JSON, CSV and text, to stdout or an output directory.

With an output directory, a report named `spectrum` becomes
`spectrum.json`, `spectrum.txt` or one `spectrum_<table>.csv` per table.
On stdout, CSV tables are separated by `# <table>` lines.
"""

import io
import json
import logging
import sys
from pathlib import Path
from typing import Dict, Optional, TextIO, Union

import pandas as pd
from pydantic import BaseModel

from core.models import BandsReport, CheckReport, HillReport, OutputFormat, SpectrumReport
from .formats import FLOAT_FORMAT, Tables, bands_tables, check_tables, hill_tables, spectrum_tables
from .narrator import narrate, render_table

logger = logging.getLogger(__name__)

TABLE_BUILDERS = {
    HillReport: hill_tables,
    BandsReport: bands_tables,
    SpectrumReport: spectrum_tables,
    CheckReport: check_tables,
}


def to_json(report: BaseModel) -> str:
    """Deterministic JSON text of a report (schema field included)."""
    payload = report.model_dump(mode="json", by_alias=True)
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def to_csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT)
    return buffer.getvalue()


class ReportWriter:
    """
    Writes reports in one output format.

    Args:
        fmt: Output format
        out_dir: Target directory (created on demand); stdout when None
        stream: Stream used when out_dir is None
    """

    def __init__(self, fmt: OutputFormat, out_dir: Optional[Union[str, Path]] = None,
                 stream: Optional[TextIO] = None):
        self.fmt = OutputFormat(fmt)
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.stream = stream or sys.stdout

    def _emit(self, filename: str, text: str):
        if self.out_dir is None:
            self.stream.write(text)
            return
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / filename
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info(f"Wrote {path}")

    def write_tables(self, name: str, tables: Tables):
        """CSV emission of named tables."""
        if self.out_dir is None and len(tables) == 1:
            self._emit(f"{name}.csv", to_csv(next(iter(tables.values()))))
            return
        for table, frame in tables.items():
            if self.out_dir is None:
                self.stream.write(f"# {table}\n")
            self._emit(f"{name}_{table}.csv", to_csv(frame))

    def write(self, name: str, report: BaseModel):
        """Emit a report model in the configured format."""
        if self.fmt == OutputFormat.JSON:
            self._emit(f"{name}.json", to_json(report))
        elif self.fmt == OutputFormat.TEXT:
            self._emit(f"{name}.txt", narrate(report))
        else:
            self.write_tables(name, TABLE_BUILDERS[type(report)](report))

    def write_frame(self, name: str, frame: pd.DataFrame):
        """
        Emit a plain table (the scan output).

        JSON uses the split orientation: columns plus rows.
        """
        if self.fmt == OutputFormat.JSON:
            payload: Dict = {"schema": 1, **frame.to_dict(orient="split", index=False)}
            self._emit(f"{name}.json", json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
        elif self.fmt == OutputFormat.TEXT:
            self._emit(f"{name}.txt", render_table(frame) + "\n")
        else:
            self._emit(f"{name}.csv", to_csv(frame))
