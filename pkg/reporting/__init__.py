"""
Report emission for the CLI.

Modules:
- formats.py: fixed-column tables (pandas) for every report
- narrator.py: text rendering with section banners
- writer.py: JSON / CSV / text output to stdout or a directory
"""

from .formats import scan_frame, edge_ticks, format_real
from .narrator import Narrator, narrate
from .writer import ReportWriter, to_json

__all__ = ['scan_frame', 'edge_ticks', 'format_real', 'Narrator', 'narrate', 'ReportWriter', 'to_json']
