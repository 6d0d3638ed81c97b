"""
Nanotube spectrum analysis - command-line entry point.

Subcommands:
  hill:      python scripts/analyze.py hill [--config run.toml]
  bands:     python scripts/analyze.py bands --format text
  spectrum:  python scripts/analyze.py spectrum --out results/ --threads 4
  scan:      python scripts/analyze.py scan --out results/
  check:     python scripts/analyze.py check [--only monodromy-identities]

Exit status: 0 ok, 1 failed invariant, 2 bad configuration, 3 numeric failure.
"""

import logging
import os
import sys
from typing import List, Optional

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from pydantic import ValidationError

from analysis.checks import CheckContext, CheckSuite
from analysis.spectrum import full_spectrum
from core.config import RunConfig, load_config
from core.errors import InvalidInputError, NumericFailure
from core.hill import hill_report
from core.models import BandsReport, OutputFormat
from reporting.formats import edge_ticks, scan_frame
from reporting.writer import ReportWriter

logger = logging.getLogger("analyze")

SUBCOMMANDS = ("hill", "bands", "spectrum", "scan", "check")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def print_section(title: str):
    """Print formatted section header (stderr, stdout carries reports)."""
    print("\n" + title, file=sys.stderr)
    print("=" * 60, file=sys.stderr)


def _spectrum(config: RunConfig, k_list: Optional[List[int]] = None):
    return full_spectrum(
        config.build_potential(),
        config.N,
        lambda_max=config.lambda_max,
        n_max=config.n_max,
        tolerances=config.tolerances,
        verify=config.verify,
        threads=config.threads,
        k_list=k_list if k_list is not None else config.k_values,
    )


def run_hill(config: RunConfig, writer: ReportWriter) -> int:
    writer.write("hill", hill_report(config.build_potential(), config.energy_range))
    return EXIT_OK


def run_bands(config: RunConfig, writer: ReportWriter) -> int:
    report = _spectrum(config)
    writer.write("bands", BandsReport(
        N=report.N, potential=report.potential, n_cells=report.n_cells, fibers=report.fibers
    ))
    return EXIT_OK


def run_spectrum(config: RunConfig, writer: ReportWriter) -> int:
    writer.write("spectrum", _spectrum(config))
    return EXIT_OK


def run_scan(config: RunConfig, writer: ReportWriter) -> int:
    q = config.build_potential()
    ks = config.scan_k_values
    lambda_min = config.scan.lambda_min if config.scan.lambda_min is not None else q.lower_bound()
    lambda_max = config.energy_range
    frame = scan_frame(q, config.N, ks, lambda_min, lambda_max, config.scan.points,
                       config.tolerances.tol_edge)
    writer.write_frame("scan", frame)
    if writer.out_dir is not None:
        report = _spectrum(config, k_list=ks)
        writer.write_frame("scan_edges", edge_ticks(report.fibers, lambda_max))
    return EXIT_OK


def run_check(config: RunConfig, writer: ReportWriter, only: Optional[List[str]] = None) -> int:
    suite = CheckSuite(CheckContext.from_config(config))
    report = suite.run(only)
    writer.write("check", report)
    for result in report.results:
        logger.info(f"{result.name}: {result.status.value} ({result.cases} cases)")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def build_parser():
    import argparse

    parser = argparse.ArgumentParser(
        description="Spectral analysis of armchair nanotubes with a periodic potential"
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS, help="What to compute")
    parser.add_argument("--config", "-c", help="TOML (or JSON) run configuration")
    parser.add_argument("--out", "-o", help="Output directory (stdout when omitted)")
    parser.add_argument("--format", "-f", choices=[f.value for f in OutputFormat],
                        help="Output format (overrides the config file)")
    parser.add_argument("--threads", "-t", type=int, help="Worker threads for the per-k pipelines")
    parser.add_argument("--only", action="append", metavar="CHECK",
                        help="Run only the named invariant check (repeatable)")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress to stderr")
    return parser


def resolve_config(args) -> RunConfig:
    """Config file (or defaults) with the command-line overrides applied."""
    config = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    if args.format is not None:
        overrides["format"] = args.format
    if args.threads is not None:
        overrides["threads"] = args.threads
    if overrides:
        config = RunConfig.model_validate({**config.model_dump(), **overrides})
    return config


def _field_diagnostic(exc: ValidationError) -> str:
    lines = []
    for error in exc.errors():
        field = ".".join(str(part) for part in error["loc"]) or "config"
        lines.append(f"  {field}: {error['msg']}")
    return "\n".join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the exit status."""
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    try:
        config = resolve_config(args)
    except ValidationError as exc:
        print_section("CONFIGURATION ERROR")
        print(_field_diagnostic(exc), file=sys.stderr)
        return EXIT_CONFIG
    except InvalidInputError as exc:
        print_section("CONFIGURATION ERROR")
        print(f"  {exc}", file=sys.stderr)
        return EXIT_CONFIG

    writer = ReportWriter(config.format, args.out)
    runners = {
        "hill": run_hill,
        "bands": run_bands,
        "spectrum": run_spectrum,
        "scan": run_scan,
    }
    try:
        if args.subcommand == "check":
            return run_check(config, writer, args.only)
        return runners[args.subcommand](config, writer)
    except InvalidInputError as exc:
        print_section("INVALID INPUT")
        print(f"  {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailure as exc:
        print_section("NUMERIC FAILURE")
        print(f"  {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
