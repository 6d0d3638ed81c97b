"""
Spectral analysis built on the core numerics.

Modules:
- spectrum.py: per-k pipelines (band edges, multiplicity, gaps) and the full operator
- checks.py: invariant suite behind the `check` subcommand

Usage:
    from analysis import full_spectrum
    from core import PeriodicPotential

    q = PeriodicPotential(segments=((0.0, 0.0), (0.5, 1.0)))
    report = full_spectrum(q, N=4, lambda_max=100.0)
    for gap in report.gaps:
        print(gap.index, gap.lo, gap.hi, gap.kind.value)
"""

from .spectrum import (
    SpectrumSolver,
    periodic_eigenvalues,
    antiperiodic_eigenvalues,
    resonances,
    band_edges,
    multiplicity,
    gaps_for_k,
    asymptotic_edges,
    full_spectrum,
    hausdorff_to_hill,
)
from .checks import (
    ALL_CHECKS,
    CheckContext,
    CheckSuite,
    InvariantCheck,
)

__all__ = [
    # Spectrum pipelines
    'SpectrumSolver',
    'periodic_eigenvalues',
    'antiperiodic_eigenvalues',
    'resonances',
    'band_edges',
    'multiplicity',
    'gaps_for_k',
    'asymptotic_edges',
    'full_spectrum',
    'hausdorff_to_hill',
    # Invariant checks
    'ALL_CHECKS',
    'CheckContext',
    'CheckSuite',
    'InvariantCheck',
]
