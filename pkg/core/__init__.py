"""
Core numerics for the nanotube spectral toolkit.

Modules:
- models.py: pydantic models for potentials, spectral data and reports
- errors.py: exception hierarchy
- config.py: run configuration and its loader
- potential.py: potential constructors, Fourier coefficients, parity
- hill.py: monodromy matrix, Hill discriminants, Dirichlet spectrum
- lyapunov.py: fiber Lyapunov functions and membership predicates
- rootfind.py: bracketed roots and argument-principle zero counts
"""
from .models import (
    PeriodicPotential,
    LabeledEigenvalue,
    Band,
    Gap,
    MultiplicityMap,
    FiberReport,
    HillReport,
    SpectrumReport,
    BandsReport,
    CheckReport,
)
from .errors import SpectrumError, InvalidInputError, NumericFailure
from .config import RunConfig, Tolerances, load_config
from .hill import monodromy, monodromy_grid, hill_report
from .lyapunov import TubeAngle, evaluate, membership

__all__ = [
    # Models
    "PeriodicPotential",
    "LabeledEigenvalue",
    "Band",
    "Gap",
    "MultiplicityMap",
    "FiberReport",
    "HillReport",
    "SpectrumReport",
    "BandsReport",
    "CheckReport",
    # Errors
    "SpectrumError",
    "InvalidInputError",
    "NumericFailure",
    # Config
    "RunConfig",
    "Tolerances",
    "load_config",
    # Numerics
    "monodromy",
    "monodromy_grid",
    "hill_report",
    "TubeAngle",
    "evaluate",
    "membership",
]
