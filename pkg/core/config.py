"""
Run configuration for the CLI.

Config files are TOML (JSON with the same structure is accepted too):

    N = 4
    k_list = "all"          # or [0, 1]
    lambda_max = 150.0      # or n_max = 6
    format = "json"
    threads = 1

    [potential]
    segments = [[0.0, 0.0], [0.25, 1.5], [0.5, -1.0], [0.75, 0.5]]
    deltas = []             # [[a, w], ...]
    # samples = [...]       # instead of segments

    [tolerances]
    tol_root = 1e-12
    tol_edge = 1e-9
    tol_tang = 1e-9

    [scan]
    points = 2001

    [checks]
    seed = 7

Nothing is read from the environment.
"""

import json
import logging
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import InvalidInputError
from .models import OutputFormat, PeriodicPotential
from .potential import from_samples

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA_MAX = 150.0


class PotentialSection(BaseModel):
    """The [potential] table: exactly one of segments / samples, plus deltas."""
    model_config = ConfigDict(extra="forbid")

    segments: Optional[List[Tuple[float, float]]] = None
    samples: Optional[List[float]] = None
    deltas: List[Tuple[float, float]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_source(self):
        if (self.segments is None) == (self.samples is None):
            raise ValueError("exactly one of 'segments' or 'samples' must be given")
        try:
            self.build()
        except ValidationError as exc:
            raise ValueError(exc.errors()[0]["msg"]) from None
        except InvalidInputError as exc:
            raise ValueError(str(exc)) from None
        return self

    def build(self) -> PeriodicPotential:
        """The validated potential."""
        if self.samples is not None:
            base = from_samples(self.samples)
            return PeriodicPotential(segments=base.segments, deltas=tuple(self.deltas))
        return PeriodicPotential(segments=tuple(self.segments), deltas=tuple(self.deltas))


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tol_root: float = Field(default=1e-12, gt=0)
    """Root refinement tolerance in z"""

    tol_edge: float = Field(default=1e-9, gt=0)
    """Boundary tolerance of the membership tests"""

    tol_tang: float = Field(default=1e-9, gt=0)
    """Tangency threshold on |f|"""


class ScanSection(BaseModel):
    """The [scan] table: grid for the `scan` subcommand."""
    model_config = ConfigDict(extra="forbid")

    points: int = Field(default=2001, ge=2)
    lambda_min: Optional[float] = None
    k_list: Optional[List[int]] = None


class ChecksSection(BaseModel):
    """The [checks] table: sample sizes of the invariant suite."""
    model_config = ConfigDict(extra="forbid")

    seed: int = 7
    random_lambdas: int = Field(default=1000, ge=1)
    random_potentials: int = Field(default=5, ge=1)
    grid_points: int = Field(default=10000, ge=10)
    localization_depth: int = Field(default=8, ge=1)


class RunConfig(BaseModel):
    """
    Validated run configuration.

    Exactly one of lambda_max / n_max is set; with neither given,
    lambda_max defaults to 150.
    """
    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "N": 4,
                "k_list": "all",
                "lambda_max": 150.0,
                "potential": {"segments": [[0.0, 0.0], [0.5, 1.0]]}
            }
        }
    )

    potential: PotentialSection = Field(
        default_factory=lambda: PotentialSection(
            segments=[(0.0, 0.0), (0.25, 1.5), (0.5, -1.0), (0.75, 0.5)]
        )
    )
    N: int = Field(default=4, ge=1)
    k_list: Union[Literal["all"], List[int]] = "all"
    lambda_max: Optional[float] = None
    n_max: Optional[int] = Field(default=None, ge=1)
    format: OutputFormat = OutputFormat.JSON
    threads: int = Field(default=1, ge=1)
    verify: bool = True
    """Compute n0 and extend the cell range past it"""

    tolerances: Tolerances = Field(default_factory=Tolerances)
    scan: ScanSection = Field(default_factory=ScanSection)
    checks: ChecksSection = Field(default_factory=ChecksSection)

    @model_validator(mode="before")
    @classmethod
    def default_range(cls, data):
        if isinstance(data, dict) and data.get("lambda_max") is None and data.get("n_max") is None:
            data = {**data, "lambda_max": DEFAULT_LAMBDA_MAX}
        return data

    @field_validator("lambda_max")
    @classmethod
    def check_lambda_max(cls, value):
        if value is not None and not value > 0:
            raise ValueError("lambda_max must be positive")
        return value

    @model_validator(mode="after")
    def check_consistency(self):
        if self.lambda_max is not None and self.n_max is not None:
            raise ValueError("set only one of 'lambda_max' and 'n_max'")
        for k in self.k_values + (self.scan.k_list or []):
            if not 0 <= k < self.N:
                raise ValueError(f"k={k} outside 0..{self.N - 1}")
        return self

    @property
    def k_values(self) -> List[int]:
        """Requested quasi-momentum indices, sorted and unique."""
        if self.k_list == "all":
            return list(range(self.N))
        return sorted(set(self.k_list))

    @property
    def scan_k_values(self) -> List[int]:
        return sorted(set(self.scan.k_list)) if self.scan.k_list is not None else self.k_values

    @property
    def energy_range(self) -> float:
        """lambda_max, or the free-tube energy reaching band n_max."""
        if self.lambda_max is not None:
            return self.lambda_max
        return (math.pi * (self.n_max + 1) / 2) ** 2

    def build_potential(self) -> PeriodicPotential:
        return self.potential.build()


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Read and validate a configuration file.

    Args:
        path: A .toml file (or .json with the same structure)

    Returns:
        RunConfig

    Raises:
        InvalidInputError: unreadable file or unknown extension
        pydantic.ValidationError: malformed contents
    """
    path = Path(path)
    try:
        if path.suffix == ".json":
            data = json.loads(path.read_text(encoding="utf-8"))
        elif path.suffix == ".toml":
            with path.open("rb") as handle:
                data = tomllib.load(handle)
        else:
            raise InvalidInputError(f"config must be .toml or .json, got '{path.name}'")
    except OSError as exc:
        raise InvalidInputError(f"cannot read config {path}: {exc}") from exc
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot parse config {path}: {exc}") from exc

    logger.info(f"Loaded config from {path}")
    return RunConfig.model_validate(data)
