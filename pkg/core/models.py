"""
Data models for the nanotube spectral toolkit.

Provides typed, validated structures for:
- Periodic potentials (piecewise constant values plus delta terms)
- Labeled eigenvalues, bands, gaps and multiplicity maps of the fibers H_k
- Full-operator spectrum reports and Hill-operator tables

Every energy-valued field is stored with 12 significant digits, so a report
survives a JSON round trip unchanged. Minus infinity is written as "-inf".
"""

import math
from enum import Enum
from typing import Annotated, List, Literal, Optional, Tuple

from pydantic import (
    AfterValidator,
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    field_validator,
    model_validator,
)


SIGNIFICANT_DIGITS = 12


def round_sig(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """
    Round a float to a fixed number of significant digits.

    Args:
        value: Number to round (infinities pass through)
        digits: Significant digits to keep

    Returns:
        Rounded float; idempotent under repeated application
    """
    if value == 0 or not math.isfinite(value):
        return float(value)
    return float(f"{value:.{digits}g}")


def _parse_real(value):
    if isinstance(value, str):
        return float(value.strip().lower())
    return value


def _emit_real(value: float):
    if math.isinf(value):
        return "-inf" if value < 0 else "inf"
    return value


Real12 = Annotated[
    float,
    BeforeValidator(_parse_real),
    AfterValidator(round_sig),
    PlainSerializer(_emit_real, when_used="json"),
]
"""Float stored with 12 significant digits; infinities serialize as strings."""


# ============================================================================
# ENUMS
# ============================================================================


class EigenKind(str, Enum):
    """Families of labeled spectral points."""
    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"
    RESONANCE = "resonance"
    DIRICHLET = "dirichlet"
    LYAPUNOV_ZERO = "lyapunov-zero"


class GapKind(str, Enum):
    """Gap taxonomy read off the two endpoint families."""
    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"
    RESONANCE = "resonance"
    P_MIX = "p-mix"
    R_MIX = "r-mix"
    EMPTY = "empty"


class OutputFormat(str, Enum):
    """Emission formats understood by the CLI."""
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class CheckStatus(str, Enum):
    """Outcome of one invariant check."""
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


# ============================================================================
# POTENTIAL
# ============================================================================


class PeriodicPotential(BaseModel):
    """
    A 1-periodic potential: piecewise constant segments plus delta terms.

    Segment i covers [t_i, t_{i+1}) with value v_i, the last one wraps to 1.
    A delta (a, w) contributes w*delta(t - a); the derivative of a solution
    jumps by w*y(a) across a.
    """
    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "segments": [[0.0, 0.0], [0.25, 1.5], [0.5, -1.0], [0.75, 0.5]],
                "deltas": [[0.3, 2.0]]
            }
        }
    )

    segments: Tuple[Tuple[float, float], ...] = ((0.0, 0.0),)
    deltas: Tuple[Tuple[float, float], ...] = ()

    @field_validator("segments")
    @classmethod
    def check_segments(cls, segments):
        if not segments:
            raise ValueError("at least one segment is required")
        starts = [t for t, _ in segments]
        if starts[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        for prev, cur in zip(starts, starts[1:]):
            if not cur > prev:
                raise ValueError("breakpoints must be strictly increasing")
        if starts[-1] >= 1.0:
            raise ValueError("breakpoints must lie in [0, 1)")
        if not all(math.isfinite(v) for _, v in segments):
            raise ValueError("segment values must be finite")
        return segments

    @field_validator("deltas")
    @classmethod
    def check_deltas(cls, deltas):
        positions = [a for a, _ in deltas]
        for a in positions:
            if not 0.0 < a < 1.0:
                raise ValueError(f"delta position {a} must lie strictly inside (0, 1)")
        for prev, cur in zip(positions, positions[1:]):
            if not cur > prev:
                raise ValueError("delta positions must be strictly increasing")
        if not all(math.isfinite(w) for _, w in deltas):
            raise ValueError("delta weights must be finite")
        return deltas

    @property
    def pieces(self) -> List[Tuple[float, float, float]]:
        """Segments as (start, end, value) triples covering [0, 1)."""
        starts = [t for t, _ in self.segments] + [1.0]
        return [
            (starts[i], starts[i + 1], v)
            for i, (_, v) in enumerate(self.segments)
        ]

    def value_range(self) -> Tuple[float, float]:
        """Smallest and largest segment value."""
        values = [v for _, v in self.segments]
        return min(values), max(values)

    def lower_bound(self) -> float:
        """
        An energy below the whole Hill spectrum.

        Negative delta weights can bind a state down to about -w^2/4 below
        the well floor, so they are accounted for generously.
        """
        floor = min(0.0, self.value_range()[0])
        for _, w in self.deltas:
            if w < 0:
                floor -= w * w / 4.0 + abs(w)
        return floor - 1.0


# ============================================================================
# LABELED SPECTRAL DATA
# ============================================================================


class LabeledEigenvalue(BaseModel):
    """
    A real spectral point with its label.

    Periodic and antiperiodic points use the band index of lambda_{nu,n}^{k,+-};
    resonances use the index n of the interval kappa_n they live in;
    Dirichlet points and Lyapunov zeros are simply numbered from 1.
    """
    value: Real12
    kind: EigenKind
    nu: Optional[Literal[1, 2]] = None
    n: int = Field(ge=0)
    sign: Optional[Literal["-", "+"]] = None
    k: Optional[int] = None

    @property
    def label(self) -> str:
        """Compact text label, e.g. 'periodic[2,0]+ k=1'."""
        branch = f"{self.nu}," if self.nu is not None else ""
        sign = self.sign or ""
        tail = f" k={self.k}" if self.k is not None else ""
        return f"{self.kind.value}[{branch}{self.n}]{sign}{tail}"


class Interval(BaseModel):
    """Closed or open interval [lo, hi] with an optional index."""
    lo: Real12
    hi: Real12
    n: Optional[int] = None

    @property
    def empty(self) -> bool:
        return self.lo >= self.hi

    @property
    def length(self) -> float:
        return max(0.0, self.hi - self.lo)


class Band(BaseModel):
    """
    Spectral band S_{nu,n}^k = [E_{nu,n-1}^{k,+}, E_{nu,n}^{k,-}] with the
    labeled points realizing both ends.
    """
    nu: Literal[1, 2]
    n: int = Field(ge=1)
    k: int
    lo: Real12
    hi: Real12
    lo_edge: LabeledEigenvalue
    hi_edge: LabeledEigenvalue
    warnings: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_order(self):
        if self.lo > self.hi:
            raise ValueError(f"band ({self.nu},{self.n}) has lo > hi")
        return self

    def contains(self, lam: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= lam <= self.hi + tol


class Gap(BaseModel):
    """
    Gap G_{k,n} (k set) or full-operator gap G_n (k is None).

    Empty exactly when lo >= hi; its classification is then 'empty'.
    """
    k: Optional[int] = None
    index: int = Field(ge=0)
    lo: Real12
    hi: Real12
    kind: GapKind
    lo_kind: Optional[EigenKind] = None
    hi_kind: Optional[EigenKind] = None

    @property
    def empty(self) -> bool:
        return self.lo >= self.hi

    @property
    def width(self) -> float:
        return max(0.0, self.hi - self.lo)


class MultiplicityPiece(BaseModel):
    """An interval of sigma_ac(H_k) with constant multiplicity."""
    lo: Real12
    hi: Real12
    multiplicity: Literal[2, 4]


class MultiplicityMap(BaseModel):
    """Piecewise multiplicity of the absolutely continuous spectrum of H_k."""
    k: int
    pieces: List[MultiplicityPiece] = Field(default_factory=list)

    def multiplicity_at(self, lam: float) -> int:
        """
        Multiplicity at a point (0 outside the bands).

        At a shared endpoint the larger value wins.
        """
        found = [p.multiplicity for p in self.pieces if p.lo <= lam <= p.hi]
        return max(found) if found else 0


class EdgeDecision(BaseModel):
    """
    How E_{1,2n-1}^{k,+-} was chosen: antiperiodic point or resonance.

    Records the v_k test value at the antiperiodic point and, when a
    resonance exists in the closed kappa_n, xi_k at that resonance.
    """
    n: int = Field(ge=1)
    sign: Literal["-", "+"]
    antiperiodic: Real12
    v_test: Real12
    resonance: Optional[Real12] = None
    xi_at_resonance: Optional[Real12] = None
    chosen: EigenKind
    warning: Optional[str] = None


class FiberReport(BaseModel):
    """Everything computed for one fiber operator H_k."""
    k: int
    N: int
    s: Real12
    c: Real12
    periodic: List[LabeledEigenvalue] = Field(default_factory=list)
    antiperiodic: List[LabeledEigenvalue] = Field(default_factory=list)
    kappa: List[Interval] = Field(default_factory=list)
    resonances: List[LabeledEigenvalue] = Field(default_factory=list)
    decisions: List[EdgeDecision] = Field(default_factory=list)
    bands: List[Band] = Field(default_factory=list)
    multiplicity: MultiplicityMap
    gaps: List[Gap] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)

    def band(self, nu: int, n: int) -> Optional[Band]:
        return next((b for b in self.bands if b.nu == nu and b.n == n), None)

    def gap(self, index: int) -> Optional[Gap]:
        return next((g for g in self.gaps if g.index == index), None)


class HillAnchor(BaseModel):
    """Lyapunov zero eta_n and Dirichlet eigenvalue mu_n of one Hill cell."""
    n: int = Field(ge=1)
    eta: Real12
    mu: Real12
    F_at_mu: Real12
    Fminus_at_mu: Real12
    Fminus_at_eta: Real12


class HillGap(BaseModel):
    """Hill gap (lambda~_n^-, lambda~_n^+); n = 0 is (-inf, lambda~_0^+)."""
    n: int = Field(ge=0)
    lo: Real12
    hi: Real12
    degenerate: bool = False


class HillReport(BaseModel):
    """Tables of the scalar Hill operator emitted by the `hill` subcommand."""
    schema_version: Literal[1] = Field(default=1, alias="schema")
    potential: PeriodicPotential
    anchors: List[HillAnchor] = Field(default_factory=list)
    gaps: List[HillGap] = Field(default_factory=list)
    dirichlet: List[LabeledEigenvalue] = Field(default_factory=list)
    lyapunov_zeros: List[LabeledEigenvalue] = Field(default_factory=list)

    model_config = ConfigDict(populate_by_name=True)


class AsymptoticRow(BaseModel):
    """Leading-order prediction against the computed E_{2,2n}^{0,+-}."""
    n: int = Field(ge=1)
    predicted_lo: Real12
    predicted_hi: Real12
    computed_lo: Real12
    computed_hi: Real12

    @property
    def residuals(self) -> Tuple[float, float]:
        return (
            abs(self.computed_lo - self.predicted_lo),
            abs(self.computed_hi - self.predicted_hi)
        )


class SpectrumReport(BaseModel):
    """
    Full-operator report: per-k fibers, gaps G_n, flat bands and asymptotics.

    Serialized with a versioned `schema` field.
    """
    schema_version: Literal[1] = Field(default=1, alias="schema")
    N: int = Field(ge=1)
    potential: PeriodicPotential
    n_cells: int = Field(ge=1)
    lambda_max: Optional[Real12] = None
    n0: Optional[int] = None
    fibers: List[FiberReport] = Field(default_factory=list)
    gaps: List[Gap] = Field(default_factory=list)
    hill_gaps: List[HillGap] = Field(default_factory=list)
    dirichlet: List[LabeledEigenvalue] = Field(default_factory=list)
    asymptotics: List[AsymptoticRow] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    model_config = ConfigDict(populate_by_name=True)

    def fiber(self, k: int) -> Optional[FiberReport]:
        return next((f for f in self.fibers if f.k == k), None)


class BandsReport(BaseModel):
    """Per-k fibers emitted by the `bands` subcommand."""
    schema_version: Literal[1] = Field(default=1, alias="schema")
    N: int = Field(ge=1)
    potential: PeriodicPotential
    n_cells: int = Field(ge=1)
    fibers: List[FiberReport] = Field(default_factory=list)

    model_config = ConfigDict(populate_by_name=True)


# ============================================================================
# INVARIANT CHECKS
# ============================================================================


class CheckResult(BaseModel):
    """Outcome of one named invariant with its evidence lines."""
    name: str
    status: CheckStatus
    cases: int = Field(default=0, ge=0)
    """Number of individual comparisons made"""

    evidence: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status != CheckStatus.FAIL


class CheckReport(BaseModel):
    """All check results of one `check` run."""
    schema_version: Literal[1] = Field(default=1, alias="schema")
    N: int = Field(ge=1)
    results: List[CheckResult] = Field(default_factory=list)

    model_config = ConfigDict(populate_by_name=True)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)
