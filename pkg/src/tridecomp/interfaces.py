"""This module contains data models for reports, program searches,
certificates and run configuration.
"""

from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, BeforeValidator, Field, PlainSerializer, model_validator
from typing_extensions import Annotated

from tridecomp.constants import (
    DEFAULT_GRID_RESOLUTION,
    DEFAULT_TOLERANCE,
    EXACT_MODE_MAX_N,
    REPORT_SCHEMA_VERSION,
)
from tridecomp.exceptions import ExactModeTooLarge
from tridecomp.scalar import NumericMode, format_scalar


def _read_scalar(value: Any) -> Any:
    if isinstance(value, str):
        if "sqrt" in value:
            return value
        return Fraction(value)
    return value


serializer = PlainSerializer(lambda x: x.value, when_used="always")
scalar_serializer = PlainSerializer(format_scalar, when_used="always")

ScalarValue = Annotated[Any, BeforeValidator(_read_scalar), scalar_serializer]


class Verdict(str, Enum):
    """Interface for certificate verdict enumerator."""

    CERTIFIED_LE_1 = "certified_le_1"
    EXCEEDS_1 = "exceeds_1"


class OutputFormat(str, Enum):
    """Interface for report output format enumerator."""

    JSON = "json"
    CSV = "csv"


class TriangleWeight(BaseModel):
    """Weight of one triangle ``a < b < c``."""

    a: int
    b: int
    c: int
    weight: ScalarValue

    @property
    def vertices(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


class EdgeSum(BaseModel):
    """Total weight of the triangles through edge ``u < v``."""

    u: int
    v: int
    total: ScalarValue


class BStatistics(BaseModel):
    """Measured ``b = N(y) - N(y, z)`` over all ``(T, y, z)`` with ``y, z``
    adjacent common neighbours of ``T``, next to ``d(1-3d)/(1-2d)``."""

    count: int = 0
    mean: Optional[float] = None
    minimum: Optional[float] = None
    maximum: Optional[float] = None
    reference: Optional[float] = None


class ReportSummary(BaseModel):
    """Summary block of a triangle weight report."""

    n: Annotated[int, Field(ge=1)]
    min_degree: int
    edge_count: int
    triangle_count: int
    mode: Annotated[NumericMode, serializer]
    min_weight: Optional[ScalarValue] = None
    min_witness: Optional[tuple[int, int, int]] = None
    above_threshold: bool
    b_statistics: BStatistics = BStatistics()


class TriangleWeightReport(BaseModel):
    """Interface for the triangle weight report.

    Example
    =======

    >>> report = decompose(gen_complete(5), NumericMode.EXACT)
    >>> report.summary.min_weight
        Fraction(1, 3)

    Triangles and edge sums are listed in lexicographic order. Edges lying
    in no triangle are listed in ``uncovered_edges`` and carry no sum.
    """

    schema_version: int = REPORT_SCHEMA_VERSION
    summary: ReportSummary
    triangles: list[TriangleWeight]
    edge_sums: list[EdgeSum]
    uncovered_edges: list[tuple[int, int]] = []

    @model_validator(mode="after")
    def check_minimum(self) -> "TriangleWeightReport":
        """Minimum weight and witness must match the triangle records."""
        if not self.triangles:
            if self.summary.min_witness is not None:
                msg = "a report without triangles cannot have a minimum witness"
                raise ValueError(msg)
            return self
        lowest = min(self.triangles, key=lambda record: record.weight)
        if self.summary.min_weight != lowest.weight:
            msg = f"min_weight {self.summary.min_weight} differs from {lowest.weight}"
            raise ValueError(msg)
        return self

    @property
    def mode(self) -> NumericMode:
        return self.summary.mode

    @property
    def min_weight(self):
        return self.summary.min_weight

    @property
    def min_witness(self) -> Optional[tuple[int, int, int]]:
        return self.summary.min_witness

    @property
    def weights(self) -> dict[tuple[int, int, int], Any]:
        return {record.vertices: record.weight for record in self.triangles}

    @property
    def edge_totals(self) -> dict[tuple[int, int], Any]:
        return {(record.u, record.v): record.total for record in self.edge_sums}


class EdgeSumVerdict(BaseModel):
    """Result of checking that every covered edge sums to one."""

    passed: bool
    tolerance: float
    worst_edge: Optional[tuple[int, int]] = None
    worst_error: float = 0.0


class SearchResult(BaseModel):
    """Best grid point of a level 9 or level 10 objective."""

    level: int
    d: float
    resolution: int
    best_point: dict[str, float]
    best_value: float
    evaluations: int


class ClampTestResult(BaseModel):
    """Outcome of a randomized clamping test at one level.

    ``worst_gap`` is the largest ``objective(pt) - objective(clamp(pt))``
    seen; the test passes when it never exceeds the tolerance.
    """

    level: int
    d: float
    trials: int
    seed: int
    tolerance: float
    passed: bool
    worst_gap: float
    worst_point: Optional[dict[str, float]] = None
    min_clamped_value: Optional[float] = None


class Certificate(BaseModel):
    """Closed-form check of the final objective at one value of ``d``."""

    d: ScalarValue
    value: ScalarValue
    value_float: float
    verdict: Annotated[Verdict, serializer]
    chain_valid: bool
    q_at_zero: ScalarValue
    q_at_d: ScalarValue
    quadratic: ScalarValue


class CheckResult(BaseModel):
    """Outcome of one invariant check."""

    name: str
    passed: bool
    skipped: bool = False
    detail: str = ""


class VerificationSummary(BaseModel):
    """All invariant checks run on one input graph."""

    n: int
    mode: Annotated[NumericMode, serializer]
    checks: list[CheckResult]
    min_weight: Optional[ScalarValue] = None
    min_witness: Optional[tuple[int, int, int]] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]


class RunConfig(BaseModel):
    """Validated options of one command line invocation."""

    command: str
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    mode: Annotated[NumericMode, serializer] = NumericMode.FLOAT
    tolerance: float = DEFAULT_TOLERANCE
    seed: int = 0
    d: Optional[str] = None
    level: Optional[int] = None
    resolution: Annotated[int, Field(ge=2)] = DEFAULT_GRID_RESOLUTION
    trials: Annotated[int, Field(ge=1)] = 1
    threads: int = 1
    output_format: Annotated[OutputFormat, serializer] = OutputFormat.JSON
    n: Optional[int] = None
    p: Optional[float] = None
    delta_min: Optional[int] = None
    k: Optional[int] = None
    base: Optional[str] = None
    part_size: Optional[int] = None
    blowup_mode: Optional[str] = None

    @model_validator(mode="after")
    def check_options(self) -> "RunConfig":
        """Normalize tolerance and validate seed and pool size."""
        if self.mode == NumericMode.EXACT:
            self.tolerance = 0.0
        elif self.tolerance <= 0:
            msg = f"tolerance must be positive in float mode, got {self.tolerance}"
            raise ValueError(msg)
        if not 0 <= self.seed < 2**64:
            msg = f"seed {self.seed} is not a 64-bit unsigned integer"
            raise ValueError(msg)
        if self.threads < 1:
            msg = f"threads must be at least 1, got {self.threads}"
            raise ValueError(msg)
        return self

    def check_graph_size(self, n: int) -> None:
        """Refuse exact arithmetic on graphs above the supported size."""
        if self.mode == NumericMode.EXACT and n > EXACT_MODE_MAX_N:
            msg = f"exact mode supports n <= {EXACT_MODE_MAX_N}, got n={n}"
            raise ExactModeTooLarge(msg)
