from abc import ABC
from typing import Annotated, Any, Literal

import sympy
from pydantic import BaseModel, Discriminator, Field, Tag, TypeAdapter, field_validator

from ..coeff import MotCoeff, SpecMode
from ..errors import MalformedInputError

Computation = Literal[
    "zeta",
    "psi",
    "theta",
    "blowup",
    "eisenstein",
    "hall",
    "quot",
    "subbundles",
    "oracle",
    "torsors",
    "funceq",
    "rank2-funceq",
]


def _check_coefficient_literal(value: str | int) -> str | int:
    try:
        MotCoeff.parse(value)
    except MalformedInputError as e:
        raise ValueError(str(e)) from e
    return value


def _check_spec(value: str) -> str:
    try:
        SpecMode.parse(value)
    except MalformedInputError as e:
        raise ValueError(str(e)) from e
    return value


# ============================================================================
# Base Classes
# ============================================================================


class BaseExpectedResult(BaseModel, ABC):
    """
    Abstract base class for all expected result types.

    Every subclass carries a ``result_type`` naming what part of a computation's
    output it inspects and, where there is more than one way to inspect it, a
    ``test_type``.
    """

    pass


# ============================================================================
# Coefficient Tests
# ============================================================================


class BaseCoefficientExpectedResult(BaseExpectedResult, ABC):
    """
    Base class for tests on a single coefficient.

    ``monomial`` is a coweight triple ``"f1,...,fr;c;m"`` for lattice series and an
    integer index (power of q, u or x) for one-variable series.
    """

    result_type: Literal["coefficient"] = "coefficient"
    monomial: str | int


class CoefficientMatchExpectedResult(BaseCoefficientExpectedResult):
    """
    Tests that a coefficient equals a Laurent polynomial in L (and s).

    YAML example:
        result_type: coefficient
        test_type: match
        monomial: "-1;0;0"
        expected_value: "L^3 - L"
    """

    test_type: Literal["match"] = "match"
    expected_value: str | int

    @field_validator("expected_value")
    @classmethod
    def expected_value_is_coefficient(cls, v):
        return _check_coefficient_literal(v)


class CoefficientPointCountExpectedResult(BaseCoefficientExpectedResult):
    """
    Tests the value of a coefficient under L -> q.

    YAML example:
        result_type: coefficient
        test_type: point_count
        monomial: 2
        q: 3
        expected_value: 91
    """

    test_type: Literal["point_count"] = "point_count"
    q: int
    expected_value: int

    @field_validator("q")
    @classmethod
    def q_is_prime(cls, v):
        if not sympy.isprime(v):
            raise ValueError(f"q must be prime, got {v}")
        return v


# ============================================================================
# Whole-Series Tests
# ============================================================================


class ReferenceComputation(BaseModel):
    """A second computation whose output a series is compared against."""

    model_config = {"extra": "forbid"}

    computation: Computation
    parameters: dict[str, Any] = Field(default_factory=dict)
    spec: str = "generic"

    @field_validator("spec")
    @classmethod
    def spec_is_valid(cls, v):
        return _check_spec(v)


class BaseSeriesExpectedResult(BaseExpectedResult, ABC):
    result_type: Literal["series"] = "series"


class SeriesNonNegativeExpectedResult(BaseSeriesExpectedResult):
    """
    Tests that every coefficient counts points: non-negative at L = q for each q.

    YAML example:
        result_type: series
        test_type: nonnegative
        primes: [2, 3, 5]
    """

    test_type: Literal["nonnegative"] = "nonnegative"
    primes: list[int] = Field(default_factory=lambda: [2, 3, 5], min_length=1)

    @field_validator("primes")
    @classmethod
    def primes_are_prime(cls, v):
        bad = [p for p in v if not sympy.isprime(p)]
        if bad:
            raise ValueError(f"not prime: {bad}")
        return v


class SeriesSpecializesToExpectedResult(BaseSeriesExpectedResult):
    """
    Tests that the series under ``spec`` equals another computation's output.

    YAML example:
        result_type: series
        test_type: specializes_to
        spec: "tate:1"
        reference:
          computation: theta
          parameters: {type: A, rank: 1, d: 1, order: 12}
    """

    test_type: Literal["specializes_to"] = "specializes_to"
    spec: str
    reference: ReferenceComputation

    @field_validator("spec")
    @classmethod
    def spec_is_valid(cls, v):
        return _check_spec(v)


# ============================================================================
# Count, Residual and Label Tests
# ============================================================================


class CountMatchExpectedResult(BaseExpectedResult):
    """
    Tests a finite-field count.

    YAML example:
        result_type: count
        test_type: match
        expected_value: 24
    """

    result_type: Literal["count"] = "count"
    test_type: Literal["match"] = "match"
    expected_value: int = Field(..., ge=0)


class BaseResidualExpectedResult(BaseExpectedResult, ABC):
    """
    Base class for functional-equation residuals.

    ``variant`` selects a convention variant by key (``"w/+1/-1"``, ``"-1/+1"``); when
    omitted, the residual of the active convention is inspected.
    """

    result_type: Literal["residual"] = "residual"
    variant: str | None = None


class ResidualZeroExpectedResult(BaseResidualExpectedResult):
    test_type: Literal["zero"] = "zero"


class ResidualNonZeroExpectedResult(BaseResidualExpectedResult):
    test_type: Literal["nonzero"] = "nonzero"


class LabelsCountExpectedResult(BaseExpectedResult):
    """
    Tests the number of torsor labels.

    YAML example:
        result_type: labels
        test_type: count
        expected_value: 2
    """

    result_type: Literal["labels"] = "labels"
    test_type: Literal["count"] = "count"
    expected_value: int = Field(..., ge=0)


# ============================================================================
# Type Unions and Factory
# ============================================================================

CoefficientExpectedResultType = Annotated[
    Annotated[CoefficientMatchExpectedResult, Tag("match")]
    | Annotated[CoefficientPointCountExpectedResult, Tag("point_count")],
    Discriminator("test_type"),
]

SeriesExpectedResultType = Annotated[
    Annotated[SeriesNonNegativeExpectedResult, Tag("nonnegative")]
    | Annotated[SeriesSpecializesToExpectedResult, Tag("specializes_to")],
    Discriminator("test_type"),
]

ResidualExpectedResultType = Annotated[
    Annotated[ResidualZeroExpectedResult, Tag("zero")] | Annotated[ResidualNonZeroExpectedResult, Tag("nonzero")],
    Discriminator("test_type"),
]

ExpectedResultType = Annotated[
    Annotated[CoefficientExpectedResultType, Tag("coefficient")]
    | Annotated[SeriesExpectedResultType, Tag("series")]
    | Annotated[CountMatchExpectedResult, Tag("count")]
    | Annotated[ResidualExpectedResultType, Tag("residual")]
    | Annotated[LabelsCountExpectedResult, Tag("labels")],
    Discriminator("result_type"),
]

ExpectedResultTypeAdapter = TypeAdapter(ExpectedResultType)
