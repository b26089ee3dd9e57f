from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from .affine import AffCoweight
from .coeff import ZERO, MotCoeff, SpecMode
from .models.expected_values import (
    CoefficientMatchExpectedResult,
    CoefficientPointCountExpectedResult,
    CountMatchExpectedResult,
    ExpectedResultType,
    LabelsCountExpectedResult,
    ResidualNonZeroExpectedResult,
    ResidualZeroExpectedResult,
    SeriesNonNegativeExpectedResult,
    SeriesSpecializesToExpectedResult,
)
from .series import LatticeSeries, QSeries


class ValueMissingError(Exception):
    pass


@dataclass
class ComputationOutput:
    """
    What a computation produced, in the shape the checks read.

    ``residuals`` maps a convention key to ``None`` when the residual vanishes and to
    a short description of its first nonzero term otherwise.
    """

    computation: str
    series: LatticeSeries | QSeries | None = None
    count: int | None = None
    residuals: dict[str, str | None] | None = None
    active_variant: str | None = None
    labels: list[str] | None = None

    def require_series(self) -> LatticeSeries | QSeries:
        if self.series is None:
            raise ValueMissingError(f"computation '{self.computation}' produces no series")
        return self.series

    def coefficient(self, monomial: str | int) -> MotCoeff:
        series = self.require_series()
        if isinstance(series, QSeries):
            if not isinstance(monomial, int):
                raise ValueMissingError(f"'{monomial}' is not a power index for a one-variable series")
            if not 0 <= monomial <= series.order:
                raise ValueMissingError(f"index {monomial} lies outside the computed range 0..{series.order}")
            return series[monomial]
        if isinstance(monomial, int):
            raise ValueMissingError(f"lattice series monomials are coweight triples, got {monomial}")
        x = AffCoweight.parse(monomial, series.rs.rank)
        return series.coefficient(x)

    def items(self) -> list[tuple[str, MotCoeff]]:
        series = self.require_series()
        if isinstance(series, QSeries):
            return [(str(n), c) for n, c in enumerate(series.coefficients())]
        return [(str(x), c) for x, c in series.items()]

    def require_count(self) -> int:
        if self.count is None:
            raise ValueMissingError(f"computation '{self.computation}' produces no count")
        return self.count

    def residual(self, variant: str | None) -> tuple[str, str | None]:
        if self.residuals is None:
            raise ValueMissingError(f"computation '{self.computation}' produces no residual")
        key = variant or self.active_variant
        if key not in self.residuals:
            raise ValueMissingError(f"no residual for variant '{key}'; known: {sorted(self.residuals)}")
        return key, self.residuals[key]

    def require_labels(self) -> list[str]:
        if self.labels is None:
            raise ValueMissingError(f"computation '{self.computation}' produces no torsor labels")
        return self.labels


@dataclass
class IndividualCheckResult:
    check_name: str
    passed: bool
    log: str


ReferenceRunner = Callable[[str, dict[str, Any]], ComputationOutput]

# ============================================================================
# Helper Functions
# ============================================================================


def generate_check_name(test_type: str, target: str | int | None = None) -> str:
    """
    Generate a consistent check name.

    Examples:
        >>> generate_check_name('match', '-1;0;0')
        'match_-1;0;0'
        >>> generate_check_name('nonnegative')
        'nonnegative_check'
    """
    if target is not None:
        return f"{test_type}_{target}"
    return f"{test_type}_check"


def describe_difference(a: LatticeSeries | QSeries, b: LatticeSeries | QSeries) -> str | None:
    """First differing monomial in canonical order, or None when the series agree."""
    if isinstance(a, QSeries) and isinstance(b, QSeries):
        difference = a.first_difference(b)
        if difference is None:
            return None
        n, x, y = difference
        return f"q^{n}: {x} vs {y}"
    if isinstance(a, LatticeSeries) and isinstance(b, LatticeSeries):
        difference = a.first_difference(b)
        if difference is None:
            return None
        x, c, d = difference
        return f"{x}: {c} vs {d}"
    return f"cannot compare {type(a).__name__} with {type(b).__name__}"


# ============================================================================
# Individual Check Functions
# ============================================================================


def check_coefficient_match(
    output: ComputationOutput, expected: CoefficientMatchExpectedResult
) -> IndividualCheckResult:
    """Check that one coefficient equals a Laurent polynomial in L."""
    name = generate_check_name("match", expected.monomial)
    try:
        actual = output.coefficient(expected.monomial)
    except ValueMissingError as e:
        return IndividualCheckResult(check_name=name, passed=False, log=f"✗ {e}")
    target = MotCoeff.parse(expected.expected_value)
    if actual == target:
        log = f"✓ Coefficient at {expected.monomial} is {target}"
    else:
        log = f"✗ Coefficient at {expected.monomial}: expected {target}, got {actual}"
    return IndividualCheckResult(check_name=name, passed=actual == target, log=log)


def check_coefficient_point_count(
    output: ComputationOutput, expected: CoefficientPointCountExpectedResult
) -> IndividualCheckResult:
    """Check a coefficient after L -> q."""
    name = generate_check_name("point_count", expected.monomial)
    try:
        actual = output.coefficient(expected.monomial)
    except ValueMissingError as e:
        return IndividualCheckResult(check_name=name, passed=False, log=f"✗ {e}")
    value = actual.evaluate_tate(expected.q)
    passed = value == expected.expected_value
    if passed:
        log = f"✓ Coefficient at {expected.monomial} counts {value} points over F_{expected.q}"
    else:
        log = f"✗ F_{expected.q} count at {expected.monomial}: expected {expected.expected_value}, got {value}"
    return IndividualCheckResult(check_name=name, passed=passed, log=log)


def check_series_nonnegative(
    output: ComputationOutput, expected: SeriesNonNegativeExpectedResult
) -> IndividualCheckResult:
    """Check that every coefficient is a non-negative integer at each listed q."""
    name = generate_check_name("nonnegative")
    try:
        items = output.items()
    except ValueMissingError as e:
        return IndividualCheckResult(check_name=name, passed=False, log=f"✗ {e}")
    for q in expected.primes:
        for key, c in items:
            value = c.evaluate_tate(q)
            if value < 0 or getattr(value, "denominator", 1) != 1:
                return IndividualCheckResult(
                    check_name=name, passed=False, log=f"✗ Coefficient at {key} is {value} over F_{q}"
                )
    return IndividualCheckResult(
        check_name=name,
        passed=True,
        log=f"✓ All {len(items)} coefficients are non-negative over F_q for q in {expected.primes}",
    )


def check_series_specializes_to(
    output: ComputationOutput, expected: SeriesSpecializesToExpectedResult, run_reference: ReferenceRunner
) -> IndividualCheckResult:
    """Check that the specialized series equals a second computation's output."""
    reference = expected.reference
    name = generate_check_name("specializes_to", reference.computation)
    try:
        ours = output.require_series().specialize(SpecMode.parse(expected.spec))
        theirs = run_reference(reference.computation, reference.parameters).require_series()
    except ValueMissingError as e:
        return IndividualCheckResult(check_name=name, passed=False, log=f"✗ {e}")
    theirs = theirs.specialize(SpecMode.parse(reference.spec))
    difference = describe_difference(ours, theirs)
    if difference is None:
        log = f"✓ Series at {expected.spec} equals {reference.computation} at {reference.spec}"
    else:
        log = f"✗ Series at {expected.spec} differs from {reference.computation} at {difference}"
    return IndividualCheckResult(check_name=name, passed=difference is None, log=log)


def check_count_match(output: ComputationOutput, expected: CountMatchExpectedResult) -> IndividualCheckResult:
    name = generate_check_name("count")
    try:
        actual = output.require_count()
    except ValueMissingError as e:
        return IndividualCheckResult(check_name=name, passed=False, log=f"✗ {e}")
    if actual == expected.expected_value:
        log = f"✓ Count is {actual}"
    else:
        log = f"✗ Count: expected {expected.expected_value}, got {actual}"
    return IndividualCheckResult(check_name=name, passed=actual == expected.expected_value, log=log)


def check_residual_zero(output: ComputationOutput, expected: ResidualZeroExpectedResult) -> IndividualCheckResult:
    name = generate_check_name("zero", expected.variant)
    try:
        key, first_term = output.residual(expected.variant)
    except ValueMissingError as e:
        return IndividualCheckResult(check_name=name, passed=False, log=f"✗ {e}")
    if first_term is None:
        return IndividualCheckResult(check_name=name, passed=True, log=f"✓ Residual vanishes for {key}")
    return IndividualCheckResult(check_name=name, passed=False, log=f"✗ Residual for {key} at {first_term}")


def check_residual_nonzero(
    output: ComputationOutput, expected: ResidualNonZeroExpectedResult
) -> IndividualCheckResult:
    name = generate_check_name("nonzero", expected.variant)
    try:
        key, first_term = output.residual(expected.variant)
    except ValueMissingError as e:
        return IndividualCheckResult(check_name=name, passed=False, log=f"✗ {e}")
    if first_term is not None:
        return IndividualCheckResult(check_name=name, passed=True, log=f"✓ Residual for {key} at {first_term}")
    return IndividualCheckResult(check_name=name, passed=False, log=f"✗ Residual vanishes for {key}")


def check_labels_count(output: ComputationOutput, expected: LabelsCountExpectedResult) -> IndividualCheckResult:
    name = generate_check_name("labels")
    try:
        labels = output.require_labels()
    except ValueMissingError as e:
        return IndividualCheckResult(check_name=name, passed=False, log=f"✗ {e}")
    passed = len(labels) == expected.expected_value
    if passed:
        log = f"✓ {len(labels)} torsor labels"
    else:
        log = f"✗ Expected {expected.expected_value} torsor labels, got {len(labels)}: {', '.join(labels)}"
    return IndividualCheckResult(check_name=name, passed=passed, log=log)


CHECK_FUNCTION_MAP: dict[type, Callable[[ComputationOutput, Any], IndividualCheckResult]] = {
    CoefficientMatchExpectedResult: check_coefficient_match,
    CoefficientPointCountExpectedResult: check_coefficient_point_count,
    SeriesNonNegativeExpectedResult: check_series_nonnegative,
    CountMatchExpectedResult: check_count_match,
    ResidualZeroExpectedResult: check_residual_zero,
    ResidualNonZeroExpectedResult: check_residual_nonzero,
    LabelsCountExpectedResult: check_labels_count,
}
# SeriesSpecializesToExpectedResult needs a second computation and is dispatched
# separately in check_result.


# ============================================================================
# Main Check Result Function
# ============================================================================


def check_result(
    output: ComputationOutput, expected_result: ExpectedResultType, run_reference: ReferenceRunner | None = None
) -> IndividualCheckResult:
    """
    Check a computation's output against an expected result.

    Args:
        output: What the computation produced
        expected_result: The expected result
        run_reference: Runs a second computation for ``specializes_to`` checks

    Returns:
        IndividualCheckResult with the check outcome
    """
    if isinstance(expected_result, SeriesSpecializesToExpectedResult):
        if run_reference is None:
            return IndividualCheckResult(
                check_name=generate_check_name("specializes_to"),
                passed=False,
                log="✗ No reference runner available for specializes_to",
            )
        return check_series_specializes_to(output, expected_result, run_reference)

    check_function = CHECK_FUNCTION_MAP.get(type(expected_result))
    if check_function is None:
        return IndividualCheckResult(
            check_name=generate_check_name("unknown"),
            passed=False,
            log=f"✗ Unknown check type: {type(expected_result).__name__}",
        )
    return check_function(output, expected_result)


def residual_summary(residual: Any) -> str | None:
    """None for a vanishing residual, else its first nonzero term as text."""
    if not residual:
        return None
    if isinstance(residual, LatticeSeries):
        x, c = next((x, c) for x, c in residual.items() if c != ZERO)
        return f"{x}: {c}"
    return str(residual)
