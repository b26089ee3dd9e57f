"""Tests for the expected_values module."""

import pytest
from pydantic import ValidationError

from motivic_series.models.expected_values import (
    CoefficientMatchExpectedResult,
    CoefficientPointCountExpectedResult,
    CountMatchExpectedResult,
    ExpectedResultTypeAdapter,
    LabelsCountExpectedResult,
    ReferenceComputation,
    ResidualNonZeroExpectedResult,
    ResidualZeroExpectedResult,
    SeriesNonNegativeExpectedResult,
    SeriesSpecializesToExpectedResult,
)


def parse_data(data: dict):
    """Helper function to parse expected result from YAML dictionary."""
    return ExpectedResultTypeAdapter.validate_python(data)


# Coefficient results


def test_parse_coefficient_match():
    data = {"result_type": "coefficient", "test_type": "match", "monomial": "1;0;-1", "expected_value": "L^3 - L"}
    result = parse_data(data)

    assert isinstance(result, CoefficientMatchExpectedResult)
    assert result.monomial == "1;0;-1"
    assert result.expected_value == "L^3 - L"


def test_parse_coefficient_match_integer_value():
    result = parse_data({"result_type": "coefficient", "test_type": "match", "monomial": 4, "expected_value": 2})
    assert result.monomial == 4
    assert result.expected_value == 2


def test_coefficient_match_rejects_bad_literal():
    """Only Laurent polynomials in L and s with integer coefficients are accepted."""
    with pytest.raises(ValidationError, match="non-integer coefficient"):
        parse_data({"result_type": "coefficient", "test_type": "match", "monomial": 0, "expected_value": "L/2"})


def test_parse_point_count():
    data = {"result_type": "coefficient", "test_type": "point_count", "monomial": 1, "q": 3, "expected_value": 24}
    result = parse_data(data)

    assert isinstance(result, CoefficientPointCountExpectedResult)
    assert result.q == 3


def test_point_count_requires_prime():
    with pytest.raises(ValidationError, match="q must be prime"):
        parse_data(
            {"result_type": "coefficient", "test_type": "point_count", "monomial": 1, "q": 4, "expected_value": 1}
        )


# Series results


def test_parse_nonnegative_defaults():
    result = parse_data({"result_type": "series", "test_type": "nonnegative"})
    assert isinstance(result, SeriesNonNegativeExpectedResult)
    assert result.primes == [2, 3, 5]


@pytest.mark.parametrize("primes", [[], [2, 9]])
def test_nonnegative_rejects_bad_primes(primes):
    with pytest.raises(ValidationError):
        parse_data({"result_type": "series", "test_type": "nonnegative", "primes": primes})


def test_parse_specializes_to():
    data = {
        "result_type": "series",
        "test_type": "specializes_to",
        "spec": "tate:1",
        "reference": {"computation": "theta", "parameters": {"d": 1}},
    }
    result = parse_data(data)

    assert isinstance(result, SeriesSpecializesToExpectedResult)
    assert isinstance(result.reference, ReferenceComputation)
    assert result.reference.spec == "generic"


@pytest.mark.parametrize(
    "reference",
    [
        {"computation": "unknown"},
        {"computation": "theta", "spec": "point_count:4"},
        {"computation": "theta", "extra": 1},
    ],
)
def test_specializes_to_rejects_bad_reference(reference):
    data = {"result_type": "series", "test_type": "specializes_to", "spec": "generic", "reference": reference}
    with pytest.raises(ValidationError):
        parse_data(data)


def test_specializes_to_rejects_bad_spec():
    data = {
        "result_type": "series",
        "test_type": "specializes_to",
        "spec": "tate",
        "reference": {"computation": "theta"},
    }
    with pytest.raises(ValidationError):
        parse_data(data)


# Count, residual and label results


def test_parse_count():
    result = parse_data({"result_type": "count", "test_type": "match", "expected_value": 15})
    assert isinstance(result, CountMatchExpectedResult)
    assert result.expected_value == 15


def test_count_must_be_nonnegative():
    with pytest.raises(ValidationError):
        parse_data({"result_type": "count", "expected_value": -1})


@pytest.mark.parametrize(
    ("test_type", "model"), [("zero", ResidualZeroExpectedResult), ("nonzero", ResidualNonZeroExpectedResult)]
)
def test_parse_residuals(test_type, model):
    result = parse_data({"result_type": "residual", "test_type": test_type, "variant": "-1/+1"})
    assert isinstance(result, model)
    assert result.variant == "-1/+1"


def test_residual_variant_is_optional():
    assert parse_data({"result_type": "residual", "test_type": "zero"}).variant is None


def test_parse_labels():
    result = parse_data({"result_type": "labels", "test_type": "count", "expected_value": 2})
    assert isinstance(result, LabelsCountExpectedResult)


# Discrimination errors


def test_unknown_result_type():
    with pytest.raises(ValidationError):
        parse_data({"result_type": "status", "expected": "successful"})


def test_unknown_test_type():
    with pytest.raises(ValidationError):
        parse_data({"result_type": "coefficient", "test_type": "within", "monomial": 0, "expected_value": 1})
