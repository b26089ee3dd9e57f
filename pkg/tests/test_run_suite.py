"""Tests for the run_suite module."""

from unittest.mock import patch

import pytest

from motivic_series.check_implementations import ComputationOutput
from motivic_series.coeff import ONE, L
from motivic_series.errors import MalformedInputError, OracleBoundsError, RootSystemError
from motivic_series.models import CheckCase, CheckSuite, EngineSettings
from motivic_series.models.expected_values import (
    CoefficientMatchExpectedResult,
    CountMatchExpectedResult,
    ReferenceComputation,
    ResidualZeroExpectedResult,
    SeriesSpecializesToExpectedResult,
)
from motivic_series.run_suite import (
    CheckCaseResult,
    CheckSuiteResult,
    RunContext,
    oracle_cell,
    run_check_case,
    run_check_suite,
    run_computation,
)
from motivic_series.series import QSeries

# Fixtures


@pytest.fixture
def oracle_case():
    """Subsheaves of degree -1 over F_2."""
    return CheckCase(
        name="subsheaves",
        computation="oracle",
        parameters={"kind": "subsheaves", "q": 2, "a1": -1},
        expected_results=[CountMatchExpectedResult(expected_value=15)],
    )


@pytest.fixture
def quot_case():
    return CheckCase(
        name="quot",
        computation="quot",
        parameters={"order": 2},
        expected_results=[
            CoefficientMatchExpectedResult(monomial=0, expected_value="1 + L"),
            CoefficientMatchExpectedResult(monomial=1, expected_value="1 + L + L^2 + L^3"),
        ],
    )


# Computations


def test_zeta_of_projective_line():
    output = run_computation("zeta", {"genus": 0, "order": 2})
    assert output.series.coefficients() == [ONE, 1 + L, 1 + L + L**2]
    assert output.residual(None) == ("default", None)


def test_psi():
    output = run_computation("psi", {"m": 0, "order": 1})
    assert output.series.coefficients() == [L, L**3 - L]


def test_quot():
    output = run_computation("quot", {"order": 1})
    assert isinstance(output.series, QSeries)
    assert output.series[1] == 1 + L + L**2 + L**3


@pytest.mark.parametrize(
    ("parameters", "count"),
    [
        ({"kind": "polar_sections", "q": 2, "m": 0, "n": 1}, 6),
        ({"kind": "symmetric_product", "q": 3, "n": 2}, 13),
        ({"kind": "subbundles", "q": 3, "a1": -1}, 24),
    ],
)
def test_oracle_counts(parameters, count):
    assert run_computation("oracle", parameters).count == count


def test_torsors():
    output = run_computation("torsors", {"type": "A", "rank": 1, "d": 2})
    assert output.labels == ["-1;0;-2", "0;0;-2"]


def test_rank2_funceq_uses_recorded_variant():
    output = run_computation("rank2-funceq", {"order": 3})
    key, first_term = output.residual(None)
    assert key == "-1/+1"
    assert first_term is None
    assert output.residuals["+1/+1"] is not None


def test_funceq_identity():
    output = run_computation("funceq", {"type": "A", "rank": 1, "b": "0;0;-1", "grade": 3, "w": "e"})
    assert all(first_term is None for first_term in output.residuals.values())
    assert len(output.residuals) == 8


def test_rank_cap_comes_from_settings():
    ctx = RunContext(settings=EngineSettings(rank_cap=1))
    with pytest.raises(RootSystemError, match="exceeds the configured cap"):
        run_computation("torsors", {"type": "A", "rank": 2, "d": 1}, ctx)


def test_unknown_computation():
    with pytest.raises(MalformedInputError, match="unknown computation"):
        run_computation("moduli", {})


def test_bad_parameter_value():
    with pytest.raises(MalformedInputError, match="invalid parameters for 'psi'"):
        run_computation("psi", {"m": "zero"})


def test_oracle_cell_errors():
    with pytest.raises(MalformedInputError, match="missing parameter 'a1'"):
        oracle_cell({"kind": "subsheaves", "q": 2})
    with pytest.raises(MalformedInputError, match="unknown oracle kind"):
        oracle_cell({"kind": "flags", "q": 2})


# Check cases


def test_run_check_case_successful(oracle_case):
    result = run_check_case(oracle_case)

    assert isinstance(result, CheckCaseResult)
    assert result.all_passed
    assert result.error is None
    assert result.individual_results[0].passed


def test_run_check_case_partial_failure(quot_case):
    quot_case.expected_results.append(CoefficientMatchExpectedResult(monomial=1, expected_value="L"))
    result = run_check_case(quot_case)
    assert not result.all_passed
    assert [r.passed for r in result.individual_results] == [True, True, False]


@patch("motivic_series.run_suite.run_computation")
def test_run_check_case_engine_error(mock_run_computation, quot_case):
    """An engine error fails every expected result of the case."""
    mock_run_computation.side_effect = OracleBoundsError("q = 7 is not one of the enabled primes")

    result = run_check_case(quot_case)

    assert not result.all_passed
    assert result.error == "q = 7 is not one of the enabled primes"
    assert len(result.individual_results) == 2
    assert all("Computation failed" in r.log for r in result.individual_results)


@patch("motivic_series.run_suite.run_computation")
def test_run_check_case_runs_references(mock_run_computation):
    mock_run_computation.return_value = ComputationOutput("quot", QSeries(1, [1 + L, 1 + L + L**2 + L**3]))
    case = CheckCase(
        name="quot at one",
        computation="quot",
        parameters={"order": 1},
        expected_results=[
            SeriesSpecializesToExpectedResult(spec="generic", reference=ReferenceComputation(computation="quot"))
        ],
    )

    result = run_check_case(case)

    assert result.all_passed
    assert mock_run_computation.call_count == 2


def test_out_of_bounds_oracle_fails_case():
    case = CheckCase(
        name="large prime",
        computation="oracle",
        parameters={"kind": "subsheaves", "q": 7, "a1": 0},
        expected_results=[CountMatchExpectedResult(expected_value=8)],
    )
    result = run_check_case(case)
    assert not result.all_passed
    assert "enabled primes" in result.error


# Suites


def test_run_check_suite(oracle_case, quot_case):
    suite = CheckSuite(suite_name="Small", check_cases=[oracle_case, quot_case])

    result = run_check_suite(suite)

    assert isinstance(result, CheckSuiteResult)
    assert result.suite_name == "Small"
    assert result.all_passed
    assert [c.check_case_name for c in result.case_results] == ["subsheaves", "quot"]


def test_run_check_suite_one_failure(oracle_case):
    failing = CheckCase(
        name="rank two residual",
        computation="rank2-funceq",
        parameters={"order": 2},
        expected_results=[ResidualZeroExpectedResult(variant="+1/+1")],
    )
    result = run_check_suite(CheckSuite(suite_name="Mixed", check_cases=[oracle_case, failing]))
    assert not result.all_passed
    assert [c.all_passed for c in result.case_results] == [True, False]
