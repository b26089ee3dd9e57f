"""Integration tests with the YAML files shipped in the repository."""

from pathlib import Path

import pytest
import yaml

from motivic_series.models import CheckSuite
from motivic_series.models.expected_values import ExpectedResultTypeAdapter

REPO_ROOT = Path(__file__).parent.parent
BUNDLED_SUITES = sorted((REPO_ROOT / "motivic_checks").glob("*.yaml"))


def test_parse_all_results_from_yaml():
    """Every expected result in test_all_check_types.yaml parses to its own model."""
    yaml_path = Path(__file__).parent / "test_all_check_types.yaml"

    with open(yaml_path) as f:
        data = yaml.safe_load(f)

    expected_results = data["check_cases"][0]["expected_results"]
    parsed_results = [ExpectedResultTypeAdapter.validate_python(r) for r in expected_results]

    assert len(parsed_results) == 10
    result_types = {type(r).__name__ for r in parsed_results}
    assert result_types == {
        "CoefficientMatchExpectedResult",
        "CoefficientPointCountExpectedResult",
        "SeriesNonNegativeExpectedResult",
        "SeriesSpecializesToExpectedResult",
        "CountMatchExpectedResult",
        "ResidualZeroExpectedResult",
        "ResidualNonZeroExpectedResult",
        "LabelsCountExpectedResult",
    }


def test_whole_file_loads_as_suite():
    suite = CheckSuite.from_yaml_file(Path(__file__).parent / "test_all_check_types.yaml")
    assert suite.suite_name == "all_check_types"
    assert len(suite.check_cases[0].expected_results) == 10


def test_bundled_suites_exist():
    assert BUNDLED_SUITES


@pytest.mark.parametrize("path", BUNDLED_SUITES, ids=lambda p: p.stem)
def test_bundled_suite_validates(path):
    """The suites run by check-specializations and selftest are well formed."""
    suite = CheckSuite.from_yaml_file(path)
    assert suite.check_cases
    assert len({case.name for case in suite.check_cases}) == len(suite.check_cases)
