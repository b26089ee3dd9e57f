"""
Tests for error_formatter module.

Tests the formatting of validation errors, syntax errors, file I/O errors and
engine errors raised while loading or running check suites.
"""

from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest
import yaml
from pydantic import ValidationError

from motivic_series.error_formatter import (
    _build_readable_location,
    _find_case_for_result,
    _format_check_case_by_index,
    format_engine_error,
    format_yaml_error,
)
from motivic_series.errors import ConventionError, WindowError
from motivic_series.models import CheckCase


@pytest.fixture
def yaml_data():
    return {
        "suite_name": "A1 checks",
        "check_cases": [
            {"name": "theta", "expected_results": [{"result_type": "series", "test_type": "nonnegative"}]},
            {
                "name": "eisenstein",
                "expected_results": [
                    {"result_type": "series", "test_type": "nonnegative"},
                    {"result_type": "coefficient", "test_type": "match"},
                ],
            },
        ],
    }


class TestCaseLookup:
    def test_format_check_case_by_index(self, yaml_data):
        assert _format_check_case_by_index(yaml_data["check_cases"], 1) == "Check case 1: eisenstein"

    def test_format_check_case_out_of_bounds(self):
        assert _format_check_case_by_index([], 2) == "Check case 2"

    def test_format_check_case_without_name(self):
        assert _format_check_case_by_index([{}], 0) == "Check case 0: case_0"

    def test_find_case_for_result(self, yaml_data):
        """The owning case is the first one whose result at that index has the same result_type."""
        cases = yaml_data["check_cases"]
        assert _find_case_for_result(cases, 1, "coefficient") == 1
        assert _find_case_for_result(cases, 0, "series") == 0
        assert _find_case_for_result(cases, 0, "count") is None

    def test_find_case_skips_non_dicts(self):
        assert _find_case_for_result(["oops", {"expected_results": [{"result_type": "count"}]}], 0, "count") == 1


class TestBuildReadableLocation:
    def test_expected_result_with_test_type(self, yaml_data):
        location = _build_readable_location((1, "coefficient", "match", "expected_value"), yaml_data)
        assert location == "Check case 1: eisenstein → expected value 1: coefficient(match) → expected_value"

    def test_check_case_location(self, yaml_data):
        location = _build_readable_location(("check_cases", "0", "parameters"), yaml_data)
        assert location == "Check case 0: theta → parameters"

    def test_no_yaml_data(self):
        location = _build_readable_location((0, "count", "expected_value"), None)
        assert location == "expected value 0: count → expected_value"

    def test_top_level(self):
        assert _build_readable_location((), None) == "(top level)"

    def test_plain_field(self):
        assert _build_readable_location(("suite_name",), {}) == "suite_name"

    def test_real_validation_error(self, yaml_data):
        """Locations produced by pydantic for a bad coefficient literal are readable."""
        case = {
            "name": "eisenstein",
            "computation": "eisenstein",
            "expected_results": [
                {"result_type": "series", "test_type": "nonnegative"},
                {"result_type": "coefficient", "test_type": "match", "monomial": 0, "expected_value": "L/2"},
            ],
        }
        with pytest.raises(ValidationError) as info:
            CheckCase.from_yaml_dict(case)
        location = _build_readable_location(info.value.errors()[0]["loc"], yaml_data)
        assert location.startswith("Check case 1: eisenstein → expected value 1: coefficient(match)")


class TestFormatYamlError:
    @patch("motivic_series.error_formatter.console")
    def test_format_yaml_syntax_error(self, mock_console):
        format_yaml_error(yaml.YAMLError("Invalid syntax"), Path("/path/to/suite.yaml"))

        # Should print empty line, panel, and another empty line
        assert mock_console.print.call_count == 3

    @pytest.mark.parametrize(
        "error", [FileNotFoundError("missing"), PermissionError("denied"), ValueError("Something went wrong")]
    )
    @patch("motivic_series.error_formatter.console")
    def test_format_io_and_generic_errors(self, mock_console, error):
        format_yaml_error(error, Path("/path/to/suite.yaml"))
        assert mock_console.print.call_count == 3

    @pytest.mark.parametrize("error", [KeyError("check_cases"), TypeError("not a mapping")])
    @patch("motivic_series.error_formatter.console")
    def test_malformed_suite_names_the_file(self, mock_console, error):
        format_yaml_error(error, Path("/path/to/suite.yaml"))
        panel = mock_console.print.call_args_list[1].args[0]
        assert "suite.yaml" in panel.renderable
        assert "Malformed File" in panel.title

    @patch("motivic_series.error_formatter.console")
    def test_format_validation_error(self, mock_console, yaml_data):
        error = MagicMock(spec=ValidationError)
        error.error_count.return_value = 2
        error.errors.return_value = [
            {"loc": (0, "series", "nonnegative", "primes"), "msg": "Error 1", "type": "value_error", "input": [4]},
            {"loc": (1, "coefficient", "match", "monomial"), "msg": "Error 2", "type": "missing", "input": None},
        ]

        format_yaml_error(error, Path("suite.yaml"), yaml_data)

        # blank line, panel, 4 + 3 lines for the two errors, format hint, blank line
        assert mock_console.print.call_count == 11

    @patch("motivic_series.error_formatter.console")
    def test_large_input_is_not_shown(self, mock_console):
        error = MagicMock(spec=ValidationError)
        error.error_count.return_value = 1
        error.errors.return_value = [{"loc": ("suite_name",), "msg": "bad", "type": "string_type", "input": "x" * 200}]

        format_yaml_error(error, Path("suite.yaml"))

        printed = [str(call.args[0]) for call in mock_console.print.call_args_list if call.args]
        assert not any("Input:" in text for text in printed)

    @patch("motivic_series.error_formatter.console")
    def test_engine_error_is_forwarded(self, mock_console):
        format_yaml_error(WindowError("empty window"), Path("suite.yaml"))
        panel = mock_console.print.call_args_list[1].args[0]
        assert "suite.yaml" in panel.renderable
        assert "WindowError" in panel.renderable


class TestFormatEngineError:
    @patch("motivic_series.error_formatter.console")
    def test_convention_error_has_hint(self, mock_console):
        format_engine_error(ConventionError("different convention table"))
        panel = mock_console.print.call_args.args[0]
        assert "motivic selftest" in panel.renderable

    @patch("motivic_series.error_formatter.console")
    def test_other_errors_have_no_hint(self, mock_console):
        format_engine_error(WindowError("empty window"), context="eisenstein")
        panel = mock_console.print.call_args.args[0]
        assert "selftest" not in panel.renderable
        assert "eisenstein" in panel.renderable
