"""Rich panels for errors met while loading check suites or settings, and for engine errors."""

from pathlib import Path

import yaml
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel

from .errors import ConventionError, MotivicError

console = Console(stderr=True)

RESULT_TYPES = ("coefficient", "series", "count", "residual", "labels")
TEST_TYPES = ("match", "point_count", "nonnegative", "specializes_to", "zero", "nonzero", "count")


def _panel(title: str, heading: str, body: str) -> None:
    console.print(Panel(f"[red bold]{heading}[/red bold]\n\n{body}", title=f"❌ {title}", border_style="red"))


def format_yaml_error(error: Exception, yaml_file: Path, yaml_data: dict | None = None) -> None:
    """
    Show an error raised while reading ``yaml_file``.

    Args:
        error: The exception that was raised
        yaml_file: The suite or settings file being read
        yaml_data: Parsed YAML data, used to name check cases in validation errors
    """
    console.print()
    if isinstance(error, ValidationError):
        _format_validation_error(error, yaml_file, yaml_data)
    elif isinstance(error, MotivicError):
        format_engine_error(error, context=str(yaml_file))
    elif isinstance(error, yaml.YAMLError):
        _panel("Invalid YAML Syntax", "YAML Parsing Error", f"File: [cyan]{yaml_file}[/cyan]\n\n{error}")
    elif isinstance(error, OSError):
        _panel("Cannot Read File", type(error).__name__, f"File: [cyan]{yaml_file}[/cyan]\n\n{error}")
    else:
        _panel("Malformed File", f"Error Loading {yaml_file.name}", f"File: [cyan]{yaml_file}[/cyan]\n\n{error}")
    console.print()


def format_engine_error(error: MotivicError, context: str | None = None) -> None:
    """Show an engine error; convention errors get a hint on how to refresh the record."""
    hint = "\n\nRun [bold]motivic selftest[/bold] to regenerate it." if isinstance(error, ConventionError) else ""
    where = f"While processing: [cyan]{context}[/cyan]\n\n" if context else ""
    _panel("Computation Error", type(error).__name__, f"{where}{error}{hint}")


def _format_validation_error(error: ValidationError, yaml_file: Path, yaml_data: dict | None) -> None:
    error_count = error.error_count()
    error_s = "error" if error_count == 1 else "errors"
    _panel(
        f"{error_count} Validation {error_s.title()} Found",
        "YAML Validation Error",
        f"[cyan]{yaml_file.name}[/cyan] has {error_count} validation {error_s}.",
    )

    for i, err in enumerate(error.errors(), 1):
        console.print(f"\n[bold]Error {i}:[/bold]")
        console.print(f"  [cyan]Location:[/cyan] {_build_readable_location(err['loc'], yaml_data)}")
        console.print(f"  [yellow]Message:[/yellow] {err['msg']}")
        if err.get("input") is not None and len(str(err["input"])) < 100:
            console.print(f"  [magenta]Input:[/magenta] {err['input']}")

    console.print("\n[dim]See docs/yaml-format.md for the check suite format.[/dim]")


def _build_readable_location(location_tuple: tuple, yaml_data: dict | None) -> str:
    """
    Build a human-readable location string from Pydantic's error location tuple.

    Expected results are validated one check case at a time, so their locations start
    with the index inside ``expected_results``, e.g. ``(1, 'coefficient', 'match',
    'expected_value')``; the owning case is recovered from the YAML data.  Locations
    of whole cases start with ``check_cases``.
    """
    parts = [str(loc) for loc in location_tuple]
    cases = yaml_data.get("check_cases", []) if isinstance(yaml_data, dict) else []
    readable: list[str] = []
    idx = 0

    if len(parts) > 1 and parts[0] == "check_cases" and parts[1].isdigit():
        readable.append(_format_check_case_by_index(cases, int(parts[1])))
        idx = 2
    elif len(parts) > 1 and parts[0].isdigit() and parts[1] in RESULT_TYPES:
        result_index = int(parts[0])
        case_index = _find_case_for_result(cases, result_index, parts[1])
        if case_index is not None:
            readable.append(_format_check_case_by_index(cases, case_index))
        text = f"expected value {result_index}: {parts[1]}"
        idx = 2
        if idx < len(parts) and parts[idx] in TEST_TYPES:
            text += f"({parts[idx]})"
            idx += 1
        readable.append(text)

    readable.extend(parts[idx:])
    return " → ".join(readable) if readable else "(top level)"


def _format_check_case_by_index(cases: list, index: int) -> str:
    if index >= len(cases):
        return f"Check case {index}"
    case = cases[index]
    name = case.get("name", f"case_{index}") if isinstance(case, dict) else f"case_{index}"
    return f"Check case {index}: {name}"


def _find_case_for_result(cases: list, result_index: int, result_type: str) -> int | None:
    """First check case whose expected result at ``result_index`` has the given result_type."""
    for case_index, case in enumerate(cases):
        if not isinstance(case, dict):
            continue
        results = case.get("expected_results") or []
        if result_index < len(results) and isinstance(results[result_index], dict):
            if results[result_index].get("result_type") == result_type:
                return case_index
    return None
