"""
Command-line interface for the motivic series engine.

Usage:
    motivic <command> [options]
    python -m motivic_series <command> [options]
"""

import argparse
import logging
import sys
from collections.abc import Callable
from dataclasses import asdict
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from .affine import AffCoweight, TorsorLabel, grade, parse_weyl_element, torsor_labels
from .check_implementations import residual_summary
from .coeff import (
    L,
    CurveData,
    MotCoeff,
    SpecMode,
    specialize,
    symmetric_product_measure,
    zeta_from_curve,
    zeta_funceq_residual,
)
from .conventions import CharacterCombination, ConventionRecord, FunceqVariant, Rank2Variant
from .eisenstein import (
    EisParams,
    blowup_F,
    eisenstein_E,
    funceq_residual,
    hall_P,
    numerator_N,
    psi_line,
    resolve_character_combination,
    resolve_funceq_convention,
    resolve_hall_action,
    theta_full,
    theta_zero,
)
from .error_formatter import format_engine_error, format_yaml_error
from .errors import MotivicError
from .models import CheckSuite, EngineSettings, JobConfig
from .oracle import OracleCell, count_cells
from .rank2 import funceq_residual_rank2, quot_series, resolve_rank2_convention, subbundle_series_from_quot
from .render import q_series_table, render, rows_table
from .run_suite import CheckSuiteResult, RunContext, oracle_cell, run_check_suite
from .series import QSeries, q_layer
from .workers import cached_root_system

logger = logging.getLogger(__name__)

DEFAULT_CHECKS = Path("motivic_checks")

CommandResult = tuple[int, str]


def configure_logging(verbosity: int) -> None:
    """WARNING by default, INFO with -v, DEBUG with -vv; always on stderr."""
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
    logging.basicConfig(level=level, format="%(message)s", datefmt="[%X]", handlers=[handler], force=True)


# ============================================================================
# Argument Parsing
# ============================================================================


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="table", help="Output format (default: table)")
    common.add_argument("--spec", default="generic", help="generic, euler, serre, point_count:Q or tate:N")
    common.add_argument("--conventions", type=Path, default=None, help="Convention record path")
    common.add_argument("--workers", type=int, default=None, help="Worker processes (default: $MOTIVIC_WORKERS or 1)")
    common.add_argument("--config", type=Path, default=None, help="YAML file with engine settings")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    return common


def _root_system_parser() -> argparse.ArgumentParser:
    rs = argparse.ArgumentParser(add_help=False)
    rs.add_argument("--type", default="A", help="Cartan type letter (default: A)")
    rs.add_argument("--rank", type=int, default=1, help="Rank (default: 1)")
    return rs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motivic",
        description="Exact generating functions over the motivic coefficient ring, with their checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  motivic blowup --type A --rank 1 --b "0;0;-1" --order 3
  motivic classify-torsors --type A --rank 1 --d 2
  motivic check-funceq --type A --rank 1 --b "0;0;-1" --grade 8 --w s0
  motivic oracle subbundles --q 3 --a1 -1 --compare
  motivic selftest
        """,
    )
    common, rs = _common_parser(), _root_system_parser()
    sub = parser.add_subparsers(dest="command", required=True)

    zeta = sub.add_parser("zeta", parents=[common], help="Motivic zeta function of a curve")
    zeta.add_argument("--genus", type=int, default=0)
    zeta.add_argument("--phi", nargs="+", default=None, help="Numerator coefficients, e.g. 1 -2*s L")
    zeta.add_argument("--order", type=int, default=6)

    theta = sub.add_parser("theta", parents=[common, rs], help="Lattice theta function")
    theta.add_argument("--d", type=int, required=True, help="Level (positive)")
    theta.add_argument("--f", default=None, help="Characteristic vector, comma separated")
    theta.add_argument("--order", type=int, default=10, help="q-order cutoff")
    theta.add_argument("--grade", type=int, default=None, help="Keep the z-dependence, truncated by grade")

    for name, help_text in (("eisenstein", "Kac-Moody Eisenstein series"), ("hall", "Affine Hall polynomial")):
        p = sub.add_parser(name, parents=[common, rs], help=help_text)
        p.add_argument("--b", required=True, help='Torsor label "f1,...,fr;m;-d"')
        p.add_argument("--grade", type=int, required=True, help="Grade cutoff")
        p.add_argument("--layer", type=int, default=None, help="Only the q^LAYER component")
        if name == "hall":
            p.add_argument("--form", choices=["closed", "definition"], default="closed")
            p.add_argument("--action", choices=["twisted", "twisted_inverse", "plain"], default=None)
            p.add_argument("--l", default=None, help="Value of the Hall parameter (default: L)")

    blowup = sub.add_parser("blowup", parents=[common, rs], help="Universal blowup function")
    blowup.add_argument("--b", required=True, help='Torsor label "f1,...,fr;m;-d"')
    blowup.add_argument("--order", type=int, default=10, help="q-order cutoff")

    torsors = sub.add_parser("classify-torsors", parents=[common, rs], help="Torsor labels of a given level")
    torsors.add_argument("--d", type=int, required=True)

    funceq = sub.add_parser("check-funceq", parents=[common, rs], help="Check the numerator functional equation")
    funceq.add_argument("--b", default="0;0;-1", help='Torsor label "f1,...,fr;m;-d"')
    funceq.add_argument("--grade", type=int, default=8)
    funceq.add_argument("--w", nargs="+", default=["s0"], help="Weyl group elements, e.g. s0 s1 t:1")
    funceq.add_argument("--genus", type=int, default=0)
    funceq.add_argument("--rank2", action="store_true", help="Also check the rank-two equation")

    checks = sub.add_parser("check-specializations", parents=[common], help="Run YAML check suites")
    checks.add_argument(
        "--suite", type=Path, default=DEFAULT_CHECKS, help="Suite file or directory (default: motivic_checks)"
    )

    oracle = sub.add_parser("oracle", parents=[common], help="Brute-force counts over a prime field")
    oracle.add_argument("kind", choices=["subsheaves", "subbundles", "polar_sections", "symmetric_product"])
    oracle.add_argument("--q", type=int, required=True)
    oracle.add_argument("--a1", type=int, default=None)
    oracle.add_argument("--m", type=int, default=None)
    oracle.add_argument("--n", type=int, default=None)
    oracle.add_argument("--compare", action="store_true", help="Compare with the generating series at L = q")

    selftest = sub.add_parser("selftest", parents=[common], help="Resolve conventions and run the bundled suites")
    selftest.add_argument("--suite", type=Path, default=DEFAULT_CHECKS)
    return parser


# ============================================================================
# Settings and Job Configuration
# ============================================================================


def load_settings(args: argparse.Namespace) -> EngineSettings:
    """YAML file, then environment, then CLI flags."""
    settings = EngineSettings.from_yaml_file(args.config) if args.config else EngineSettings()
    settings = settings.with_environment()
    overrides: dict[str, Any] = {}
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.conventions is not None:
        overrides["conventions"] = args.conventions
    if overrides:
        settings = EngineSettings.model_validate({**settings.model_dump(), **overrides})
    return settings


def job_config(args: argparse.Namespace, settings: EngineSettings) -> JobConfig:
    skip = {"command", "format", "spec", "conventions", "workers", "config", "verbose", "type", "rank", "b", "grade"}
    parameters = {
        k: str(v) if isinstance(v, Path) else v
        for k, v in sorted(vars(args).items())
        if k not in skip and v is not None
    }
    order = parameters.pop("order", None)
    return JobConfig(
        command=args.command,
        root_system=f"{args.type}{args.rank}" if hasattr(args, "type") else None,
        b=getattr(args, "b", None),
        grade=getattr(args, "grade", None),
        order=order,
        spec=args.spec,
        output_format=args.format,
        conventions=settings.conventions,
        workers=settings.workers,
        parameters=parameters,
    )


# ============================================================================
# Commands
# ============================================================================


def _root_system(args: argparse.Namespace, settings: EngineSettings):
    return cached_root_system(f"{args.type}{args.rank}", settings.rank_cap)


def _curve(genus: int, phi: list[str] | None = None) -> CurveData:
    if phi:
        return CurveData.from_strings(genus, phi)
    return CurveData.projective_line() if genus == 0 else CurveData.serre(genus)


def _spec(config: JobConfig) -> SpecMode:
    return SpecMode.parse(config.spec)


def cmd_zeta(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    z = zeta_from_curve(_curve(args.genus, args.phi))
    series = QSeries(args.order, z.series(args.order)).specialize(_spec(config))
    residual = residual_summary(zeta_funceq_residual(z, args.genus)) or "0"
    result = {"series": series, "funceq_residual": residual}
    tables = [q_series_table(series, "u"), rows_table("functional equation", ("residual",), [(residual,)])]
    return (0 if residual == "0" else 1), render(config, result, tables)


def cmd_theta(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    rs = _root_system(args, settings)
    f = [int(x) for x in args.f.split(",")] if args.f else None
    if args.grade is not None:
        series = theta_full(rs, args.d, args.grade, f)
    else:
        series = theta_zero(rs, args.d, f, args.order)
    return 0, render(config, series.specialize(_spec(config)))


def _eis_params(args: argparse.Namespace, settings: EngineSettings, genus: int = 0) -> EisParams:
    rs = _root_system(args, settings)
    return EisParams(rs, TorsorLabel.parse(rs, args.b), args.grade, _curve(genus), workers=settings.workers)


def cmd_eisenstein(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    series = eisenstein_E(_eis_params(args, settings))
    if args.layer is not None:
        series = q_layer(series, args.layer)
    return 0, render(config, series.specialize(_spec(config)))


def cmd_hall(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    record = ConventionRecord.load(settings.conventions)
    action = args.action or record.hall_action
    l = MotCoeff.parse(args.l) if args.l is not None else L
    series = hall_P(_eis_params(args, settings), args.form, action, l)
    if args.layer is not None:
        series = q_layer(series, args.layer)
    return 0, render(config, series.specialize(_spec(config)))


def cmd_blowup(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    rs = _root_system(args, settings)
    series = blowup_F(rs, TorsorLabel.parse(rs, args.b), args.order)
    return 0, render(config, series.specialize(_spec(config)))


def cmd_classify_torsors(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    rs = _root_system(args, settings)
    labels = torsor_labels(rs, args.d)
    table = rows_table(f"{rs.label}, d = {args.d}", ("label", "grade"), [(str(b), grade(rs, b.b)) for b in labels])
    return 0, render(config, {"labels": [str(b) for b in labels]}, table)


def cmd_check_funceq(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    record = ConventionRecord.load(settings.conventions)
    p = _eis_params(args, settings, args.genus)
    n = numerator_N(p)
    rows, reports = [], []
    for text in args.w:
        report = funceq_residual(p, n, parse_weyl_element(p.rs, text), record.funceq)
        summary = residual_summary(report.residual) or "0"
        rows.append((text, record.funceq.key, report.overlap_size, summary, " ".join(report.vanishing_variants)))
        reports.append(
            {
                "w": text,
                "variant": record.funceq.key,
                "overlap": report.overlap_size,
                "residual": report.residual,
                "vanishing_variants": report.vanishing_variants,
            }
        )
    passed = all(row[3] == "0" for row in rows)
    if args.rank2:
        residual = funceq_residual_rank2(quot_series(args.grade), args.genus, record.rank2)
        summary = residual_summary(residual) or "0"
        rows.append(("rank 2", record.rank2.key, "-", summary, ""))
        reports.append({"w": "rank 2", "variant": record.rank2.key, "residual": summary})
        passed = passed and summary == "0"
    table = rows_table("functional equation", ("w", "variant", "compared", "residual", "vanishing variants"), rows)
    return (0 if passed else 1), render(config, {"passed": passed, "reports": reports}, table)


def _suite_files(path: Path) -> list[Path]:
    if path.is_file():
        return [path]
    if path.is_dir():
        return sorted(list(path.glob("*.yaml")) + list(path.glob("*.yml")))
    return []


def load_suites(path: Path) -> tuple[list[CheckSuite], bool]:
    """Parse every suite under ``path``; broken files are reported and flagged, not raised."""
    suites, ok = [], True
    files = _suite_files(path)
    if not files:
        logger.error("no YAML check suites found at %s", path)
        return [], False
    for yaml_file in files:
        yaml_data = None
        try:
            with open(yaml_file) as f:
                yaml_data = yaml.safe_load(f)
            suites.append(CheckSuite.from_yaml_dict(yaml_data))
        except (yaml.YAMLError, ValidationError, OSError, KeyError, TypeError, MotivicError) as e:
            format_yaml_error(e, yaml_file, yaml_data)
            ok = False
    return suites, ok


def summarize_suites(results: list[CheckSuiteResult]) -> str:
    """Plain-text report in the style of a test runner, one line per expected result."""
    lines = []
    for result in results:
        passed_cases = sum(1 for case in result.case_results if case.all_passed)
        lines.append("=" * 80)
        lines.append(f"Check Suite: {result.suite_name}")
        lines.append(f"Status: {'✓ PASSED' if result.all_passed else '✗ FAILED'}")
        lines.append(f"Check Cases: {passed_cases}/{len(result.case_results)} passed")
        lines.append("=" * 80)
        for case in result.case_results:
            lines.append(f"{'✓' if case.all_passed else '✗'} Check Case: {case.check_case_name}")
            for individual in case.individual_results:
                lines.append(f"    {individual.log}")
        lines.append("")
    return "\n".join(lines) + "\n"


def _run_suites(path: Path, ctx: RunContext) -> tuple[bool, list[CheckSuiteResult]]:
    suites, ok = load_suites(path)
    results = [run_check_suite(suite, ctx) for suite in suites]
    return ok and all(r.all_passed for r in results), results


def cmd_check_specializations(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    ctx = RunContext(settings, ConventionRecord.load(settings.conventions))
    passed, results = _run_suites(args.suite, ctx)
    if config.output_format == "json":
        return (0 if passed else 1), render(config, {"passed": passed, "suites": [asdict(r) for r in results]})
    return (0 if passed else 1), summarize_suites(results)


def _oracle_expectation(cell: OracleCell) -> int:
    """The generating-series prediction for a cell at L = q."""
    q, args = cell.q, cell.args
    p1 = zeta_from_curve(CurveData.projective_line())
    if cell.kind == "subsheaves":
        c = quot_series(-args[0]).coefficient(args[0])
    elif cell.kind == "subbundles":
        order = -args[0]
        c = subbundle_series_from_quot(quot_series(order), p1, order).coefficient(args[0])
    elif cell.kind == "polar_sections":
        c = psi_line(args[0]).coefficient(args[1])
    else:
        c = symmetric_product_measure(p1, args[0])
    return int(specialize(c, SpecMode(kind="point_count", value=q)))


def cmd_oracle(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    parameters = {k: getattr(args, k) for k in ("a1", "m", "n") if getattr(args, k) is not None}
    cell = oracle_cell({"kind": args.kind, "q": args.q, **parameters})
    [(_, count)] = count_cells([cell], settings.oracle_bounds(), settings.workers)
    result: dict[str, Any] = {"count": count, "parameters": cell.parameters()}
    status = 0
    if args.compare:
        expected = _oracle_expectation(cell)
        result.update(expected=expected, agrees=expected == count)
        status = 0 if expected == count else 1
    rows = [(k, v) for k, v in result.items() if k != "parameters"] + list(cell.parameters().items())
    return status, render(config, result, rows_table(args.kind, ("key", "value"), rows))


def cmd_selftest(args: argparse.Namespace, settings: EngineSettings, config: JobConfig) -> CommandResult:
    """Resolve every convention on small A1 examples, write the record, then run the suites with it."""
    rs = cached_root_system("A1", settings.rank_cap)
    label = TorsorLabel.from_coweight(rs, AffCoweight((0,), 0, -1))
    p = EisParams(rs, label, 8, workers=settings.workers)
    elements = [parse_weyl_element(rs, w) for w in ("s0", "s1")]
    funceq, funceq_keys = resolve_funceq_convention(p, numerator_N(p), elements)
    small = EisParams(rs, label, 4, workers=settings.workers)
    hall_action, hall_keys, at_one = resolve_hall_action(small)
    character, character_keys = resolve_character_combination(small)
    rank2, rank2_keys = resolve_rank2_convention(quot_series(8))
    record = ConventionRecord(
        funceq=funceq or FunceqVariant(),
        rank2=rank2 or Rank2Variant(),
        character=character or CharacterCombination(),
        hall_action=hall_action,
        hall_forms_agree=bool(hall_keys),
        vanishing={
            "funceq": funceq_keys,
            "rank2": rank2_keys,
            "character": character_keys,
            "hall": hall_keys,
            "hall_tate_1": at_one,
        },
    )
    record.save(settings.conventions)
    resolved = {"funceq": funceq, "rank2": rank2, "character": character}
    unresolved = [name for name, value in resolved.items() if value is None]
    if not hall_keys or not at_one:
        unresolved.append("hall")
    for name in unresolved:
        logger.warning("no convention variant satisfies the %s identity", name)

    suites_passed, results = _run_suites(args.suite, RunContext(settings, record))
    rows = [
        ("funceq", record.funceq.key, " ".join(funceq_keys)),
        ("rank2", record.rank2.key, " ".join(rank2_keys)),
        ("character", record.character.key, " ".join(character_keys)),
        ("hall", record.hall_action, " ".join(hall_keys)),
        ("suites", "passed" if suites_passed else "failed", str(len(results))),
    ]
    passed = suites_passed and not unresolved
    result = {"passed": passed, "record": record.model_dump(mode="json"), "unresolved": unresolved}
    if config.output_format == "json":
        return (0 if passed else 1), render(config, result)
    table = rows_table("conventions", ("identity", "chosen", "vanishing"), rows)
    return (0 if passed else 1), render(config, result, table) + summarize_suites(results)


COMMANDS: dict[str, Callable[[argparse.Namespace, EngineSettings, JobConfig], CommandResult]] = {
    "zeta": cmd_zeta,
    "theta": cmd_theta,
    "eisenstein": cmd_eisenstein,
    "hall": cmd_hall,
    "blowup": cmd_blowup,
    "classify-torsors": cmd_classify_torsors,
    "check-funceq": cmd_check_funceq,
    "check-specializations": cmd_check_specializations,
    "oracle": cmd_oracle,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    """Main entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        settings = load_settings(args)
        config = job_config(args, settings)
        status, output = COMMANDS[args.command](args, settings, config)
    except KeyboardInterrupt:
        print("\n\nInterrupted by user", file=sys.stderr)
        return 130
    except (ValidationError, yaml.YAMLError, OSError) as e:
        format_yaml_error(e, args.config or Path("<environment or command line>"))
        return 1
    except MotivicError as e:
        format_engine_error(e, args.command)
        return 1
    sys.stdout.write(output)
    return status


if __name__ == "__main__":
    sys.exit(main())
