"""
Check-suite execution.

Each check case names a computation and its parameters; ``run_computation`` turns
that into a ``ComputationOutput`` and the expected results are checked against it.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from .affine import TorsorLabel, grade, parse_weyl_element, torsor_labels
from .check_implementations import ComputationOutput, IndividualCheckResult, check_result, residual_summary
from .coeff import L, CurveData, MotCoeff, zeta_from_curve, zeta_funceq_residual
from .conventions import ConventionRecord, FunceqVariant, Rank2Variant
from .eisenstein import (
    EisParams,
    blowup_F,
    eisenstein_E,
    funceq_residual_for,
    hall_P,
    numerator_N,
    psi_line,
    theta_zero,
)
from .errors import MalformedInputError, MotivicError
from .models import CheckCase, CheckSuite, EngineSettings
from .oracle import OracleCell, count_cells
from .rank2 import funceq_residual_rank2, quot_series, subbundle_series_from_quot
from .rootsys import RootSystem
from .series import QSeries, q_layer
from .workers import cached_root_system

logger = logging.getLogger(__name__)


@dataclass
class RunContext:
    """Settings and resolved conventions shared by every computation of a run."""

    settings: EngineSettings = field(default_factory=EngineSettings)
    record: ConventionRecord = field(default_factory=ConventionRecord)


@dataclass
class CheckCaseResult:
    """Result of executing a single check case."""

    check_case_name: str
    all_passed: bool
    individual_results: list[IndividualCheckResult]
    error: str | None = None


@dataclass
class CheckSuiteResult:
    """Result of executing an entire check suite."""

    suite_name: str
    all_passed: bool
    case_results: list[CheckCaseResult]


# ============================================================================
# Parameter Helpers
# ============================================================================


def _require(parameters: dict[str, Any], name: str) -> Any:
    if name not in parameters:
        raise MalformedInputError(f"missing parameter '{name}'")
    return parameters[name]


def _root_system(parameters: dict[str, Any], ctx: RunContext) -> RootSystem:
    label = f"{parameters.get('type', 'A')}{parameters.get('rank', 1)}"
    return cached_root_system(label, ctx.settings.rank_cap)


def _curve(genus: int, phi: list | None = None) -> CurveData:
    if phi is not None:
        return CurveData.from_strings(genus, phi)
    return CurveData.projective_line() if genus == 0 else CurveData.serre(genus)


def _eis_params(parameters: dict[str, Any], ctx: RunContext) -> EisParams:
    rs = _root_system(parameters, ctx)
    label = TorsorLabel.parse(rs, str(_require(parameters, "b")))
    gmax = int(parameters.get("grade", grade(rs, label.b)))
    curve = _curve(int(parameters.get("genus", 0)))
    return EisParams(rs, label, gmax, curve, workers=ctx.settings.workers)


def oracle_cell(parameters: dict[str, Any]) -> OracleCell:
    kind = _require(parameters, "kind")
    q = int(_require(parameters, "q"))
    if kind in ("subsheaves", "subbundles"):
        return OracleCell(kind, q, (int(_require(parameters, "a1")),))
    if kind == "polar_sections":
        return OracleCell(kind, q, (int(_require(parameters, "m")), int(_require(parameters, "n"))))
    if kind == "symmetric_product":
        return OracleCell(kind, q, (int(_require(parameters, "n")),))
    raise MalformedInputError(f"unknown oracle kind '{kind}'")


# ============================================================================
# Computations
# ============================================================================


def _zeta(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    genus = int(parameters.get("genus", 0))
    z = zeta_from_curve(_curve(genus, parameters.get("phi")))
    order = int(parameters.get("order", 6))
    residuals = {"default": residual_summary(zeta_funceq_residual(z, genus))}
    return ComputationOutput("zeta", QSeries(order, z.series(order)), residuals=residuals, active_variant="default")


def _psi(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    order = int(parameters.get("order", 6))
    return ComputationOutput("psi", QSeries(order, psi_line(int(_require(parameters, "m"))).series(order)))


def _theta(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    rs = _root_system(parameters, ctx)
    f = parameters.get("f")
    series = theta_zero(rs, int(_require(parameters, "d")), f, int(parameters.get("order", 10)))
    return ComputationOutput("theta", series)


def _blowup(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    rs = _root_system(parameters, ctx)
    label = TorsorLabel.parse(rs, str(_require(parameters, "b")))
    return ComputationOutput("blowup", blowup_F(rs, label, int(parameters.get("order", 10))))


def _eisenstein(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    series = eisenstein_E(_eis_params(parameters, ctx))
    if "layer" in parameters:
        series = q_layer(series, int(parameters["layer"]))
    return ComputationOutput("eisenstein", series)


def _hall(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    l = MotCoeff.parse(parameters["l"]) if "l" in parameters else L
    action = parameters.get("action", ctx.record.hall_action)
    series = hall_P(_eis_params(parameters, ctx), parameters.get("form", "closed"), action, l)
    if "layer" in parameters:
        series = q_layer(series, int(parameters["layer"]))
    return ComputationOutput("hall", series)


def _quot(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    s = quot_series(int(parameters.get("order", 6)))
    return ComputationOutput("quot", QSeries(s.order, s.stream()))


def _subbundles(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    order = int(parameters.get("order", 6))
    s = subbundle_series_from_quot(quot_series(order), zeta_from_curve(CurveData.projective_line()), order)
    return ComputationOutput("subbundles", QSeries(s.order, s.stream()))


def _oracle(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    [(_, count)] = count_cells([oracle_cell(parameters)], ctx.settings.oracle_bounds())
    return ComputationOutput("oracle", count=count)


def _torsors(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    rs = _root_system(parameters, ctx)
    labels = torsor_labels(rs, int(_require(parameters, "d")))
    return ComputationOutput("torsors", labels=[str(label) for label in labels])


def _funceq(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    p = _eis_params(parameters, ctx)
    n = numerator_N(p)
    w = parse_weyl_element(p.rs, str(parameters.get("w", "e")))
    residuals = {
        v.key: residual_summary(funceq_residual_for(p.rs, n, w, v, p.curve.genus)[0]) for v in FunceqVariant.all()
    }
    return ComputationOutput("funceq", residuals=residuals, active_variant=ctx.record.funceq.key)


def _rank2_funceq(parameters: dict[str, Any], ctx: RunContext) -> ComputationOutput:
    s = quot_series(int(parameters.get("order", 6)))
    genus = int(parameters.get("genus", 0))
    residuals = {v.key: residual_summary(funceq_residual_rank2(s, genus, v)) for v in Rank2Variant.all()}
    return ComputationOutput("rank2-funceq", residuals=residuals, active_variant=ctx.record.rank2.key)


COMPUTATION_MAP: dict[str, Callable[[dict[str, Any], RunContext], ComputationOutput]] = {
    "zeta": _zeta,
    "psi": _psi,
    "theta": _theta,
    "blowup": _blowup,
    "eisenstein": _eisenstein,
    "hall": _hall,
    "quot": _quot,
    "subbundles": _subbundles,
    "oracle": _oracle,
    "torsors": _torsors,
    "funceq": _funceq,
    "rank2-funceq": _rank2_funceq,
}


def run_computation(computation: str, parameters: dict[str, Any], ctx: RunContext | None = None) -> ComputationOutput:
    ctx = ctx or RunContext()
    runner = COMPUTATION_MAP.get(computation)
    if runner is None:
        raise MalformedInputError(f"unknown computation '{computation}'")
    try:
        return runner(parameters, ctx)
    except (TypeError, ValueError) as e:
        raise MalformedInputError(f"invalid parameters for '{computation}': {e}") from e


# ============================================================================
# Suite Execution
# ============================================================================


def run_check_case(check_case: CheckCase, ctx: RunContext | None = None) -> CheckCaseResult:
    """
    Execute a single check case.

    An engine error fails every expected result of the case; it does not stop the suite.
    """
    ctx = ctx or RunContext()
    logger.info("running check case '%s' (%s)", check_case.name, check_case.computation)
    try:
        output = run_computation(check_case.computation, check_case.parameters, ctx)
    except MotivicError as e:
        logger.debug("check case '%s' failed to compute", check_case.name, exc_info=True)
        individual_results = [
            IndividualCheckResult(
                check_name=check_case.name,
                passed=False,
                log=f"✗ Computation failed; cannot check {type(expected).__name__}: {e}",
            )
            for expected in check_case.expected_results
        ]
        return CheckCaseResult(check_case.name, False, individual_results, error=str(e))

    def run_reference(computation: str, parameters: dict[str, Any]) -> ComputationOutput:
        return run_computation(computation, parameters, ctx)

    individual_results = []
    for expected_result in check_case.expected_results:
        try:
            result = check_result(output, expected_result, run_reference)
        except MotivicError as e:
            result = IndividualCheckResult(check_name=check_case.name, passed=False, log=f"✗ {e}")
        individual_results.append(result)
    return CheckCaseResult(
        check_case_name=check_case.name,
        all_passed=all(r.passed for r in individual_results),
        individual_results=individual_results,
    )


def run_check_suite(check_suite: CheckSuite, ctx: RunContext | None = None) -> CheckSuiteResult:
    """
    Execute all check cases in a check suite.

    Args:
        check_suite: The check suite to execute
        ctx: Settings and conventions; defaults when omitted

    Returns:
        CheckSuiteResult with all check case results
    """
    case_results = [run_check_case(check_case, ctx) for check_case in check_suite.check_cases]
    return CheckSuiteResult(
        suite_name=check_suite.suite_name,
        all_passed=all(case.all_passed for case in case_results),
        case_results=case_results,
    )
