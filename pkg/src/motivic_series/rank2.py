"""
Rank-two bundles on the projective line.

Series here are power series in ``x = z2/z1``; the coefficient of ``x**k`` belongs to
``a1 = -k``.  Only the trivial bundle is computed from scratch; other coefficient
streams are accepted and checked.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Self

from .affine import AffCoweight, AffWeylElt
from .coeff import L, ONE, ZERO, CurveData, MotCoeff, RatFnU, zeta_from_curve
from .conventions import FunceqVariant, Rank2Variant
from .eisenstein import denominator_factor, funceq_residual_for
from .errors import CoefficientError, MalformedInputError
from .rootsys import FiniteWeylElt, RootSystem
from .series import LatticeSeries, mul

logger = logging.getLogger(__name__)


@dataclass
class Rank2Series:
    coefficients: dict[int, MotCoeff]
    closed: RatFnU | None = None

    def __post_init__(self):
        positive = [a1 for a1, c in self.coefficients.items() if a1 > 0 and c]
        if positive:
            raise MalformedInputError(f"coefficients at a1 > 0 must vanish, got a1 = {positive}")

    @property
    def order(self) -> int:
        return max((-a1 for a1 in self.coefficients), default=0)

    def coefficient(self, a1: int) -> MotCoeff:
        return self.coefficients.get(a1, ZERO)

    def stream(self) -> list[MotCoeff]:
        """Coefficients of x**0 .. x**order."""
        return [self.coefficient(-k) for k in range(self.order + 1)]

    def matches_closed_form(self) -> bool:
        if self.closed is None:
            return True
        return self.closed.series(self.order) == self.stream()

    def to_json(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "coefficients": [{"a1": -k, "coeff": c.to_json()} for k, c in enumerate(self.stream())]
        }
        if self.closed is not None:
            data["closed"] = self.closed.to_json()
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, Any] | Sequence[Mapping[str, Any]]) -> Self:
        """Accepts the full object or a bare ``[{a1, coeff}]`` stream."""
        entries = data if isinstance(data, Sequence) else data.get("coefficients", [])
        try:
            coefficients = {
                int(entry["a1"]): (
                    MotCoeff.from_json(entry["coeff"])
                    if isinstance(entry["coeff"], Mapping)
                    else MotCoeff.parse(entry["coeff"])
                )
                for entry in entries
            }
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedInputError(f"malformed coefficient stream: {e}") from e
        closed = None
        if isinstance(data, Mapping) and "closed" in data:
            closed = RatFnU.from_json(data["closed"])
        return cls(coefficients, closed)

    @classmethod
    def from_lattice_layer(cls, layer: LatticeSeries) -> Self:
        """Read a q**0-layer of an A1 series as a stream in x = z**(alpha_check)."""
        if layer.rs.rank != 1:
            raise MalformedInputError(f"only rank one layers map to rank-two series, got {layer.rs.label}")
        coefficients: dict[int, MotCoeff] = {}
        for x, c in layer.items():
            if x.central != 0:
                raise MalformedInputError(f"monomial {x} is not in the q^0 layer")
            coefficients[-x.finite[0]] = coefficients.get(-x.finite[0], ZERO) + c
        return cls(coefficients)


def _quot_closed_form() -> RatFnU:
    return RatFnU.from_coefficients([L + 1]) / RatFnU.from_coefficients([ONE, -ONE]) / RatFnU.from_coefficients(
        [ONE, -(L**2)]
    )


def quot_series(order: int = 10) -> Rank2Series:
    """Quot-scheme series of the trivial rank-two bundle: c(a1) = 1 + L + ... + L**(1 - 2 a1)."""
    if order < 0:
        raise MalformedInputError(f"order must be non-negative, got {order}")
    coefficients = {}
    for k in range(order + 1):
        coefficients[-k] = sum((L**i for i in range(2 * k + 2)), ZERO)
    return Rank2Series(coefficients, _quot_closed_form())


def subbundle_series_from_quot(q: Rank2Series, zeta: RatFnU, order: int | None = None) -> Rank2Series:
    """Divide the Quot series by zeta(x); for the trivial bundle this counts subbundles."""
    order = q.order if order is None else order
    z = zeta.series(order)
    if not z[0].is_unit:
        raise CoefficientError(f"non-invertible leading coefficient {z[0]}")
    lead_inverse = z[0].inverse()
    stream = q.stream()
    out: list[MotCoeff] = []
    for k in range(order + 1):
        acc = stream[k] if k < len(stream) else ZERO
        for i in range(1, k + 1):
            acc = acc - z[i] * out[k - i]
        out.append(acc * lead_inverse)
    closed = q.closed / zeta if q.closed is not None else None
    return Rank2Series({-k: c for k, c in enumerate(out)}, closed)


def funceq_residual_rank2(s: Rank2Series, g: int = 0, variant: Rank2Variant | None = None) -> RatFnU:
    """
    ``E(x) - L**(l*e*(2-2g)) x**(-e*(2-2g)) E(L**-2 / x)`` for the closed form ``E``.

    Swapping ``z1 -> L z2``, ``z2 -> L**-1 z1`` sends ``x`` to ``L**-2 / x``.
    """
    if s.closed is None:
        raise MalformedInputError("the rank-two functional equation needs a closed form")
    variant = variant or Rank2Variant()
    exponent = 2 - 2 * g
    prefactor = RatFnU.constant(L ** (variant.l_sign * variant.exponent_sign * exponent)) * RatFnU.u() ** (
        -variant.exponent_sign * exponent
    )
    return s.closed - prefactor * s.closed.invert_u(-4)


def resolve_rank2_convention(s: Rank2Series, g: int = 0) -> tuple[Rank2Variant | None, list[str]]:
    passing = [v for v in Rank2Variant.all() if not funceq_residual_rank2(s, g, v)]
    logger.info("rank-two functional equation vanishes for %s", [v.key for v in passing])
    if not passing:
        return None, []
    return (Rank2Variant() if Rank2Variant() in passing else passing[0]), [v.key for v in passing]


def finite_numerator(rs: RootSystem, series: LatticeSeries, curve: CurveData | None = None) -> LatticeSeries:
    """Multiply a z-supported series by the product of (1 - L**2 u) Phi(u), u = L**(ht(a) - 1) z**a."""
    curve = curve or CurveData.projective_line()
    if any(x.central for x in series.exponents()):
        raise MalformedInputError("finite numerator needs a series without q-dependence")
    if len(series.loops()) > 1:
        raise MalformedInputError("finite numerator needs a series of a single v-degree")
    room = series.window.gmax - series.window.gmin
    phi = RatFnU.from_coefficients(curve.phi)
    result = series
    for root in rs.positive_roots:
        result = mul(result, denominator_factor(rs, phi, AffCoweight(root.coroot, 0, 0), room))
    return result


def finite_funceq_residual(
    rs: RootSystem,
    n: LatticeSeries,
    w: FiniteWeylElt,
    variant: FunceqVariant | None = None,
    genus: int = 0,
) -> tuple[LatticeSeries, list[str]]:
    """Finite-group analogue of the numerator check; returns the residual and every vanishing variant."""
    element = AffWeylElt((0,) * rs.rank, w)
    residual, _ = funceq_residual_for(rs, n, element, variant or FunceqVariant(), genus)
    vanishing = [v.key for v in FunceqVariant.all() if not funceq_residual_for(rs, n, element, v, genus)[0]]
    return residual, vanishing


@dataclass
class Rank2Report:
    quot: Rank2Series
    subbundles: Rank2Series
    residuals: dict[str, RatFnU] = field(default_factory=dict)

    @property
    def vanishing(self) -> list[str]:
        return [key for key, r in self.residuals.items() if not r]


def rank2_report(order: int = 10, g: int = 0) -> Rank2Report:
    q = quot_series(order)
    e = subbundle_series_from_quot(q, zeta_from_curve(CurveData.projective_line()), order)
    return Rank2Report(q, e, {v.key: funceq_residual_rank2(q, g, v) for v in Rank2Variant.all()})

