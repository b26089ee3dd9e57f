"""
Truncated exact formal series.

``LatticeSeries`` lives on the affine coweight lattice and is truncated by grade;
``QSeries`` is a plain power series in q truncated by exponent.  Both carry their
window as data and every operation computes the window of its result.
"""

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Self

from .affine import AffCoweight, AffWeight, AffWeylElt, act_coweight, grade, inverse, pairing
from .coeff import ONE, ZERO, MotCoeff, SpecMode, specialize
from .errors import CoefficientError, MalformedInputError, WindowError
from .rootsys import RootSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Window:
    """Inclusive grade range ``gmin <= grade <= gmax`` on which a series is exact."""

    gmin: int
    gmax: int

    def __post_init__(self):
        if self.gmax < self.gmin:
            raise WindowError(f"empty window [{self.gmin}, {self.gmax}]")

    def contains(self, g: int) -> bool:
        return self.gmin <= g <= self.gmax


def _specialized_coefficient(c: MotCoeff, mode: SpecMode) -> MotCoeff:
    value = specialize(c, mode)
    if isinstance(value, MotCoeff):
        return value
    if isinstance(value, Fraction):
        raise CoefficientError(f"coefficient {c} specializes to the non-integer {value} under {mode}")
    return MotCoeff.from_int(value)


class LatticeSeries:
    __slots__ = ("rs", "window", "_terms", "_grades")

    def __init__(self, rs: RootSystem, window: Window, terms: Mapping[AffCoweight, MotCoeff] | None = None):
        self.rs = rs
        self.window = window
        self._terms: dict[AffCoweight, MotCoeff] = {}
        self._grades: dict[AffCoweight, int] = {}
        for x, c in (terms or {}).items():
            if not c:
                continue
            g = grade(rs, x)
            if g > window.gmax:
                continue
            if g < window.gmin:
                raise WindowError(f"exponent {x} of grade {g} lies below the window start {window.gmin}")
            self._terms[x] = c
            self._grades[x] = g

    @classmethod
    def monomial(cls, rs: RootSystem, x: AffCoweight, gmax: int, c: MotCoeff | int = ONE) -> Self:
        g = grade(rs, x)
        return cls(rs, Window(g, max(g, gmax)), {x: MotCoeff.coerce(c)})

    @classmethod
    def one(cls, rs: RootSystem, gmax: int) -> Self:
        return cls.monomial(rs, AffCoweight.zero(rs.rank), gmax)

    @classmethod
    def zero(cls, rs: RootSystem, window: Window) -> Self:
        return cls(rs, window)

    def canonical_key(self, x: AffCoweight) -> tuple:
        return (grade(self.rs, x), x.central, x.finite, x.loop)

    def items(self) -> list[tuple[AffCoweight, MotCoeff]]:
        return sorted(self._terms.items(), key=lambda item: self.canonical_key(item[0]))

    def exponents(self) -> list[AffCoweight]:
        return [x for x, _ in self.items()]

    def coefficient(self, x: AffCoweight) -> MotCoeff:
        return self._terms.get(x, ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _check_compatible(self, other: "LatticeSeries") -> None:
        if other.rs.label != self.rs.label:
            raise MalformedInputError(f"cannot combine series over {self.rs.label} and {other.rs.label}")

    def __add__(self, other: "LatticeSeries") -> "LatticeSeries":
        if not isinstance(other, LatticeSeries):
            return NotImplemented
        self._check_compatible(other)
        window = Window(min(self.window.gmin, other.window.gmin), min(self.window.gmax, other.window.gmax))
        terms = dict(self._terms)
        for x, c in other._terms.items():
            terms[x] = terms.get(x, ZERO) + c
        return LatticeSeries(self.rs, window, terms)

    def __neg__(self) -> "LatticeSeries":
        return LatticeSeries(self.rs, self.window, {x: -c for x, c in self._terms.items()})

    def __sub__(self, other: "LatticeSeries") -> "LatticeSeries":
        if not isinstance(other, LatticeSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c: MotCoeff | int) -> "LatticeSeries":
        c = MotCoeff.coerce(c)
        return LatticeSeries(self.rs, self.window, {x: c * v for x, v in self._terms.items()})

    def shift(self, x: AffCoweight, c: MotCoeff | int = ONE) -> "LatticeSeries":
        """Multiply by the monomial c * t**x."""
        c = MotCoeff.coerce(c)
        g = grade(self.rs, x)
        window = Window(self.window.gmin + g, self.window.gmax + g)
        return LatticeSeries(self.rs, window, {y + x: c * v for y, v in self._terms.items()})

    def __mul__(self, other: "LatticeSeries | MotCoeff | int") -> "LatticeSeries":
        if isinstance(other, MotCoeff | int):
            return self.scale(other)
        if not isinstance(other, LatticeSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def truncate(self, gmax: int) -> "LatticeSeries":
        return LatticeSeries(self.rs, Window(self.window.gmin, min(gmax, self.window.gmax)), self._terms)

    def restrict(self, predicate: Callable[[AffCoweight], bool]) -> "LatticeSeries":
        return LatticeSeries(self.rs, self.window, {x: c for x, c in self._terms.items() if predicate(x)})

    def loops(self) -> set[int]:
        return {x.loop for x in self._terms}

    @property
    def is_v_homogeneous(self) -> bool:
        return len(self.loops()) <= 1

    def specialize(self, mode: SpecMode) -> "LatticeSeries":
        if mode.is_identity:
            return self
        return LatticeSeries(
            self.rs, self.window, {x: _specialized_coefficient(c, mode) for x, c in self._terms.items()}
        )

    def map_coefficients(self, fn: Callable[[MotCoeff], MotCoeff]) -> "LatticeSeries":
        return LatticeSeries(self.rs, self.window, {x: fn(c) for x, c in self._terms.items()})

    def first_difference(
        self, other: "LatticeSeries", gmin: int | None = None, gmax: int | None = None
    ) -> tuple[AffCoweight, MotCoeff, MotCoeff] | None:
        """First monomial in canonical order where the two series differ within the common window."""
        self._check_compatible(other)
        low = max(self.window.gmin, other.window.gmin) if gmin is None else gmin
        high = min(self.window.gmax, other.window.gmax) if gmax is None else gmax
        keys = set(self._terms) | set(other._terms)
        for x in sorted(keys, key=self.canonical_key):
            if not low <= grade(self.rs, x) <= high:
                continue
            a, b = self.coefficient(x), other.coefficient(x)
            if a != b:
                return x, a, b
        return None

    def equals_within(self, other: "LatticeSeries", gmax: int | None = None) -> bool:
        return self.first_difference(other, gmax=gmax) is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticeSeries):
            return NotImplemented
        return self.rs.label == other.rs.label and self.window == other.window and self._terms == other._terms

    __hash__ = None

    def to_json(self) -> dict[str, Any]:
        return {
            "root_system": self.rs.label,
            "window": {"gmin": self.window.gmin, "H": self.window.gmax},
            "terms": [
                {"z": list(x.finite), "q": x.central, "v": x.loop, "coeff": c.to_json()} for x, c in self.items()
            ],
            "order": "canonical",
        }

    @classmethod
    def from_json(cls, rs: RootSystem, data: Mapping[str, Any]) -> Self:
        try:
            if data.get("root_system", rs.label) != rs.label:
                raise MalformedInputError(f"series is over {data['root_system']}, expected {rs.label}")
            window = Window(int(data["window"]["gmin"]), int(data["window"]["H"]))
            terms = {
                AffCoweight(tuple(int(a) for a in term["z"]), int(term["q"]), int(term["v"])): MotCoeff.from_json(
                    term["coeff"]
                )
                for term in data["terms"]
            }
        except (KeyError, TypeError) as e:
            raise MalformedInputError(f"malformed series JSON: {e}") from e
        return cls(rs, window, terms)

    def __repr__(self) -> str:
        return f"LatticeSeries({self.rs.label}, {self.window}, {len(self)} terms)"


def mul(a: LatticeSeries, b: LatticeSeries) -> LatticeSeries:
    """Product valid up to grade min(H_a + gmin_b, H_b + gmin_a)."""
    a._check_compatible(b)
    gmin = a.window.gmin + b.window.gmin
    gmax = min(a.window.gmax + b.window.gmin, b.window.gmax + a.window.gmin)
    if gmax < gmin:
        raise WindowError(f"window underflow in product: [{gmin}, {gmax}]")
    b_items = sorted(((y, b._grades[y], c) for y, c in b._terms.items()), key=lambda item: item[1])
    terms: dict[AffCoweight, MotCoeff] = {}
    for x, cx in a._terms.items():
        limit = gmax - a._grades[x]
        for y, gy, cy in b_items:
            if gy > limit:
                break
            key = x + y
            terms[key] = terms.get(key, ZERO) + cx * cy
    return LatticeSeries(a.rs, Window(gmin, gmax), terms)


def sum_series(rs: RootSystem, window: Window, parts: Iterable[LatticeSeries]) -> LatticeSeries:
    """Associative merge of many series; the result does not depend on the order of ``parts``."""
    terms: dict[AffCoweight, MotCoeff] = {}
    gmax = window.gmax
    for part in parts:
        gmax = min(gmax, part.window.gmax)
        for x, c in part._terms.items():
            terms[x] = terms.get(x, ZERO) + c
    return LatticeSeries(rs, Window(window.gmin, gmax), terms)


def expand_unit_inverse(rs: RootSystem, c: MotCoeff | int, mu: AffCoweight, gmax: int) -> LatticeSeries:
    """sum_k c**k t**(k mu), truncated at grade gmax."""
    step = grade(rs, mu)
    if step <= 0:
        raise WindowError(f"non-expandable direction {mu} of grade {step}")
    c = MotCoeff.coerce(c)
    terms = {}
    power = ONE
    k = 0
    while k * step <= gmax:
        terms[mu.scaled(k)] = power
        power = power * c
        k += 1
    return LatticeSeries(rs, Window(0, max(gmax, 0)), terms)


def geometric_factor(
    rs: RootSystem, numerator: MotCoeff | int, denominator: MotCoeff | int, mu: AffCoweight, gmax: int
) -> LatticeSeries:
    """(1 - numerator * t**mu) / (1 - denominator * t**mu) expanded at grade(mu) > 0."""
    linear = LatticeSeries(
        rs, Window(0, max(gmax, 0)), {AffCoweight.zero(rs.rank): ONE, mu: -MotCoeff.coerce(numerator)}
    )
    return mul(linear, expand_unit_inverse(rs, denominator, mu, gmax))


def weyl_twist_substitute(f: LatticeSeries, w: AffWeylElt, nu: AffWeight) -> LatticeSeries:
    """Monomial-wise image of t -> L**nu w(t): t**mu -> L**<nu, mu> t**(w^-1 mu)."""
    rs = f.rs
    w_inv = inverse(rs, w)
    terms = {}
    for x, c in f.items():
        image = act_coweight(rs, w_inv, x)
        terms[image] = terms.get(image, ZERO) + c * MotCoeff.s_power(2 * pairing(nu, x))
    grades = [grade(rs, x) for x in terms] or [f.window.gmin, f.window.gmax]
    return LatticeSeries(rs, Window(min(grades), max(grades)), terms)


def q_layer(f: LatticeSeries, c: int) -> LatticeSeries:
    return f.restrict(lambda x: x.central == c)


class QSeries:
    """Power series in q with coefficients in the motivic ring, exact through ``order``."""

    __slots__ = ("order", "_coefficients")

    def __init__(self, order: int, coefficients: Sequence[MotCoeff | int] = ()):
        if order < 0:
            raise WindowError(f"q-series order must be non-negative, got {order}")
        self.order = order
        values = [MotCoeff.coerce(c) for c in coefficients[: order + 1]]
        self._coefficients = values + [ZERO] * (order + 1 - len(values))

    @classmethod
    def one(cls, order: int) -> Self:
        return cls(order, [ONE])

    @classmethod
    def monomial(cls, order: int, exponent: int, c: MotCoeff | int = ONE) -> Self:
        coefficients = [ZERO] * (order + 1)
        if exponent <= order:
            coefficients[exponent] = MotCoeff.coerce(c)
        return cls(order, coefficients)

    @classmethod
    def geometric_factor(
        cls, order: int, numerator: MotCoeff | int, denominator: MotCoeff | int, step: int
    ) -> Self:
        """(1 - numerator * q**step) / (1 - denominator * q**step)."""
        if step <= 0:
            raise WindowError(f"non-expandable direction q^{step}")
        numerator, denominator = MotCoeff.coerce(numerator), MotCoeff.coerce(denominator)
        inverse_series = [ZERO] * (order + 1)
        power = ONE
        for k in range(0, order + 1, step):
            inverse_series[k] = power
            power = power * denominator
        linear = cls.one(order) - cls.monomial(order, step, numerator)
        return linear * cls(order, inverse_series)

    def coefficients(self) -> list[MotCoeff]:
        return list(self._coefficients)

    def __getitem__(self, n: int) -> MotCoeff:
        return self._coefficients[n]

    def _common(self, other: "QSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other: "QSeries") -> "QSeries":
        order = self._common(other)
        return QSeries(order, [self[n] + other[n] for n in range(order + 1)])

    def __sub__(self, other: "QSeries") -> "QSeries":
        order = self._common(other)
        return QSeries(order, [self[n] - other[n] for n in range(order + 1)])

    def __mul__(self, other: "QSeries | MotCoeff | int") -> "QSeries":
        if isinstance(other, MotCoeff | int):
            c = MotCoeff.coerce(other)
            return QSeries(self.order, [c * v for v in self._coefficients])
        order = self._common(other)
        out = [ZERO] * (order + 1)
        for i, a in enumerate(self._coefficients[: order + 1]):
            if not a:
                continue
            for j in range(order + 1 - i):
                if other[j]:
                    out[i + j] = out[i + j] + a * other[j]
        return QSeries(order, out)

    __rmul__ = __mul__

    def truncate(self, order: int) -> "QSeries":
        return QSeries(min(order, self.order), self._coefficients)

    def specialize(self, mode: SpecMode) -> "QSeries":
        if mode.is_identity:
            return self
        return QSeries(self.order, [_specialized_coefficient(c, mode) for c in self._coefficients])

    def first_difference(self, other: "QSeries") -> tuple[int, MotCoeff, MotCoeff] | None:
        for n in range(self._common(other) + 1):
            if self[n] != other[n]:
                return n, self[n], other[n]
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self._coefficients == other._coefficients

    __hash__ = None

    def to_json(self) -> dict[str, Any]:
        return {"order": self.order, "coefficients": [c.to_json() for c in self._coefficients]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Self:
        try:
            return cls(int(data["order"]), [MotCoeff.from_json(c) for c in data["coefficients"]])
        except (KeyError, TypeError) as e:
            raise MalformedInputError(f"malformed q-series JSON: {e}") from e

    def __str__(self) -> str:
        parts = []
        for n, c in enumerate(self._coefficients):
            if not c:
                continue
            power = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
            parts.append(f"({c})*{power}" if power else f"({c})")
        return " + ".join(parts) + f" + O(q^{self.order + 1})" if parts else f"O(q^{self.order + 1})"

    def __repr__(self) -> str:
        return f"QSeries({self})"
