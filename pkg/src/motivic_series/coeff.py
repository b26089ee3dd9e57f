"""
Exact coefficient arithmetic.

Coefficients of every series in this package live in the ring of Laurent polynomials
in ``s`` where ``s**2`` is the Tate class L.  Rational functions in one variable ``u``
over that ring represent motivic zeta functions of curves.
"""

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Self

import sympy
from pydantic import BaseModel, model_validator
from sympy.polys.domains import ZZ
from sympy.polys.fields import field
from sympy.polys.rings import ring

from .errors import CoefficientError, MalformedInputError

logger = logging.getLogger(__name__)

S_RING, _s = ring("s", ZZ)
SU_FIELD, _S, _U = field("s,u", ZZ)
_S_SYMBOL = sympy.Symbol("s")


def _monomial_text(exponent: int) -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return "s"
    if exponent % 2:
        return f"s^{exponent}"
    power = exponent // 2
    return "L" if power == 1 else f"L^{power}"


class MotCoeff:
    """
    Laurent polynomial in s with integer coefficients.

    Stored as a sympy polynomial with nonzero constant term together with an integer
    shift, so ``s**shift * poly`` is the represented value.  Instances are immutable.
    """

    __slots__ = ("_poly", "_shift")

    def __init__(self, terms: Mapping[int, int] | None = None):
        cleaned = {int(e): int(c) for e, c in (terms or {}).items() if c}
        if not cleaned:
            self._poly, self._shift = S_RING.zero, 0
            return
        low = min(cleaned)
        self._poly = S_RING.from_dict({(e - low,): c for e, c in cleaned.items()})
        self._shift = low

    @classmethod
    def _from_poly(cls, poly, shift: int) -> Self:
        obj = cls.__new__(cls)
        if not poly:
            obj._poly, obj._shift = S_RING.zero, 0
            return obj
        low = min(monom[0] for monom in poly)
        if low:
            poly = S_RING.from_dict({(monom[0] - low,): c for monom, c in poly.items()})
        obj._poly, obj._shift = poly, shift + low
        return obj

    @classmethod
    def from_int(cls, value: int) -> Self:
        return cls({0: value})

    @classmethod
    def s_power(cls, exponent: int, coefficient: int = 1) -> Self:
        return cls({exponent: coefficient})

    @classmethod
    def tate(cls, power: int = 1) -> Self:
        """The class L**power."""
        return cls({2 * power: 1})

    @classmethod
    def coerce(cls, value: "MotCoeff | int") -> Self:
        if isinstance(value, MotCoeff):
            return value
        if isinstance(value, int):
            return cls.from_int(value)
        raise TypeError(f"cannot use {type(value).__name__} as a coefficient")

    @classmethod
    def parse(cls, text: "str | int") -> Self:
        """
        Parse a coefficient literal such as ``"2*L^3 - 2*L"`` or ``"1 - 2*s + s^2"``.

        ``L`` denotes the Tate class and ``s`` its square root.  Only integer
        coefficients are accepted.
        """
        if isinstance(text, int):
            return cls.from_int(text)
        try:
            expr = sympy.expand(sympy.sympify(text, locals={"L": _S_SYMBOL**2, "s": _S_SYMBOL}))
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise MalformedInputError(f"cannot parse coefficient '{text}': {e}") from e
        terms: dict[int, int] = {}
        for monomial, coefficient in expr.as_coefficients_dict().items():
            if not coefficient.is_Integer:
                raise MalformedInputError(f"non-integer coefficient {coefficient} in '{text}'")
            if monomial == 1:
                exponent = 0
            elif monomial == _S_SYMBOL:
                exponent = 1
            else:
                base, power = monomial.as_base_exp()
                if base != _S_SYMBOL or not power.is_Integer:
                    raise MalformedInputError(f"'{text}' is not a Laurent polynomial in L and s")
                exponent = int(power)
            terms[exponent] = terms.get(exponent, 0) + int(coefficient)
        return cls(terms)

    @classmethod
    def from_json(cls, data: Mapping[str, str | int]) -> Self:
        try:
            return cls({int(e): int(c) for e, c in data.items()})
        except (TypeError, ValueError) as e:
            raise MalformedInputError(f"malformed coefficient {data!r}") from e

    def terms(self) -> dict[int, int]:
        return {monom[0] + self._shift: int(c) for monom, c in self._poly.items()}

    def to_json(self) -> dict[str, str]:
        return {str(e): str(c) for e, c in sorted(self.terms().items())}

    @property
    def is_unit(self) -> bool:
        """True for the units of the ring, which are exactly +-s**k."""
        if len(self._poly) != 1:
            return False
        ((_, c),) = self._poly.items()
        return abs(int(c)) == 1

    def inverse(self) -> Self:
        if not self.is_unit:
            raise CoefficientError(f"{self} is not invertible")
        ((_, c),) = self._poly.items()
        return type(self)({-self._shift: int(c)})

    def min_exponent(self) -> int:
        return self._shift

    def max_exponent(self) -> int:
        return max(self.terms()) if self._poly else 0

    def evaluate_tate(self, value: int) -> int | Fraction:
        """Set L := value.  Odd powers of s have no meaning here."""
        total = Fraction(0)
        for exponent, c in self.terms().items():
            if exponent % 2:
                raise CoefficientError(f"non-integral Tate power s^{exponent} in {self}")
            power = exponent // 2
            if power >= 0:
                total += c * value**power
            elif value == 0:
                raise CoefficientError(f"negative Tate power L^{power} cannot be evaluated at L = 0")
            else:
                total += Fraction(c, value**-power)
        return int(total) if total.denominator == 1 else total

    def euler(self) -> int:
        return sum(self.terms().values())

    def _aligned(self, other: "MotCoeff"):
        base = min(self._shift, other._shift)
        return self._poly * _s ** (self._shift - base), other._poly * _s ** (other._shift - base), base

    def __add__(self, other: "MotCoeff | int") -> Self:
        if not isinstance(other, MotCoeff | int):
            return NotImplemented
        other = MotCoeff.coerce(other)
        a, b, base = self._aligned(other)
        return self._from_poly(a + b, base)

    __radd__ = __add__

    def __neg__(self) -> Self:
        return self._from_poly(-self._poly, self._shift)

    def __sub__(self, other: "MotCoeff | int") -> Self:
        if not isinstance(other, MotCoeff | int):
            return NotImplemented
        return self + (-MotCoeff.coerce(other))

    def __rsub__(self, other: int) -> Self:
        return MotCoeff.coerce(other) - self

    def __mul__(self, other: "MotCoeff | int") -> Self:
        if not isinstance(other, MotCoeff | int):
            return NotImplemented
        other = MotCoeff.coerce(other)
        return self._from_poly(self._poly * other._poly, self._shift + other._shift)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Self:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self._from_poly(self._poly**exponent, self._shift * exponent)

    def __bool__(self) -> bool:
        return bool(self._poly)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = MotCoeff.from_int(other)
        if not isinstance(other, MotCoeff):
            return NotImplemented
        return self._shift == other._shift and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self._shift, tuple(sorted(self.terms().items()))))

    def __str__(self) -> str:
        if not self._poly:
            return "0"
        pieces = []
        for exponent, c in sorted(self.terms().items(), reverse=True):
            monomial = _monomial_text(exponent)
            magnitude = abs(c)
            if monomial:
                body = monomial if magnitude == 1 else f"{magnitude}*{monomial}"
            else:
                body = str(magnitude)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MotCoeff({self.terms()!r})"


ZERO = MotCoeff()
ONE = MotCoeff.from_int(1)
L = MotCoeff.tate()


class SpecMode(BaseModel):
    """A specialization of the coefficient ring (a motivic measure)."""

    model_config = {"extra": "forbid", "frozen": True}

    kind: Literal["euler", "point_count", "serre", "generic", "tate"] = "generic"
    value: int | None = None

    @model_validator(mode="after")
    def check_value(self) -> Self:
        if self.kind == "point_count":
            if self.value is None or self.value < 2 or not sympy.isprime(self.value):
                raise ValueError(f"point_count requires a prime q >= 2, got {self.value}")
        elif self.kind == "tate":
            if self.value is None:
                raise ValueError("tate requires an integer value for L")
        elif self.value is not None:
            raise ValueError(f"specialization '{self.kind}' takes no value")
        return self

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse ``generic``, ``euler``, ``serre``, ``point_count:5`` or ``tate:0``."""
        kind, _, value = text.strip().partition(":")
        try:
            return cls(kind=kind, value=int(value) if value else None)
        except ValueError as e:
            raise MalformedInputError(f"invalid specialization '{text}': {e}") from e

    @property
    def is_identity(self) -> bool:
        return self.kind in ("serre", "generic")

    def __str__(self) -> str:
        return self.kind if self.value is None else f"{self.kind}:{self.value}"


def specialize(c: MotCoeff, mode: SpecMode) -> MotCoeff | int | Fraction:
    if mode.kind == "euler":
        return c.euler()
    if mode.kind in ("point_count", "tate"):
        return c.evaluate_tate(mode.value)
    return c


def _coeff_to_field(c: MotCoeff):
    result = SU_FIELD.zero
    for exponent, value in c.terms().items():
        result += value * _S**exponent
    return result


def _u_coefficients(poly) -> dict[int, MotCoeff]:
    by_degree: dict[int, dict[int, int]] = {}
    for (i, j), c in poly.items():
        by_degree.setdefault(j, {})[i] = int(c)
    return {j: MotCoeff(terms) for j, terms in by_degree.items()}


class RatFnU:
    """Rational function in u over the coefficient ring, kept in lowest terms by sympy."""

    __slots__ = ("_frac",)

    def __init__(self, frac):
        self._frac = frac

    @classmethod
    def from_coefficients(
        cls, num: Sequence[MotCoeff | int], den: Sequence[MotCoeff | int] = (1,)
    ) -> Self:
        numerator = sum(
            (_coeff_to_field(MotCoeff.coerce(c)) * _U**i for i, c in enumerate(num)), SU_FIELD.zero
        )
        denominator = sum(
            (_coeff_to_field(MotCoeff.coerce(c)) * _U**i for i, c in enumerate(den)), SU_FIELD.zero
        )
        if not denominator:
            raise MalformedInputError("denominator of a rational function is zero")
        return cls(numerator / denominator)

    @classmethod
    def constant(cls, c: MotCoeff | int) -> Self:
        return cls(_coeff_to_field(MotCoeff.coerce(c)))

    @classmethod
    def u(cls) -> Self:
        return cls(_U)

    @staticmethod
    def _lift(other):
        if isinstance(other, RatFnU):
            return other._frac
        if isinstance(other, MotCoeff | int):
            return _coeff_to_field(MotCoeff.coerce(other))
        return None

    def __add__(self, other):
        lifted = self._lift(other)
        return NotImplemented if lifted is None else RatFnU(self._frac + lifted)

    __radd__ = __add__

    def __sub__(self, other):
        lifted = self._lift(other)
        return NotImplemented if lifted is None else RatFnU(self._frac - lifted)

    def __rsub__(self, other):
        lifted = self._lift(other)
        return NotImplemented if lifted is None else RatFnU(lifted - self._frac)

    def __mul__(self, other):
        lifted = self._lift(other)
        return NotImplemented if lifted is None else RatFnU(self._frac * lifted)

    __rmul__ = __mul__

    def __truediv__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        if not lifted:
            raise MalformedInputError("division of a rational function by zero")
        return RatFnU(self._frac / lifted)

    def __neg__(self):
        return RatFnU(-self._frac)

    def __pow__(self, exponent: int):
        if exponent < 0 and not self._frac:
            raise MalformedInputError("negative power of zero")
        return RatFnU(self._frac**exponent)

    def __bool__(self) -> bool:
        return bool(self._frac)

    def __eq__(self, other: object) -> bool:
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return not (self._frac - lifted)

    def __hash__(self) -> int:
        num, den = self.normalized()
        return hash((tuple(num), tuple(den)))

    def normalized(self) -> tuple[list[MotCoeff], list[MotCoeff]]:
        """
        Numerator and denominator as coefficient lists indexed by u-degree.

        When the constant term of the denominator is a unit +-s**k both sides are
        divided by it, so the denominator starts with 1.  Otherwise sympy's cancelled
        fraction is returned as is.
        """
        num = _u_coefficients(self._frac.numer)
        den = _u_coefficients(self._frac.denom)
        num_list = [num.get(j, ZERO) for j in range(max(num, default=0) + 1)]
        den_list = [den.get(j, ZERO) for j in range(max(den, default=0) + 1)]
        lead = den_list[0]
        if lead and lead.is_unit:
            scale = lead.inverse()
            num_list = [c * scale for c in num_list]
            den_list = [c * scale for c in den_list]
        return num_list, den_list

    def series(self, order: int) -> list[MotCoeff]:
        """Coefficients of u**0 .. u**order of the expansion at u = 0."""
        num, den = self.normalized()
        if not den[0]:
            raise MalformedInputError("rational function has a pole at u = 0")
        if not den[0].is_unit:
            raise CoefficientError(f"non-invertible leading coefficient {den[0]}")
        scale = den[0].inverse()
        out: list[MotCoeff] = []
        for k in range(order + 1):
            acc = num[k] if k < len(num) else ZERO
            for i in range(1, min(k, len(den) - 1) + 1):
                acc = acc - den[i] * out[k - i]
            out.append(acc * scale)
        return out

    def coefficient(self, n: int) -> MotCoeff:
        return self.series(n)[n]

    def invert_u(self, s_exponent: int) -> "RatFnU":
        """Substitute u := s**s_exponent / u."""

        def substitute(poly):
            result = SU_FIELD.zero
            for (i, j), c in poly.items():
                result += int(c) * _S ** (i + s_exponent * j) * _U ** (-j)
            return result

        try:
            return RatFnU(substitute(self._frac.numer) / substitute(self._frac.denom))
        except ZeroDivisionError as e:
            raise MalformedInputError(f"substitution produced a pole: {e}") from e

    def to_json(self) -> dict[str, list[dict[str, str]]]:
        num, den = self.normalized()
        return {"num": [c.to_json() for c in num], "den": [c.to_json() for c in den]}

    @classmethod
    def from_json(cls, data: Mapping[str, Sequence[Mapping[str, str]]]) -> Self:
        try:
            num = [MotCoeff.from_json(c) for c in data["num"]]
            den = [MotCoeff.from_json(c) for c in data["den"]]
        except KeyError as e:
            raise MalformedInputError(f"rational function is missing '{e.args[0]}'") from e
        return cls.from_coefficients(num, den)

    def __str__(self) -> str:
        def render(coefficients: list[MotCoeff]) -> str:
            parts = []
            for j, c in enumerate(coefficients):
                if not c:
                    continue
                power = "" if j == 0 else ("*u" if j == 1 else f"*u^{j}")
                parts.append(f"({c}){power}")
            return " + ".join(parts) or "0"

        num, den = self.normalized()
        return f"[{render(num)}] / [{render(den)}]"

    def __repr__(self) -> str:
        return f"RatFnU({self})"


@dataclass(frozen=True)
class CurveData:
    """A smooth projective curve through its genus and zeta numerator."""

    genus: int
    phi: tuple[MotCoeff, ...]

    def __post_init__(self):
        if self.genus < 0:
            raise MalformedInputError(f"genus must be non-negative, got {self.genus}")
        if len(self.phi) != 2 * self.genus + 1:
            raise MalformedInputError(f"numerator of a genus {self.genus} curve must have degree {2 * self.genus}")
        if self.phi[0] != ONE:
            raise MalformedInputError(f"numerator must have constant term 1, got {self.phi[0]}")
        if not self.phi[-1]:
            raise MalformedInputError("numerator has lower degree than 2g")

    @classmethod
    def projective_line(cls) -> Self:
        return cls(genus=0, phi=(ONE,))

    @classmethod
    def serre(cls, genus: int) -> Self:
        """Curve whose numerator is (1 - s*u)**(2g), the Serre measure of a curve with b1 = 2g."""
        n = 2 * genus
        return cls(genus=genus, phi=tuple(MotCoeff({k: (-1) ** k * math.comb(n, k)}) for k in range(n + 1)))

    @classmethod
    def from_strings(cls, genus: int, phi: Sequence[str | int]) -> Self:
        return cls(genus=genus, phi=tuple(MotCoeff.parse(c) for c in phi))


def zeta_from_curve(c: CurveData) -> RatFnU:
    """Phi(u) / ((1 - u)(1 - L u))."""
    return RatFnU.from_coefficients(c.phi, [ONE]) / RatFnU.from_coefficients([ONE, -ONE]) / RatFnU.from_coefficients(
        [ONE, -L]
    )


def zeta_funceq_residual(z: RatFnU, g: int) -> RatFnU:
    """z(1/(L u)) - L**(1-g) u**(2-2g) z(u); zero exactly when the functional equation holds."""
    lhs = z.invert_u(-2)
    rhs = RatFnU.constant(L ** (1 - g)) * RatFnU.u() ** (2 - 2 * g) * z
    residual = lhs - rhs
    logger.debug("zeta functional equation residual for genus %d: %s", g, residual)
    return residual


def symmetric_product_measure(z: RatFnU, n: int) -> MotCoeff:
    if n < 0:
        raise MalformedInputError(f"symmetric power must be non-negative, got {n}")
    return z.coefficient(n)
