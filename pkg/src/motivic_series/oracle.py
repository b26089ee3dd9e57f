"""
Brute-force point counts over small prime fields.

Everything is counted by enumerating binary forms ``sum c_i X**i Y**(n-i)`` over
``F_q``; no closed formula is substituted.  Two forms are coprime when they have no
common zero on the projective line, including the point at infinity ``[1:0]``.
"""

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Self

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd, gf_strip

from .errors import OracleBoundsError
from .workers import parallel_map

logger = logging.getLogger(__name__)

OracleKind = Literal["subsheaves", "subbundles", "polar_sections", "symmetric_product"]


@dataclass(frozen=True)
class OracleBounds:
    primes: tuple[int, ...] = (2, 3, 5)
    max_degree: int = 6
    max_cells: int = 2_000_000

    def check(self, q: int, degree: int, cells: int) -> None:
        if q not in self.primes:
            raise OracleBoundsError(f"q = {q} is not one of the enabled primes {list(self.primes)}")
        if degree > self.max_degree:
            raise OracleBoundsError(f"degree {degree} exceeds the oracle cap {self.max_degree}")
        if cells > self.max_cells:
            raise OracleBoundsError(f"{cells} enumeration cells exceed the cap {self.max_cells}")


DEFAULT_BOUNDS = OracleBounds()


@dataclass(frozen=True)
class PrimeFieldPoly:
    """Binary form of degree ``len(coefficients) - 1``; ``coefficients[i]`` multiplies X**i Y**(n-i)."""

    q: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise OracleBoundsError("a binary form needs at least one coefficient")
        if any(not 0 <= c < self.q for c in self.coefficients):
            raise OracleBoundsError(f"coefficients {self.coefficients} are not reduced mod {self.q}")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coefficients)

    @property
    def is_normalized(self) -> bool:
        """First nonzero coefficient equals 1: one representative per scalar class."""
        return next((c for c in self.coefficients if c), 0) == 1

    def dehomogenized(self) -> list[int]:
        """F(x, 1) as a dense list from the leading coefficient down, stripped."""
        return gf_strip(list(reversed(self.coefficients)))

    def vanishes_at_infinity(self) -> bool:
        return self.coefficients[-1] == 0

    def coprime_to(self, other: "PrimeFieldPoly") -> bool:
        if self.vanishes_at_infinity() and other.vanishes_at_infinity():
            return False
        return gf_gcd(self.dehomogenized(), other.dehomogenized(), self.q, ZZ) == [1]

    @classmethod
    def enumerate(cls, q: int, degree: int) -> Iterator[Self]:
        for coefficients in itertools.product(range(q), repeat=degree + 1):
            yield cls(q, coefficients)


@lru_cache(maxsize=64)
def _forms(q: int, degree: int) -> tuple[PrimeFieldPoly, ...]:
    return tuple(PrimeFieldPoly.enumerate(q, degree))


def _pairs(q: int, n: int, bounds: OracleBounds) -> Iterator[tuple[PrimeFieldPoly, PrimeFieldPoly]]:
    bounds.check(q, n, q ** (2 * (n + 1)))
    forms = _forms(q, n)
    for f in forms:
        for g in forms:
            if not (f.is_zero and g.is_zero):
                yield f, g


def _degree_from_a1(a1: int) -> int:
    if a1 > 0:
        raise OracleBoundsError(f"a1 must be non-positive, got {a1}")
    return -a1


def count_subsheaves(q: int, a1: int, bounds: OracleBounds = DEFAULT_BOUNDS) -> int:
    """Rank-one subsheaves of degree a1 in the trivial rank-two bundle: nonzero pairs of forms mod scalars."""
    total = sum(1 for _ in _pairs(q, _degree_from_a1(a1), bounds))
    return total // (q - 1)


def count_subbundles(q: int, a1: int, bounds: OracleBounds = DEFAULT_BOUNDS) -> int:
    """Same as ``count_subsheaves`` restricted to coprime pairs (saturated subsheaves)."""
    total = sum(1 for f, g in _pairs(q, _degree_from_a1(a1), bounds) if f.coprime_to(g))
    return total // (q - 1)


def count_polar_sections(q: int, m: int, n: int, bounds: OracleBounds = DEFAULT_BOUNDS) -> int:
    """
    Sections of O(m) with polar divisor of degree exactly n, summed over divisors.

    A divisor is a normalized form G of degree n; a section with that polar divisor is
    a form F of degree m + n with no zero in common with G.
    """
    if m < 0:
        raise OracleBoundsError(f"m must be non-negative, got {m}")
    if n < 0:
        raise OracleBoundsError(f"n must be non-negative, got {n}")
    bounds.check(q, m + n, q ** (m + 2 * n + 2))
    divisors = [g for g in _forms(q, n) if g.is_normalized]
    sections = _forms(q, m + n)
    return sum(1 for g in divisors for f in sections if f.coprime_to(g))


def count_symmetric_product(q: int, n: int, bounds: OracleBounds = DEFAULT_BOUNDS) -> int:
    """Effective divisors of degree n on the projective line: normalized forms of degree n."""
    if n < 0:
        raise OracleBoundsError(f"n must be non-negative, got {n}")
    bounds.check(q, n, q ** (n + 1))
    return sum(1 for g in _forms(q, n) if g.is_normalized)


@dataclass(frozen=True)
class OracleCell:
    kind: OracleKind
    q: int
    args: tuple[int, ...]

    def parameters(self) -> dict[str, int]:
        names = {
            "subsheaves": ("a1",),
            "subbundles": ("a1",),
            "polar_sections": ("m", "n"),
            "symmetric_product": ("n",),
        }[self.kind]
        return {"q": self.q, **dict(zip(names, self.args, strict=True))}


_COUNTERS = {
    "subsheaves": count_subsheaves,
    "subbundles": count_subbundles,
    "polar_sections": count_polar_sections,
    "symmetric_product": count_symmetric_product,
}


def _cell_worker(payload: tuple[OracleCell, OracleBounds]) -> int:
    cell, bounds = payload
    return _COUNTERS[cell.kind](cell.q, *cell.args, bounds=bounds)


def count_cells(
    cells: Sequence[OracleCell], bounds: OracleBounds = DEFAULT_BOUNDS, workers: int = 1
) -> list[tuple[OracleCell, int]]:
    """Count every cell, possibly in parallel; results come back in the order of ``cells``."""
    counts = parallel_map(_cell_worker, [(cell, bounds) for cell in cells], workers)
    logger.debug("counted %d oracle cells", len(cells))
    return list(zip(cells, counts, strict=True))
