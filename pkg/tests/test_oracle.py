"""Tests for the finite-field point counts."""

import pytest

from motivic_series.errors import OracleBoundsError
from motivic_series.oracle import (
    OracleBounds,
    OracleCell,
    PrimeFieldPoly,
    count_cells,
    count_polar_sections,
    count_subbundles,
    count_subsheaves,
    count_symmetric_product,
)


@pytest.mark.parametrize(("q", "a1", "expected"), [(2, 0, 3), (2, -1, 15), (3, 0, 4)])
def test_count_subsheaves(q, a1, expected):
    """The coefficient of the Quot series at a1 is 1 + L + ... + L^(1 - 2 a1)."""
    assert count_subsheaves(q, a1) == expected


@pytest.mark.parametrize(("q", "a1", "expected"), [(2, 0, 3), (2, -1, 6), (3, -1, 24)])
def test_count_subbundles(q, a1, expected):
    assert count_subbundles(q, a1) == expected


@pytest.mark.parametrize(("q", "m", "n", "expected"), [(2, 0, 0, 2), (2, 0, 1, 6), (2, 1, 0, 4)])
def test_count_polar_sections(q, m, n, expected):
    assert count_polar_sections(q, m, n) == expected


@pytest.mark.parametrize(("q", "n", "expected"), [(2, 1, 3), (2, 2, 7), (3, 2, 13)])
def test_count_symmetric_product(q, n, expected):
    assert count_symmetric_product(q, n) == expected


def test_prime_not_enabled():
    with pytest.raises(OracleBoundsError, match="not one of the enabled primes"):
        count_symmetric_product(7, 1)


def test_degree_cap():
    with pytest.raises(OracleBoundsError, match="exceeds the oracle cap"):
        count_symmetric_product(2, 3, OracleBounds(max_degree=2))


def test_cell_cap():
    with pytest.raises(OracleBoundsError, match="enumeration cells"):
        count_polar_sections(2, 1, 1, OracleBounds(max_cells=10))


@pytest.mark.parametrize("call", [lambda: count_subsheaves(2, 1), lambda: count_polar_sections(2, -1, 0)])
def test_negative_degrees_rejected(call):
    with pytest.raises(OracleBoundsError):
        call()


def test_forms_must_be_reduced():
    with pytest.raises(OracleBoundsError, match="not reduced"):
        PrimeFieldPoly(2, (1, 2))


def test_coprimality():
    """Forms are coprime when they share no zero on P^1, the point [1:0] included."""
    x = PrimeFieldPoly(2, (0, 1))
    y = PrimeFieldPoly(2, (1, 0))
    assert not x.coprime_to(PrimeFieldPoly(2, (0, 1, 0)))
    assert not y.coprime_to(PrimeFieldPoly(2, (1, 0, 0)))
    assert x.coprime_to(y)


def test_count_cells_preserves_order():
    cells = [OracleCell("symmetric_product", 3, (2,)), OracleCell("subsheaves", 2, (0,))]
    assert count_cells(cells) == [(cells[0], 13), (cells[1], 3)]


def test_cell_parameters():
    assert OracleCell("polar_sections", 2, (0, 1)).parameters() == {"q": 2, "m": 0, "n": 1}
