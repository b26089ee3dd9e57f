"""Tests for finite root systems."""

import pytest

from motivic_series.errors import RootSystemError
from motivic_series.rootsys import build_root_system, cartan_matrix, kappa_index, parse_root_system_label


@pytest.mark.parametrize(
    ("label", "roots", "weyl_order", "coxeter", "dual_coxeter"),
    [
        ("A1", 2, 2, 2, 2),
        ("A2", 6, 6, 3, 3),
        ("A3", 12, 24, 4, 4),
        ("B2", 8, 8, 4, 3),
        ("C3", 18, 48, 6, 4),
        ("G2", 12, 12, 6, 4),
        ("D4", 24, 192, 6, 6),
    ],
)
def test_classical_invariants(label, roots, weyl_order, coxeter, dual_coxeter):
    """Root counts, Weyl group orders and Coxeter numbers match the tables."""
    rs = parse_root_system_label(label)
    assert len(rs.roots) == roots
    assert len(rs.weyl) == weyl_order
    assert rs.coxeter == coxeter
    assert rs.dual_coxeter == dual_coxeter


def test_a1_form_and_highest_root():
    rs = build_root_system("A", 1)
    assert rs.psi == ((-2,),)
    assert rs.theta.simple == (1,)
    assert rs.marks == (1,)
    assert rs.simply_laced


def test_form_is_normalized_on_highest_coroot():
    for label in ("A2", "B2", "G2", "C3"):
        rs = parse_root_system_label(label)
        assert rs.psi_form(rs.theta.coroot, rs.theta.coroot) == -2


def test_simple_reflections_generate_weyl_group():
    rs = parse_root_system_label("A2")
    longest = rs.weyl_from_word([0, 1, 0])
    assert longest == rs.weyl_from_word([1, 0, 1])
    assert rs.inversion_count(longest) == len(rs.positive_roots)
    assert rs.weyl_mul(longest, rs.weyl_inverse(longest)) == rs.identity


def test_weyl_word_out_of_range():
    rs = parse_root_system_label("A2")
    with pytest.raises(RootSystemError, match="out of range"):
        rs.weyl_from_word([2])


@pytest.mark.parametrize("label", ["A0", "B1", "D3", "E5", "F3", "G3", "X2", "A", "2A"])
def test_invalid_labels(label):
    with pytest.raises(RootSystemError):
        parse_root_system_label(label)


def test_rank_cap():
    with pytest.raises(RootSystemError, match="exceeds the configured cap"):
        build_root_system("A", 5, rank_cap=4)
    assert build_root_system("A", 5, rank_cap=5).rank == 5


def test_cartan_matrix_b2_is_not_symmetric():
    assert cartan_matrix("B", 2) == [[2, -1], [-2, 2]]


@pytest.mark.parametrize(
    ("weights", "kappa"),
    [([(1,), (-1,)], 1), ([(2,), (0,), (-2,)], 4)],
)
def test_kappa_index_a1(weights, kappa):
    """Standard representation has index 1 and the adjoint has index 2 h_dual."""
    rs = build_root_system("A", 1)
    assert kappa_index(rs, weights) == kappa


def test_kappa_index_rejects_unstable_multiset():
    rs = build_root_system("A", 1)
    with pytest.raises(RootSystemError, match="not proportional"):
        kappa_index(rs, [(1,)])
    with pytest.raises(RootSystemError, match="empty"):
        kappa_index(rs, [])
