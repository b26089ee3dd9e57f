"""Tests for Eisenstein series, Hall polynomials, theta and blowup functions and characters."""

import pytest

from motivic_series.affine import AffCoweight, TorsorLabel, identity, parse_weyl_element
from motivic_series.coeff import ONE, ZERO, L, SpecMode
from motivic_series.conventions import HALL_ACTIONS, CharacterCombination, FunceqVariant
from motivic_series.eisenstein import (
    EisParams,
    K_series,
    blowup_F,
    check_weyl_kac_combinations,
    compare_hall_forms,
    coroot_scale,
    eisenstein_E,
    freudenthal_character,
    funceq_residual,
    funceq_residual_for,
    hall_P,
    numerator_N,
    orbit_sum,
    psi_line,
    resolve_character_combination,
    resolve_funceq_convention,
    resolve_hall_action,
    term_Ew,
    theta_full,
    theta_zero,
    weyl_kac_character,
)
from motivic_series.errors import MalformedInputError, RootSystemError, WindowError
from motivic_series.rootsys import build_root_system
from motivic_series.series import LatticeSeries, q_layer

TATE_ONE = SpecMode(kind="tate", value=1)


@pytest.fixture(scope="module")
def a1():
    return build_root_system("A", 1)


@pytest.fixture(scope="module")
def params(a1):
    """A1 with the trivial level-one label, truncated at grade 4."""
    return EisParams(a1, TorsorLabel.parse(a1, "0;0;-1"), 4)


@pytest.fixture(scope="module")
def eisenstein(params):
    return eisenstein_E(params)


def x(text: str) -> AffCoweight:
    return AffCoweight.parse(text, 1)


class TestPsiLine:
    def test_trivial_bundle(self):
        series = psi_line(0).series(2)
        assert series == [L, L**3 - L, L**5 - L**3]

    def test_constant_term_tracks_degree(self):
        """The constant term is L^(m+1) and the u^n coefficient is L^(m+2n-1)(L^2 - 1)."""
        series = psi_line(2).series(2)
        assert series[0] == L**3
        assert series[2] == L**5 * (L**2 - 1)

    def test_point_counts(self):
        assert [c.evaluate_tate(2) for c in psi_line(0).series(2)] == [2, 6, 24]

    def test_negative_degree(self):
        with pytest.raises(MalformedInputError):
            psi_line(-1)


class TestEisenstein:
    def test_constant_layer(self, eisenstein):
        layer = q_layer(eisenstein, 0)
        assert layer.coefficient(x("0;0;-1")) == 1 + L
        assert layer.coefficient(x("1;0;-1")) == L**3 - L
        assert layer.coefficient(x("2;0;-1")) == L**5 - L**3

    def test_second_layer_uses_normalized_argument(self, eisenstein):
        """The t_1 cell expands psi_0 at L**2 z**-1 q**2, a grade-three coroot."""
        assert eisenstein.coefficient(x("-1;1;-1")) == L**2 + L**3
        assert eisenstein.coefficient(x("-2;3;-1")) == L**7 - L**5

    def test_identity_cell_is_psi_free(self, params):
        assert term_Ew(params, identity(params.rs)) == LatticeSeries.monomial(params.rs, x("0;0;-1"), 4)

    def test_specializes_to_orbit_sum(self, params, eisenstein):
        """Every psi factor is 1 at L = 1."""
        assert eisenstein.specialize(TATE_ONE).first_difference(orbit_sum(params.rs, params.b.b, 4)) is None

    def test_workers_give_the_same_series(self, params, eisenstein):
        parallel = EisParams(params.rs, params.b, params.gmax, workers=2)
        assert eisenstein_E(parallel) == eisenstein

    def test_window_below_label(self, a1):
        with pytest.raises(WindowError):
            EisParams(a1, TorsorLabel.parse(a1, "0;0;-1"), -1)

    def test_cell_above_cutoff(self, params):
        with pytest.raises(WindowError, match="above the cutoff"):
            term_Ew(params, parse_weyl_element(params.rs, "s0s1s0s1s0"))


class TestHall:
    def test_closed_form_is_k_times_eisenstein(self, params, eisenstein):
        closed = hall_P(params, "closed")
        assert closed.first_difference(K_series(params.rs, L, 4) * eisenstein) is None

    def test_forms_agree_at_l_one(self, params):
        assert all(compare_hall_forms(params, TATE_ONE).values())

    def test_definition_matches_closed_form_at_generic_l(self, params):
        assert compare_hall_forms(params) == {"twisted": True, "twisted_inverse": False, "plain": False}

    def test_definition_matches_closed_form_a2(self):
        a2 = build_root_system("A", 2)
        p = EisParams(a2, TorsorLabel.parse(a2, "0;0;-1"), 4)
        assert compare_hall_forms(p)["twisted"]

    def test_resolve_hall_action(self, params):
        chosen, matching, at_one = resolve_hall_action(params)
        assert chosen == "twisted"
        assert matching == ["twisted"]
        assert at_one == list(HALL_ACTIONS)

    def test_coroot_scale(self, a1):
        assert coroot_scale(a1, x("1;0;0")) == ONE
        assert coroot_scale(a1, x("-1;1;0")) == ONE
        assert coroot_scale(a1, x("1;1;0")) == L**2
        assert coroot_scale(a1, x("1;1;0"), step=-1) == L**-2

    def test_unknown_form(self, params):
        with pytest.raises(MalformedInputError):
            hall_P(params, "sideways")

    def test_k_series_constant_term(self, a1):
        k = K_series(a1, L, 3)
        assert k.coefficient(AffCoweight.zero(1)) == ONE
        assert k.coefficient(x("1;0;0")) == 1 - L


class TestFunctionalEquation:
    def test_identity_has_zero_residual_for_every_variant(self, params, eisenstein):
        n = numerator_N(params, eisenstein)
        report = funceq_residual(params, n, identity(params.rs))
        assert report.vanishes
        assert sorted(report.vanishing_variants) == sorted(v.key for v in FunceqVariant.all())

    def test_simple_reflections_at_grade_eight(self, a1):
        p = EisParams(a1, TorsorLabel.parse(a1, "0;0;-1"), 8)
        n = numerator_N(p)
        elements = [parse_weyl_element(a1, "s0"), parse_weyl_element(a1, "s1")]
        variant, keys = resolve_funceq_convention(p, n, elements)
        assert variant == FunceqVariant()
        assert variant.key in keys
        for w in elements:
            report = funceq_residual(p, n, w)
            assert report.vanishes
            assert report.overlap_size > 0
            assert "w/+1/-1" in report.vanishing_variants

    def test_reflection_with_opposite_twist_fails(self, a1):
        p = EisParams(a1, TorsorLabel.parse(a1, "0;0;-1"), 6)
        s1 = parse_weyl_element(a1, "s1")
        residual, _ = funceq_residual_for(a1, numerator_N(p), s1, FunceqVariant(twist_sign=-1))
        assert residual

    @pytest.mark.parametrize("w", ["s0", "s1", "s2"])
    def test_simple_reflections_a2(self, w):
        a2 = build_root_system("A", 2)
        p = EisParams(a2, TorsorLabel.parse(a2, "0;0;-1"), 5)
        residual, overlap = funceq_residual_for(a2, numerator_N(p), parse_weyl_element(a2, w), FunceqVariant())
        assert not residual
        assert overlap > 0

    def test_numerator_first_q_layer(self, params):
        """(1 + L) L**3 (1 - L) (1 - L z), antisymmetric under the finite reflection."""
        layer = q_layer(numerator_N(params), 1)
        assert layer.coefficient(x("0;1;-1")) == L**3 - L**5
        assert layer.coefficient(x("1;1;-1")) == L**6 - L**4
        assert layer.coefficient(x("-1;1;-1")) == ZERO
        assert layer.coefficient(x("2;1;-1")) == ZERO


class TestTheta:
    def test_level_one(self, a1):
        theta = theta_zero(a1, 1, order=9)
        expected = [ZERO] * 10
        for n in (1, 2, 3):
            expected[n * n] = ONE * 2
        expected[0] = ONE
        assert theta.coefficients() == expected

    def test_level_two_exponents(self, a1):
        theta = theta_zero(a1, 2, order=8)
        assert [n for n, c in enumerate(theta.coefficients()) if c] == [0, 2, 8]

    def test_level_must_be_positive(self, a1):
        with pytest.raises(MalformedInputError, match="negative index required"):
            theta_zero(a1, 0)

    def test_full_theta_projects_to_theta_zero(self, a1):
        """Forgetting z turns the z-dependent theta function into the q-series."""
        full = theta_full(a1, 1, 6)
        counts = {}
        for y, c in full.items():
            counts[y.central] = counts.get(y.central, 0) + c.euler()
        assert counts[0] == 1
        assert counts[1] == 2


class TestBlowup:
    @pytest.fixture
    def blowup(self, a1):
        return blowup_F(a1, TorsorLabel.parse(a1, "0;0;-1"), 3)

    def test_coefficients(self, blowup):
        assert blowup.coefficients() == [ONE, 2 * L**2, 2 * L**4 - 2 * L**2, 2 * L**6 - 2 * L**2]

    def test_specializes_to_theta(self, a1, blowup):
        assert blowup.specialize(TATE_ONE) == theta_zero(a1, 1, order=3)

    def test_point_counts_are_nonnegative(self, blowup):
        assert [c.evaluate_tate(2) for c in blowup.coefficients()] == [1, 8, 24, 120]


class TestCharacters:
    def test_trivial_module(self, a1):
        character = weyl_kac_character(a1, AffCoweight.zero(1), 4)
        assert character == LatticeSeries.one(a1, 4)

    def test_freudenthal_matches_weyl_kac(self, a1):
        lam = x("0;0;1")
        assert weyl_kac_character(a1, lam, 4).first_difference(freudenthal_character(a1, lam, 4)) is None

    def test_every_combination_is_reported(self, params):
        results = check_weyl_kac_combinations(params)
        assert [r.combination for r in results] == list(CharacterCombination.all())
        chosen, keys = resolve_character_combination(params)
        assert keys == [r.combination.key for r in results if r.passed] == ["inverse/real"]
        assert chosen == CharacterCombination(rendering="inverse", imaginary=False)

    def test_not_dominant(self, a1):
        with pytest.raises(MalformedInputError, match="not dominant"):
            weyl_kac_character(a1, x("-1;0;1"), 4)

    def test_needs_simply_laced(self):
        with pytest.raises(RootSystemError, match="simply-laced"):
            weyl_kac_character(build_root_system("B", 2), AffCoweight.zero(2), 2)
