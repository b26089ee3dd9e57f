"""
Eisenstein series of Kac-Moody torsors on the projective line and their companions.

The Eisenstein series is a sum over the affine Weyl group of Bruhat-cell terms.  Each
term is a monomial ``t**w(b)`` times a product of line-bundle series ``psi``, one per
inversion of ``w``.  The affine Hall polynomial, the Weyl-Kac denominator and
numerator, theta functions, blowup functions and the Weyl-Kac character live here
too, together with the functional-equation checker and the convention resolvers.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .affine import (
    AffCoweight,
    AffWeylElt,
    TorsorLabel,
    act_coweight,
    enumerate_weyl_by_grade,
    enumerate_weyl_by_length,
    eta,
    grade,
    inverse,
    inversion_set,
    lambda_weight,
    length,
    positive_coroots,
    quadratic_ball,
    simple_affine_roots,
)
from .coeff import L, ONE, ZERO, CurveData, MotCoeff, RatFnU, SpecMode
from .conventions import CharacterCombination, FunceqVariant, HallAction
from .errors import MalformedInputError, RootSystemError, WindowError
from .rootsys import DEFAULT_RANK_CAP, RootSystem, dot, mat_vec
from .series import (
    LatticeSeries,
    QSeries,
    Window,
    expand_unit_inverse,
    geometric_factor,
    mul,
    sum_series,
    weyl_twist_substitute,
)
from .workers import cached_root_system, parallel_map

logger = logging.getLogger(__name__)

HallForm = Literal["definition", "closed"]


@dataclass(frozen=True)
class EisParams:
    rs: RootSystem
    b: TorsorLabel
    gmax: int
    curve: CurveData = field(default_factory=CurveData.projective_line)
    workers: int = 1

    def __post_init__(self):
        if self.gmax < self.gmin:
            raise WindowError(f"grade cutoff {self.gmax} lies below grade({self.b}) = {self.gmin}")

    @property
    def gmin(self) -> int:
        """An antidominant label has the smallest grade in its orbit."""
        return grade(self.rs, self.b.b)

    @property
    def window(self) -> Window:
        return Window(self.gmin, self.gmax)


def psi_line(m: int) -> RatFnU:
    """L**(m+1) (1 - u) / (1 - L**2 u), the generating series of sections with prescribed polar divisor."""
    if m < 0:
        raise MalformedInputError(f"line bundle degree must be non-negative, got {m}")
    top = L ** (m + 1)
    return RatFnU.from_coefficients([top, -top], [ONE, -(L**2)])


def expand_at(
    rs: RootSystem, f: RatFnU, mu: AffCoweight, gmax: int, scale: MotCoeff | int = ONE
) -> LatticeSeries:
    """Substitute u := scale * t**mu into the expansion of f at u = 0."""
    step = grade(rs, mu)
    if step <= 0:
        raise WindowError(f"non-expandable direction {mu} of grade {step}")
    room = max(gmax, 0)
    scale = MotCoeff.coerce(scale)
    terms = {}
    power = ONE
    for k, c in enumerate(f.series(room // step)):
        terms[mu.scaled(k)] = c * power
        power = power * scale
    return LatticeSeries(rs, Window(0, room), terms)


def coroot_scale(rs: RootSystem, gamma: AffCoweight, step: int = 1) -> MotCoeff:
    """
    L**(step * (grade(gamma) - 1)), the scalar in front of ``t**gamma`` in its normalized variable.

    The twisted action permutes the variables ``L**(grade(gamma) - 1) t**gamma`` over
    all real coroots, the negative ones included; on a simple coroot the scalar is 1.
    """
    return MotCoeff.tate(step * (grade(rs, gamma) - 1))


def denominator_factor(rs: RootSystem, phi: RatFnU, gamma: AffCoweight, gmax: int) -> LatticeSeries:
    """(1 - L**2 u) Phi(u) at the normalized variable u of the positive coroot ``gamma``."""
    c = coroot_scale(rs, gamma)
    linear = LatticeSeries(rs, Window(0, max(gmax, 0)), {AffCoweight.zero(rs.rank): ONE, gamma: -(L**2) * c})
    return mul(linear, expand_at(rs, phi, gamma, gmax, c))


def term_Ew(p: EisParams, w: AffWeylElt) -> LatticeSeries:
    """
    Bruhat-cell contribution of ``w``.

    ``t**w(b)`` times, for each inversion ``alpha`` of ``w``, the series
    ``psi_line(-<alpha, b>)`` evaluated at the normalized variable of the positive
    coroot ``gamma = -w(alpha_check)``, that is at ``L**(grade(gamma) - 1) t**gamma``.
    A reduced word builds the cell one simple reflection at a time; the pole degree
    spent at one step raises the line bundle degree of the later steps, which is
    where the power of ``L`` comes from.  For a simple reflection the argument is the
    simple coroot itself.
    """
    rs = p.rs
    wb = act_coweight(rs, w, p.b.b)
    g0 = grade(rs, wb)
    if g0 > p.gmax:
        raise WindowError(f"cell of {w} starts at grade {g0}, above the cutoff {p.gmax}")
    result = LatticeSeries.monomial(rs, wb, p.gmax)
    for alpha in inversion_set(rs, w):
        direction = -act_coweight(rs, w, alpha.coroot)
        psi = psi_line(-alpha.pair(p.b.b))
        result = mul(result, expand_at(rs, psi, direction, p.gmax - g0, coroot_scale(rs, direction)))
    return result


def _term_worker(payload: dict) -> dict:
    rs = cached_root_system(payload["label"], payload["rank_cap"])
    b = AffCoweight(tuple(payload["b"][0]), payload["b"][1], payload["b"][2])
    w = AffWeylElt(tuple(payload["trans"]), rs.weyl_from_word(payload["word"]))
    p = EisParams(rs, TorsorLabel(b), payload["gmax"])
    return term_Ew(p, w).to_json()


def eisenstein_E(p: EisParams) -> LatticeSeries:
    """Sum of all Bruhat-cell terms with grade(w(b)) <= gmax."""
    rs = p.rs
    elements = enumerate_weyl_by_grade(rs, p.b.b, p.gmax)
    logger.info("summing %d Bruhat cells for b = %s up to grade %d", len(elements), p.b, p.gmax)
    if p.workers > 1:
        payloads = [
            {
                "label": rs.label,
                "rank_cap": max(rs.rank, DEFAULT_RANK_CAP),
                "b": [list(p.b.b.finite), p.b.b.central, p.b.b.loop],
                "trans": list(w.trans),
                "word": list(w.fin.word),
                "gmax": p.gmax,
            }
            for w in elements
        ]
        parts = [LatticeSeries.from_json(rs, data) for data in parallel_map(_term_worker, payloads, p.workers)]
    else:
        parts = [term_Ew(p, w) for w in elements]
    return sum_series(rs, p.window, parts)


_ACTION_STEP: dict[HallAction, int] = {"twisted": 1, "twisted_inverse": -1, "plain": 0}


def K_series(rs: RootSystem, l: MotCoeff | int = L, gmax: int = 0, step: int = 1) -> LatticeSeries:
    """
    Product of (1 - l u) / (1 - u) over positive real coroots a of grade <= gmax.

    ``u = L**(step * (grade(a) - 1)) t**a``.  ``step = 1`` is the twisted action,
    ``-1`` its inverse and ``0`` leaves ``u = t**a``.
    """
    if gmax < 0:
        raise WindowError(f"K is expanded on grades >= 0, got cutoff {gmax}")
    l = MotCoeff.coerce(l)
    result = LatticeSeries.one(rs, gmax)
    for alpha in positive_coroots(rs, gmax):
        c = coroot_scale(rs, alpha.coroot, step)
        result = mul(result, geometric_factor(rs, l * c, c, alpha.coroot, gmax))
    return result


def _closed_summand(p: EisParams, w: AffWeylElt) -> LatticeSeries:
    rs = p.rs
    wb = act_coweight(rs, w, p.b.b)
    g0 = grade(rs, wb)
    inversions = inversion_set(rs, w)
    scale = L ** (len(inversions) + g0 - p.gmin)
    result = LatticeSeries.monomial(rs, wb, p.gmax, scale)
    for alpha in inversions:
        direction = -act_coweight(rs, w, alpha.coroot)
        c = coroot_scale(rs, direction)
        result = mul(result, geometric_factor(rs, c, L**2 * c, direction, p.gmax - g0))
    return result


def _definition_summand(p: EisParams, w: AffWeylElt, action: HallAction, l: MotCoeff) -> LatticeSeries:
    """
    Image of t**b K(t; l) under w, computed factor by factor.

    The action sends ``t**b`` to ``L**(step * (grade(w b) - grade(b))) t**(w b)`` and
    permutes the normalized variables of ``K``.  A factor whose coroot is sent to a
    negative coroot ``-gamma`` is rewritten as ``(l - c t**gamma) / (1 - c t**gamma)``
    with ``c = L**(step * (grade(gamma) + 1))``, which has constant term ``l`` whatever
    the grade of ``gamma``.
    """
    rs = p.rs
    step = _ACTION_STEP[action]
    wb = act_coweight(rs, w, p.b.b)
    room = p.gmax - grade(rs, wb)
    zero = AffCoweight.zero(rs.rank)
    result = LatticeSeries.monomial(rs, wb, p.gmax, MotCoeff.tate(step * (grade(rs, wb) - p.gmin)))
    flipped = [alpha.coroot for alpha in inversion_set(rs, inverse(rs, w))]
    for gamma in flipped:
        c = coroot_scale(rs, gamma, step) * MotCoeff.tate(2 * step)
        linear = LatticeSeries(rs, Window(0, room), {zero: l, gamma: -c})
        if grade(rs, gamma) <= room:
            linear = mul(linear, expand_unit_inverse(rs, c, gamma, room))
        result = mul(result, linear)
    skip = set(flipped)
    for alpha in positive_coroots(rs, room):
        gamma = alpha.coroot
        if gamma in skip:
            continue
        c = coroot_scale(rs, gamma, step)
        result = mul(result, geometric_factor(rs, l * c, c, gamma, room))
    return result


def hall_P(
    p: EisParams, form: HallForm = "closed", action: HallAction = "twisted", l: MotCoeff | int = L
) -> LatticeSeries:
    """
    Affine Hall polynomial of ``b`` truncated at ``p.gmax``.

    ``definition`` symmetrizes ``t**b K(t; l)`` over the affine Weyl group under the
    chosen action, with ``K`` in the variables that action permutes; ``closed`` is the
    twisted ``K(t; l)`` times the sum of the closed-form cell summands, whose product
    with ``K**-1`` is the Eisenstein series when ``l = L``.  The two forms agree under
    the twisted action at ``l = L``.
    """
    rs = p.rs
    l = MotCoeff.coerce(l)
    elements = enumerate_weyl_by_grade(rs, p.b.b, p.gmax)
    if form == "closed":
        total = sum_series(rs, p.window, (_closed_summand(p, w) for w in elements))
        return mul(K_series(rs, l, p.gmax - p.gmin), total)
    if form == "definition":
        return sum_series(rs, p.window, (_definition_summand(p, w, action, l) for w in elements))
    raise MalformedInputError(f"unknown Hall polynomial form '{form}'")


def compare_hall_forms(p: EisParams, mode: SpecMode | None = None) -> dict[str, bool]:
    """For each action, whether the definition agrees with the closed form (after ``mode``, if given)."""
    closed = hall_P(p, "closed")
    if mode is not None:
        closed = closed.specialize(mode)
    agreement = {}
    for action in ("twisted", "twisted_inverse", "plain"):
        definition = hall_P(p, "definition", action)
        if mode is not None:
            definition = definition.specialize(mode)
        difference = definition.first_difference(closed)
        agreement[action] = difference is None
        if difference is not None:
            logger.debug("hall forms differ under %s action at %s: %s vs %s", action, *difference)
    return agreement


def orbit_sum(rs: RootSystem, b: AffCoweight, gmax: int) -> LatticeSeries:
    """Sum of t**w(b) over all w with grade(w(b)) <= gmax, counted with stabilizer multiplicity."""
    terms: dict[AffCoweight, MotCoeff] = {}
    for w in enumerate_weyl_by_grade(rs, b, gmax):
        x = act_coweight(rs, w, b)
        terms[x] = terms.get(x, ZERO) + ONE
    return LatticeSeries(rs, Window(min(grade(rs, b), gmax), gmax), terms)


def denominator_D(rs: RootSystem, curve: CurveData, gmax: int) -> LatticeSeries:
    """
    Product of (1 - L**2 u) Phi(u) over positive real coroots a of grade <= gmax.

    ``u = L**(grade(a) - 1) t**a``; the twisted action carries the product to itself
    up to the factors of the coroots it inverts.
    """
    phi = RatFnU.from_coefficients(curve.phi)
    result = LatticeSeries.one(rs, gmax)
    for alpha in positive_coroots(rs, gmax):
        result = mul(result, denominator_factor(rs, phi, alpha.coroot, gmax))
    return result


def numerator_N(p: EisParams, e: LatticeSeries | None = None) -> LatticeSeries:
    if e is None:
        e = eisenstein_E(p)
    return mul(e, denominator_D(p.rs, p.curve, p.gmax - p.gmin))


@dataclass
class FunceqReport:
    """Residual of the numerator functional equation for one element and one convention."""

    element: str
    variant: FunceqVariant
    residual: LatticeSeries
    overlap_size: int
    vanishing_variants: list[str] = field(default_factory=list)

    @property
    def vanishes(self) -> bool:
        return not self.residual


def _funceq_rhs(
    rs: RootSystem, n: LatticeSeries, w: AffWeylElt, variant: FunceqVariant, genus: int
) -> tuple[dict[AffCoweight, MotCoeff], AffWeylElt, AffCoweight]:
    u = w if variant.substitution == "w" else inverse(rs, w)
    u_inv = inverse(rs, u)
    y = eta(rs, w).scaled(variant.prefactor_sign * (1 + 2 * genus))
    prefactor = L ** grade(rs, y) * (-1) ** length(rs, w)
    substituted = weyl_twist_substitute(n, u_inv, lambda_weight(rs, u_inv).scaled(-variant.twist_sign))
    terms = {x + y: prefactor * c for x, c in substituted.items()}
    return terms, u_inv, y


def funceq_residual_for(
    rs: RootSystem, n: LatticeSeries, w: AffWeylElt, variant: FunceqVariant, genus: int = 0
) -> tuple[LatticeSeries, int]:
    """
    ``N - RHS`` restricted to the monomials where both sides are exact.

    A monomial ``t**x`` is compared when ``x`` lies in the window of ``N`` and so does
    the exponent of ``N`` it comes from on the right-hand side.
    """
    rhs, u_inv, y = _funceq_rhs(rs, n, w, variant, genus)
    window = n.window

    def exact(x: AffCoweight) -> bool:
        return window.contains(grade(rs, x)) and window.contains(grade(rs, act_coweight(rs, u_inv, x - y)))

    candidates = {x for x in n.exponents() if exact(x)} | {x for x in rhs if exact(x)}
    if not candidates:
        raise WindowError(f"empty overlap window for {w} on [{window.gmin}, {window.gmax}]")
    terms = {x: n.coefficient(x) - rhs.get(x, ZERO) for x in candidates}
    return LatticeSeries(rs, window, terms), len(candidates)


def funceq_residual(
    p: EisParams, n: LatticeSeries, w: AffWeylElt, variant: FunceqVariant | None = None
) -> FunceqReport:
    """Residual under ``variant`` (the resolved default when omitted) plus every variant that vanishes."""
    variant = variant or FunceqVariant()
    genus = p.curve.genus
    residual, overlap = funceq_residual_for(p.rs, n, w, variant, genus)
    vanishing = [v.key for v in FunceqVariant.all() if not funceq_residual_for(p.rs, n, w, v, genus)[0]]
    logger.info("functional equation for %s: %d monomials compared, vanishing variants %s", w, overlap, vanishing)
    return FunceqReport(str(w), variant, residual, overlap, vanishing)


def resolve_funceq_convention(
    p: EisParams, n: LatticeSeries, elements: Sequence[AffWeylElt]
) -> tuple[FunceqVariant | None, list[str]]:
    """Variants whose residual vanishes for every element; the default is preferred when it is among them."""
    passing = [
        v
        for v in FunceqVariant.all()
        if all(not funceq_residual_for(p.rs, n, w, v, p.curve.genus)[0] for w in elements)
    ]
    keys = [v.key for v in passing]
    if not passing:
        return None, keys
    return (FunceqVariant() if FunceqVariant() in passing else passing[0]), keys


def _theta_exponent(rs: RootSystem, d: int, psi_f: Sequence[int], a: Sequence[int]) -> int:
    return d * (-rs.psi_form(a, a) // 2) + dot(psi_f, a)


def _lattice_points(rs: RootSystem, d: int, f: Sequence[int], order: int) -> list[tuple[tuple[int, ...], int]]:
    if d <= 0:
        raise MalformedInputError(f"negative index required: d must be positive, got {d}")
    if len(f) != rs.rank:
        raise MalformedInputError(f"characteristic vector needs {rs.rank} coordinates")
    psi_f = mat_vec(rs.psi, f)
    points = []
    for a in quadratic_ball(rs, d, psi_f, order):
        e = _theta_exponent(rs, d, psi_f, a)
        if e < 0:
            raise WindowError(f"theta exponent {e} at {a} is negative; f = {tuple(f)} is outside the fundamental range")
        points.append((a, e))
    points.sort(key=lambda item: (item[1], item[0]))
    return points


def theta_zero(rs: RootSystem, d: int, f: Sequence[int] | None = None, order: int = 10) -> QSeries:
    """Sum over the lattice of q**(Psi(a, f) - d Psi(a, a)/2); the central component of a label plays no role."""
    f = tuple(f) if f is not None else (0,) * rs.rank
    coefficients = [0] * (order + 1)
    for _, e in _lattice_points(rs, d, f, order):
        coefficients[e] += 1
    return QSeries(order, coefficients)


def theta_full(rs: RootSystem, d: int, gmax: int, f: Sequence[int] | None = None) -> LatticeSeries:
    """Theta function with its z-dependence: monomials (a, e(a), -d), truncated by grade."""
    f = tuple(f) if f is not None else (0,) * rs.rank
    if d <= 0:
        raise MalformedInputError(f"negative index required: d must be positive, got {d}")
    h_dual = rs.dual_coxeter
    psi_f = mat_vec(rs.psi, f)
    linear = [1 + h_dual * x for x in psi_f]
    terms = {}
    for a in quadratic_ball(rs, h_dual * d, linear, gmax):
        x = AffCoweight(a, _theta_exponent(rs, d, psi_f, a), -d)
        terms[x] = ONE
    low = min((grade(rs, x) for x in terms), default=gmax)
    return LatticeSeries(rs, Window(min(low, gmax), gmax), terms)


def blowup_F(rs: RootSystem, label: TorsorLabel, order: int) -> QSeries:
    """
    Blowup function of the torsor labelled ``b = (f, m, -d)``.

    Each lattice point ``a`` contributes ``q**e(a)`` times, for every root ``alpha``
    and ``1 <= n <= <alpha, a>``, the factor
    ``L**(-<alpha, f> + m n + 1) (1 - q**n) / (1 - L**2 q**n)``.
    """
    b = label.b
    f, m, d = b.finite, b.central, label.d
    total = QSeries(order)
    points = _lattice_points(rs, d, f, order)
    for a, e in points:
        term = QSeries.monomial(order, e)
        for alpha in rs.roots:
            for n in range(1, alpha.pair(a) + 1):
                term = term * L ** (-alpha.pair(f) + m * n + 1)
                # (1 - q**n)/(1 - L**2 q**n) is 1 to the precision left after q**e
                if n <= order - e:
                    term = term * QSeries.geometric_factor(order, ONE, L**2, n)
        total = total + term
    logger.debug("blowup function of %s: %d lattice points up to q^%d", label, len(points), order)
    return total


def _check_dominant(rs: RootSystem, lam: AffCoweight) -> None:
    if not rs.simply_laced:
        raise RootSystemError(f"Weyl-Kac character needs a simply-laced type, got {rs.label}")
    bad = [str(alpha) for alpha in simple_affine_roots(rs) if alpha.pair(lam) < 0]
    if bad or lam.loop < 0:
        raise MalformedInputError(f"{lam} is not dominant (negative on {', '.join(bad) or 'K'})")


def _character_elements(rs: RootSystem, b: AffCoweight, gmax: int) -> list[AffWeylElt]:
    if b.loop < 0:
        return enumerate_weyl_by_grade(rs, b, gmax)
    if any(b.finite):
        raise MalformedInputError(f"a level-zero dominant weight must have zero finite part, got {-b}")
    # at level zero every numerator exponent has grade at least length(w)
    return [w for w, _ in enumerate_weyl_by_length(rs, max(gmax - grade(rs, b), 0))]


def character_denominator_inverse(rs: RootSystem, gmax: int, imaginary: bool = True) -> LatticeSeries:
    """Expanded inverse of the product of (1 - t**a) over positive coroots up to grade gmax."""
    result = LatticeSeries.one(rs, gmax)
    for alpha in positive_coroots(rs, gmax):
        result = mul(result, expand_unit_inverse(rs, ONE, alpha.coroot, gmax))
    if imaginary:
        n = 1
        while rs.dual_coxeter * n <= gmax:
            factor = expand_unit_inverse(rs, ONE, AffCoweight((0,) * rs.rank, n, 0), gmax)
            for _ in range(rs.rank):
                result = mul(result, factor)
            n += 1
    return result


def weyl_kac_character(
    rs: RootSystem,
    lam: AffCoweight,
    gmax: int,
    imaginary: bool = True,
    rendering: Literal["inverse", "direct"] = "inverse",
) -> LatticeSeries:
    """
    Character of the integrable module with highest weight ``lam`` by the Weyl-Kac formula.

    In the ``inverse`` rendering a weight ``mu`` is recorded as ``t**(-mu)``, so the
    series is expanded in positive grades starting at ``t**(-lam)``.  ``direct`` negates
    every exponent of that series.
    """
    _check_dominant(rs, lam)
    b = -lam
    low = grade(rs, b)
    if gmax < low:
        raise WindowError(f"grade cutoff {gmax} lies below the highest weight grade {low}")
    numerator: dict[AffCoweight, MotCoeff] = {}
    for w in _character_elements(rs, b, gmax):
        x = act_coweight(rs, w, b) - eta(rs, w)
        numerator[x] = numerator.get(x, ZERO) + (-1) ** length(rs, w)
    series = mul(
        LatticeSeries(rs, Window(low, gmax), numerator), character_denominator_inverse(rs, gmax - low, imaginary)
    )
    if rendering == "inverse":
        return series
    return LatticeSeries(rs, Window(-series.window.gmax, -series.window.gmin), {-x: c for x, c in series.items()})


def _form(rs: RootSystem, x: AffCoweight, y: AffCoweight) -> int:
    """Invariant form on affine coweights: -Psi on the finite part, (K | d) = 1."""
    return -rs.psi_form(x.finite, y.finite) + x.central * y.loop + x.loop * y.central


def _nonnegative_root_combination(rs: RootSystem, beta: AffCoweight) -> bool:
    if beta.loop != 0 or beta.central < 0:
        return False
    return all(a + beta.central * t >= 0 for a, t in zip(beta.finite, rs.theta.coroot, strict=True))


def freudenthal_multiplicities(rs: RootSystem, lam: AffCoweight, depth: int) -> dict[AffCoweight, int]:
    """
    Multiplicities of the weights ``lam - beta`` with ``beta`` of height <= depth.

    Freudenthal's recursion over positive real coroots and the imaginary coroots
    ``n K`` (multiplicity rank), processed by increasing height of ``beta``.
    """
    _check_dominant(rs, lam)
    simple = [AffCoweight(tuple(-t for t in rs.theta.coroot), 1, 0)]
    simple += [AffCoweight(tuple(int(i == j) for j in range(rs.rank)), 0, 0) for i in range(rs.rank)]
    positive = [(alpha.coroot, 1) for alpha in positive_coroots(rs, depth)]
    positive += [(AffCoweight((0,) * rs.rank, n, 0), rs.rank) for n in range(1, depth // rs.dual_coxeter + 1)]
    zero = AffCoweight.zero(rs.rank)
    mult: dict[AffCoweight, int] = {zero: 1}
    layer = [zero]
    for height in range(1, depth + 1):
        layer = sorted({beta + s for beta in layer for s in simple})
        for beta in layer:
            denominator = 2 * _form(rs, lam, beta) + 2 * grade(rs, beta) - _form(rs, beta, beta)
            if denominator == 0:
                mult[beta] = 0
                continue
            mu = lam - beta
            total = 0
            for gamma, multiplicity in positive:
                k = 1
                while True:
                    rest = beta - gamma.scaled(k)
                    if not _nonnegative_root_combination(rs, rest):
                        break
                    total += multiplicity * _form(rs, mu + gamma.scaled(k), gamma) * mult.get(rest, 0)
                    k += 1
            value = Fraction(2 * total, denominator)
            if value.denominator != 1:
                raise MalformedInputError(f"non-integral multiplicity {value} at {mu}")
            mult[beta] = int(value)
        logger.debug("freudenthal height %d: %d candidate weights", height, len(layer))
    return {beta: m for beta, m in mult.items() if m}


def freudenthal_character(rs: RootSystem, lam: AffCoweight, gmax: int) -> LatticeSeries:
    """Freudenthal multiplicities rendered like ``weyl_kac_character`` in the inverse rendering."""
    b = -lam
    low = grade(rs, b)
    depth = gmax - low
    terms = {b + beta: MotCoeff.from_int(m) for beta, m in freudenthal_multiplicities(rs, lam, depth).items()}
    return LatticeSeries(rs, Window(low, gmax), terms)


@dataclass
class CombinationResult:
    combination: CharacterCombination
    passed: bool
    detail: str


def check_weyl_kac_combinations(p: EisParams) -> list[CombinationResult]:
    """
    Compare the Hall polynomial at l = 0 with the character of ``-b`` in every combination.

    The Hall side is the definition under the plain action with ``l = 0``.  A
    combination passes when the character is exact on the whole window of the Hall
    side and agrees there monomial by monomial.
    """
    rs = p.rs
    hall = hall_P(p, "definition", "plain", l=0)
    results = []
    for combination in CharacterCombination.all():
        character = weyl_kac_character(rs, -p.b.b, p.gmax, combination.imaginary, combination.rendering)
        if character.window.gmin > hall.window.gmin or character.window.gmax < hall.window.gmax:
            results.append(CombinationResult(combination, False, f"character window {character.window} does not cover"))
            continue
        difference = hall.first_difference(character, hall.window.gmin, hall.window.gmax)
        if difference is None:
            results.append(CombinationResult(combination, True, "agrees"))
        else:
            x, a, c = difference
            results.append(CombinationResult(combination, False, f"first difference at {x}: {a} vs {c}"))
    return results


def resolve_character_combination(p: EisParams) -> tuple[CharacterCombination | None, list[str]]:
    passing = [r.combination for r in check_weyl_kac_combinations(p) if r.passed]
    return (passing[0] if passing else None), [c.key for c in passing]


def resolve_hall_action(p: EisParams) -> tuple[HallAction, list[str], list[str]]:
    """
    Pick the action under which the definition matches the closed form.

    Returns the chosen action, the actions that match at generic L and those that
    match after L := 1.  Without a generic match the twisted action is kept.
    """
    generic = compare_hall_forms(p)
    at_one = compare_hall_forms(p, SpecMode(kind="tate", value=1))
    matching = [action for action, ok in generic.items() if ok]
    chosen = matching[0] if matching else "twisted"
    return chosen, matching, [action for action, ok in at_one.items() if ok]
