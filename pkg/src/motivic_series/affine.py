"""
Affine root system and affine Weyl group in Kac coordinates.

A coweight ``(a, c, m)`` stands for ``a + c*K + m*d`` and is rendered as the monomial
``q**c z**a v**m``; a weight ``(mu, l, n)`` stands for ``mu + l*Lambda_0 + n*delta``.
The pairing is ``<mu, a> + l*c + n*m``.  An element of the affine Weyl group is stored
as ``t_trans * fin``.
"""

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Self

from .errors import MalformedInputError, RootSystemError
from .rootsys import FiniteWeylElt, Root, RootSystem, Vector, dot, mat_vec

logger = logging.getLogger(__name__)


def _add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(u, v, strict=True))


def _scale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * x for x in v)


@dataclass(frozen=True, order=True)
class AffCoweight:
    finite: Vector
    central: int = 0
    loop: int = 0

    def __add__(self, other: "AffCoweight") -> "AffCoweight":
        return AffCoweight(_add(self.finite, other.finite), self.central + other.central, self.loop + other.loop)

    def __neg__(self) -> "AffCoweight":
        return AffCoweight(_scale(-1, self.finite), -self.central, -self.loop)

    def __sub__(self, other: "AffCoweight") -> "AffCoweight":
        return self + (-other)

    def scaled(self, k: int) -> "AffCoweight":
        return AffCoweight(_scale(k, self.finite), k * self.central, k * self.loop)

    @classmethod
    def zero(cls, rank: int) -> Self:
        return cls((0,) * rank, 0, 0)

    @classmethod
    def parse(cls, text: str, rank: int) -> Self:
        """Parse the triple syntax ``f1,...,fr;c;m``; a lone ``0`` finite part means the zero vector."""
        parts = [p.strip() for p in text.split(";")]
        if len(parts) != 3:
            raise MalformedInputError(f"coweight '{text}' must have the form 'f1,...,fr;c;m'")
        try:
            finite = tuple(int(x) for x in parts[0].split(","))
            central, loop = int(parts[1]), int(parts[2])
        except ValueError as e:
            raise MalformedInputError(f"coweight '{text}' has non-integer entries") from e
        if finite == (0,) and rank > 1:
            finite = (0,) * rank
        if len(finite) != rank:
            raise MalformedInputError(f"coweight '{text}' needs {rank} finite coordinates")
        return cls(finite, central, loop)

    def __str__(self) -> str:
        return f"{','.join(str(x) for x in self.finite)};{self.central};{self.loop}"


@dataclass(frozen=True)
class AffWeight:
    finite: Vector
    level: int = 0
    degree: int = 0

    def __sub__(self, other: "AffWeight") -> "AffWeight":
        return AffWeight(
            tuple(x - y for x, y in zip(self.finite, other.finite, strict=True)),
            self.level - other.level,
            self.degree - other.degree,
        )

    def __add__(self, other: "AffWeight") -> "AffWeight":
        return AffWeight(_add(self.finite, other.finite), self.level + other.level, self.degree + other.degree)

    def scaled(self, k: int) -> "AffWeight":
        return AffWeight(_scale(k, self.finite), k * self.level, k * self.degree)


def pairing(mu: AffWeight, x: AffCoweight) -> int:
    return dot(mu.finite, x.finite) + mu.level * x.central + mu.degree * x.loop


@dataclass(frozen=True)
class AffRoot:
    """Real affine root ``root + n*delta``."""

    root: Root
    n: int

    @property
    def positive(self) -> bool:
        return self.n > 0 or (self.n == 0 and self.root.positive)

    @property
    def weight(self) -> AffWeight:
        return AffWeight(self.root.weight, 0, self.n)

    @property
    def coroot(self) -> AffCoweight:
        central = Fraction(self.n) / self.root.norm
        return AffCoweight(self.root.coroot, int(central), 0)

    def pair(self, x: AffCoweight) -> int:
        return self.root.pair(x.finite) + self.n * x.loop

    def __neg__(self) -> "AffRoot":
        return AffRoot(-self.root, -self.n)

    def __str__(self) -> str:
        return f"({','.join(str(k) for k in self.root.simple)};{self.n})"


@dataclass(frozen=True)
class AffWeylElt:
    trans: Vector
    fin: FiniteWeylElt

    def __str__(self) -> str:
        if not any(self.trans):
            return str(self.fin)
        return f"t({','.join(str(x) for x in self.trans)}){'' if self.fin.is_identity else str(self.fin)}"


@dataclass(frozen=True)
class TorsorLabel:
    """Antidominant affine coweight ``(f, c, -d)`` with ``d > 0``."""

    b: AffCoweight

    @property
    def d(self) -> int:
        return -self.b.loop

    @classmethod
    def from_coweight(cls, rs: RootSystem, b: AffCoweight) -> Self:
        if b.loop >= 0:
            raise MalformedInputError(f"torsor label {b} needs a negative loop component (negative index required)")
        bad = [str(alpha) for alpha in simple_affine_roots(rs) if alpha.pair(b) > 0]
        if bad:
            raise MalformedInputError(f"{b} is not antidominant: positive on simple roots {', '.join(bad)}")
        return cls(b)

    @classmethod
    def parse(cls, rs: RootSystem, text: str) -> Self:
        return cls.from_coweight(rs, AffCoweight.parse(text, rs.rank))

    def __str__(self) -> str:
        return str(self.b)


def rho_hat(rs: RootSystem) -> AffWeight:
    return AffWeight(rs.rho, rs.dual_coxeter, 0)


def grade(rs: RootSystem, x: AffCoweight) -> int:
    """<rho_hat, x> = <rho, a> + h_dual * c."""
    return rs.rho_pair(x.finite) + rs.dual_coxeter * x.central


def simple_affine_roots(rs: RootSystem) -> list[AffRoot]:
    """alpha_0 = -theta + delta first, then the finite simple roots."""
    return [AffRoot(-rs.theta, 1)] + [AffRoot(r, 0) for r in rs.simple_roots]


def reflection(rs: RootSystem, root: Root) -> FiniteWeylElt:
    rows = []
    for k in range(rs.rank):
        rows.append(tuple(int(k == j) - root.coroot[k] * root.weight[j] for j in range(rs.rank)))
    return rs.weyl_from_matrix(tuple(rows))


def identity(rs: RootSystem) -> AffWeylElt:
    return AffWeylElt((0,) * rs.rank, rs.identity)


def translation(rs: RootSystem, b: Sequence[int]) -> AffWeylElt:
    return AffWeylElt(tuple(b), rs.identity)


def simple_affine_reflection(rs: RootSystem, i: int) -> AffWeylElt:
    """s_0 = t_{theta_check} s_theta; s_i for i >= 1 is the finite simple reflection."""
    if i == 0:
        return AffWeylElt(rs.theta.coroot, reflection(rs, rs.theta))
    if not 1 <= i <= rs.rank:
        raise RootSystemError(f"no simple affine reflection s{i} in {rs.label}")
    return AffWeylElt((0,) * rs.rank, rs.simple_reflection(i - 1))


def multiply(rs: RootSystem, w1: AffWeylElt, w2: AffWeylElt) -> AffWeylElt:
    """(t_b u)(t_b' u') = t_{b + u b'} u u'."""
    return AffWeylElt(_add(w1.trans, w1.fin.act_coweight(w2.trans)), rs.weyl_mul(w1.fin, w2.fin))


def inverse(rs: RootSystem, w: AffWeylElt) -> AffWeylElt:
    fin_inv = rs.weyl_inverse(w.fin)
    return AffWeylElt(_scale(-1, fin_inv.act_coweight(w.trans)), fin_inv)


def act_coweight(rs: RootSystem, w: AffWeylElt, x: AffCoweight) -> AffCoweight:
    a = w.fin.act_coweight(x.finite)
    b = w.trans
    central = x.central + rs.psi_form(a, b) + rs.psi_form(b, b) // 2 * x.loop
    return AffCoweight(_add(a, _scale(x.loop, b)), central, x.loop)


def act_weight(rs: RootSystem, w: AffWeylElt, mu: AffWeight) -> AffWeight:
    finite = w.fin.act_weight(mu.finite)
    b = w.trans
    psi_b = mat_vec(rs.psi, b)
    degree = mu.degree - dot(finite, b) + mu.level * (rs.psi_form(b, b) // 2)
    return AffWeight(tuple(x - mu.level * y for x, y in zip(finite, psi_b, strict=True)), mu.level, degree)


def act_root(rs: RootSystem, w: AffWeylElt, alpha: AffRoot) -> AffRoot:
    image = rs.act_root(w.fin, alpha.root)
    return AffRoot(image, alpha.n - image.pair(w.trans))


def inversion_set(rs: RootSystem, w: AffWeylElt) -> list[AffRoot]:
    """Positive real affine roots sent to negative roots, in closed form from the translation part."""
    inversions = []
    for beta in rs.roots:
        image = rs.act_root(w.fin, beta)
        k = image.pair(w.trans)
        n_min = 0 if beta.positive else 1
        upper = k if not image.positive else k - 1
        inversions.extend(AffRoot(beta, n) for n in range(n_min, upper + 1))
    inversions.sort(key=lambda alpha: (grade(rs, alpha.coroot), alpha.root.simple, alpha.n))
    return inversions


def length(rs: RootSystem, w: AffWeylElt) -> int:
    return len(inversion_set(rs, w))


def reduced_word(rs: RootSystem, w: AffWeylElt) -> list[int]:
    """Greedy right descent through simple affine reflections."""
    word: list[int] = []
    current = w
    while True:
        for i, alpha in enumerate(simple_affine_roots(rs)):
            if not act_root(rs, current, alpha).positive:
                word.append(i)
                current = multiply(rs, current, simple_affine_reflection(rs, i))
                break
        else:
            break
    word.reverse()
    return word


def eta(rs: RootSystem, w: AffWeylElt) -> AffCoweight:
    """w(rho_hat_check) - rho_hat_check, as minus the sum of the coroots inverted by w^-1."""
    total = AffCoweight.zero(rs.rank)
    for alpha in inversion_set(rs, inverse(rs, w)):
        total = total - alpha.coroot
    return total


def lambda_weight(rs: RootSystem, w: AffWeylElt) -> AffWeight:
    """rho_hat - w(rho_hat)."""
    rho = rho_hat(rs)
    return rho - act_weight(rs, w, rho)


def positive_coroots(rs: RootSystem, max_grade: int) -> list[AffRoot]:
    """Positive real affine roots whose coroot has grade <= max_grade, ordered by grade."""
    found = []
    for beta in rs.roots:
        n = 0 if beta.positive else 1
        while True:
            alpha = AffRoot(beta, n)
            if grade(rs, alpha.coroot) > max_grade:
                break
            found.append(alpha)
            n += 1
    found.sort(key=lambda alpha: (grade(rs, alpha.coroot), alpha.root.simple, alpha.n))
    return found


def quadratic_ball(
    rs: RootSystem, quadratic: int | Fraction, linear: Sequence[int | Fraction], bound: int | Fraction
) -> Iterator[Vector]:
    """
    All t in L with ``quadratic * r(t) + linear . t <= bound`` where r(t) = -Psi(t, t)/2.

    ``quadratic`` must be positive.  Candidates come from a coordinate box around a
    provable radius and are filtered exactly.
    """
    if quadratic <= 0:
        raise MalformedInputError("quadratic coefficient must be positive")
    a = Fraction(quadratic)
    lam = [Fraction(x) for x in linear]
    q_inv = rs.neg_psi_inverse
    k = sum(lam[i] * q_inv[i][j] * lam[j] for i in range(rs.rank) for j in range(rs.rank))
    radius = max(2 * max(Fraction(bound), Fraction(0)) / a, 8 * k / (a * a))
    box = [math.isqrt(math.floor(2 * radius * q_inv[i][i])) + 1 for i in range(rs.rank)]
    for t in itertools.product(*(range(-m, m + 1) for m in box)):
        value = a * Fraction(-rs.psi_form(t, t), 2) + sum(x * y for x, y in zip(lam, t, strict=True))
        if value <= bound:
            yield t


def enumerate_weyl_by_grade(rs: RootSystem, b: AffCoweight, max_grade: int) -> list[AffWeylElt]:
    """All w with grade(w(b)) <= max_grade, sorted by (grade, translation, finite word)."""
    if b.loop >= 0:
        raise MalformedInputError(f"graded enumeration needs a negative loop component, got {b}")
    d = -b.loop
    h_dual = rs.dual_coxeter
    found = []
    for u in rs.weyl:
        uf = u.act_coweight(b.finite)
        const0 = rs.rho_pair(uf) + h_dual * b.central
        psi_uf = mat_vec(rs.psi, uf)
        linear = [-d + h_dual * psi_uf[j] for j in range(rs.rank)]
        for t in quadratic_ball(rs, h_dual * d, linear, max_grade - const0):
            w = AffWeylElt(t, u)
            image = act_coweight(rs, w, b)
            g = grade(rs, image)
            if g <= max_grade:
                found.append((g, t, u.word, w))
    found.sort(key=lambda item: item[:3])
    logger.debug("enumerated %d affine Weyl elements for b = %s up to grade %d", len(found), b, max_grade)
    return [item[3] for item in found]


def enumerate_weyl_by_length(rs: RootSystem, max_length: int) -> list[tuple[AffWeylElt, list[int]]]:
    """Breadth-first walk of the Cayley graph: every element of length <= max_length with one reduced word."""
    start = identity(rs)
    seen = {(start.trans, start.fin.coweight_matrix)}
    found = [(start, [])]
    layer = [(start, [])]
    for _ in range(max_length):
        next_layer = []
        for w, word in layer:
            for i in range(rs.rank + 1):
                v = multiply(rs, w, simple_affine_reflection(rs, i))
                key = (v.trans, v.fin.coweight_matrix)
                if key in seen:
                    continue
                seen.add(key)
                next_layer.append((v, word + [i]))
        found.extend(next_layer)
        layer = next_layer
    return found


def torsor_labels(rs: RootSystem, d: int) -> list[TorsorLabel]:
    """Antidominant (f, 0, -d) with f in the coroot lattice."""
    if d <= 0:
        raise MalformedInputError(f"negative index required: d must be positive, got {d}")
    inv_t = rs.cartan_transpose_inverse
    labels = []
    ranges = [range(d // m + 1) for m in rs.marks]
    for x in itertools.product(*ranges):
        if dot(rs.marks, x) > d:
            continue
        f = [-sum(inv_t[i][j] * x[j] for j in range(rs.rank)) for i in range(rs.rank)]
        if any(c.denominator != 1 for c in f):
            continue
        labels.append(TorsorLabel.from_coweight(rs, AffCoweight(tuple(int(c) for c in f), 0, -d)))
    labels.sort(key=lambda label: (grade(rs, label.b), label.b.finite))
    return labels


def parse_weyl_element(rs: RootSystem, text: str) -> AffWeylElt:
    """
    Parse ``e``, a word of simple reflections such as ``s0s1``, or a translation
    ``t:1,0`` optionally followed by a word (``t:1;s1``).
    """
    text = text.strip().replace(" ", "")
    result = identity(rs)
    if text.startswith("t:"):
        trans_text, _, text = text[2:].partition(";")
        try:
            trans = tuple(int(x) for x in trans_text.split(","))
        except ValueError as e:
            raise MalformedInputError(f"invalid translation '{trans_text}'") from e
        if len(trans) != rs.rank:
            raise MalformedInputError(f"translation needs {rs.rank} coordinates")
        result = translation(rs, trans)
    if text in ("", "e"):
        return result
    tokens = text.split("s")
    if tokens[0] != "" or not all(tok.isdigit() for tok in tokens[1:]):
        raise MalformedInputError(f"invalid Weyl group word '{text}'")
    for tok in tokens[1:]:
        result = multiply(rs, result, simple_affine_reflection(rs, int(tok)))
    return result
