"""
Finite simple root systems.

Coweights (elements of L) are integer vectors in the basis of simple coroots;
weights (elements of L-dual) are integer vectors in the basis of fundamental weights,
so the pairing of the two is the plain dot product.  The Cartan matrix follows
``cartan[i][j] = <alpha_i^vee, alpha_j>``.
"""

import logging
from collections import Counter, deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

import sympy

from .errors import RootSystemError

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

DEFAULT_RANK_CAP = 4

_VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


def cartan_matrix(letter: str, rank: int) -> list[list[int]]:
    """Cartan matrix in Bourbaki numbering."""
    if letter not in _VALID_RANKS or not _VALID_RANKS[letter](rank):
        raise RootSystemError(f"no root system of type {letter}{rank}")
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def link(i: int, j: int, a_ij: int = -1, a_ji: int = -1) -> None:
        a[i][j], a[j][i] = a_ij, a_ji

    if letter in "ABC":
        for i in range(rank - 1):
            link(i, i + 1)
        if letter == "B":
            link(rank - 2, rank - 1, -1, -2)
        elif letter == "C":
            link(rank - 2, rank - 1, -2, -1)
    elif letter == "D":
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 3, rank - 1)
    elif letter == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, rank - 1):
            link(i, i + 1)
    elif letter == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif letter == "G":
        link(0, 1, -3, -1)
    return a


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v, strict=True))


def mat_vec(m: Matrix, v: Sequence[int]) -> Vector:
    return tuple(dot(row, v) for row in m)


def mat_mul(m: Matrix, n: Matrix) -> Matrix:
    cols = list(zip(*n, strict=True))
    return tuple(tuple(dot(row, col) for col in cols) for row in m)


@dataclass(frozen=True)
class Root:
    """A finite root together with its coroot."""

    simple: Vector
    weight: Vector
    coroot: Vector
    norm: Fraction

    @property
    def positive(self) -> bool:
        return sum(self.simple) > 0

    @property
    def height(self) -> int:
        return sum(self.simple)

    def pair(self, coweight: Sequence[int]) -> int:
        return dot(self.weight, coweight)

    def __neg__(self) -> "Root":
        return Root(
            simple=tuple(-x for x in self.simple),
            weight=tuple(-x for x in self.weight),
            coroot=tuple(-x for x in self.coroot),
            norm=self.norm,
        )


@dataclass(frozen=True)
class FiniteWeylElt:
    """Element of the finite Weyl group with its actions on L and L-dual."""

    coweight_matrix: Matrix
    weight_matrix: Matrix
    word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def is_identity(self) -> bool:
        return not self.word

    def act_coweight(self, a: Sequence[int]) -> Vector:
        return mat_vec(self.coweight_matrix, a)

    def act_weight(self, mu: Sequence[int]) -> Vector:
        return mat_vec(self.weight_matrix, mu)

    def __str__(self) -> str:
        return "e" if not self.word else "".join(f"s{i + 1}" for i in self.word)


@dataclass(frozen=True)
class RootSystem:
    letter: str
    rank: int
    cartan: Matrix
    norms: tuple[Fraction, ...]
    psi: Matrix
    roots: tuple[Root, ...]
    theta: Root
    coxeter: int
    dual_coxeter: int
    weyl: tuple[FiniteWeylElt, ...] = field(repr=False)

    @property
    def label(self) -> str:
        return f"{self.letter}{self.rank}"

    @property
    def positive_roots(self) -> tuple[Root, ...]:
        return tuple(r for r in self.roots if r.positive)

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(self.root_from_simple(tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank))

    @property
    def simply_laced(self) -> bool:
        return all(n == 1 for n in self.norms)

    @property
    def marks(self) -> Vector:
        """Coefficients of the highest root in the simple roots."""
        return self.theta.simple

    @property
    def rho(self) -> Vector:
        return (1,) * self.rank

    @cached_property
    def rho_check(self) -> tuple[Fraction, ...]:
        total = [0] * self.rank
        for r in self.positive_roots:
            total = [t + c for t, c in zip(total, r.coroot, strict=True)]
        return tuple(Fraction(t, 2) for t in total)

    @cached_property
    def _roots_by_weight(self) -> dict[Vector, Root]:
        return {r.weight: r for r in self.roots}

    @cached_property
    def _roots_by_simple(self) -> dict[Vector, Root]:
        return {r.simple: r for r in self.roots}

    @cached_property
    def _weyl_by_matrix(self) -> dict[Matrix, FiniteWeylElt]:
        return {w.coweight_matrix: w for w in self.weyl}

    @cached_property
    def neg_psi_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        inverse = (-sympy.Matrix(self.psi)).inv()
        return tuple(
            tuple(Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(self.rank))
            for i in range(self.rank)
        )

    @cached_property
    def cartan_transpose_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        inverse = sympy.Matrix(self.cartan).T.inv()
        return tuple(
            tuple(Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(self.rank))
            for i in range(self.rank)
        )

    def root_from_weight(self, weight: Sequence[int]) -> Root:
        try:
            return self._roots_by_weight[tuple(weight)]
        except KeyError:
            raise RootSystemError(f"{tuple(weight)} is not a root of {self.label}") from None

    def root_from_simple(self, simple: Sequence[int]) -> Root:
        try:
            return self._roots_by_simple[tuple(simple)]
        except KeyError:
            raise RootSystemError(f"{tuple(simple)} is not a root of {self.label}") from None

    def psi_form(self, a: Sequence[int], b: Sequence[int]) -> int:
        return dot(a, mat_vec(self.psi, b))

    def rho_pair(self, a: Sequence[int]) -> int:
        """<rho, a> for a coweight a."""
        return sum(a)

    @property
    def identity(self) -> FiniteWeylElt:
        return self.weyl[0]

    def simple_reflection(self, i: int) -> FiniteWeylElt:
        return self.weyl_from_matrix(_simple_coweight_matrix(self.cartan, i))

    def weyl_from_matrix(self, matrix: Matrix) -> FiniteWeylElt:
        try:
            return self._weyl_by_matrix[matrix]
        except KeyError:
            raise RootSystemError("matrix is not an element of the Weyl group") from None

    def weyl_mul(self, u: FiniteWeylElt, v: FiniteWeylElt) -> FiniteWeylElt:
        return self.weyl_from_matrix(mat_mul(u.coweight_matrix, v.coweight_matrix))

    def weyl_inverse(self, u: FiniteWeylElt) -> FiniteWeylElt:
        for v in self.weyl:
            if mat_mul(u.coweight_matrix, v.coweight_matrix) == self.identity.coweight_matrix:
                return v
        raise RootSystemError("element has no inverse")  # pragma: no cover

    def act_root(self, w: FiniteWeylElt, root: Root) -> Root:
        return self.root_from_weight(w.act_weight(root.weight))

    def weyl_from_word(self, word: Iterable[int]) -> FiniteWeylElt:
        result = self.identity
        for i in word:
            if not 0 <= i < self.rank:
                raise RootSystemError(f"simple reflection index {i + 1} out of range for {self.label}")
            result = self.weyl_mul(result, self.simple_reflection(i))
        return result

    def inversion_count(self, w: FiniteWeylElt) -> int:
        return sum(1 for r in self.positive_roots if not self.act_root(w, r).positive)

    def to_json(self) -> dict[str, Any]:
        return {
            "type": self.label,
            "cartan": [list(row) for row in self.cartan],
            "psi": [list(row) for row in self.psi],
            "positive_roots": [list(r.simple) for r in self.positive_roots],
            "coxeter_number": self.coxeter,
            "dual_coxeter_number": self.dual_coxeter,
        }


def _symmetrizer(cartan: list[list[int]]) -> list[Fraction]:
    """Half squared lengths of the simple roots, long roots normalized to 1."""
    rank = len(cartan)
    norms: list[Fraction | None] = [None] * rank
    norms[0] = Fraction(1)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(rank):
            if cartan[i][j] and norms[j] is None:
                norms[j] = norms[i] * Fraction(cartan[i][j], cartan[j][i])
                queue.append(j)
    longest = max(norms)
    return [n / longest for n in norms]


def _positive_roots(cartan: list[list[int]]) -> list[Vector]:
    """Positive roots in simple-root coordinates by root-string closure, ordered by height."""
    rank = len(cartan)
    simples = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    known = set(simples)
    layer = list(simples)
    ordered = list(simples)
    while layer:
        next_layer = []
        for beta in layer:
            for i in range(rank):
                pairing = sum(beta[j] * cartan[i][j] for j in range(rank))
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) not in known:
                        break
                    p += 1
                if p - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in known:
                        known.add(up)
                        next_layer.append(up)
        next_layer.sort(reverse=True)
        ordered.extend(next_layer)
        layer = next_layer
    return ordered


def _simple_coweight_matrix(cartan: Matrix, i: int) -> Matrix:
    rank = len(cartan)
    rows = []
    for k in range(rank):
        row = [int(k == j) for j in range(rank)]
        if k == i:
            row = [row[j] - cartan[j][i] for j in range(rank)]
        rows.append(tuple(row))
    return tuple(rows)


def _simple_weight_matrix(cartan: Matrix, i: int) -> Matrix:
    rank = len(cartan)
    rows = []
    for k in range(rank):
        row = [int(k == j) for j in range(rank)]
        row[i] -= cartan[k][i]
        rows.append(tuple(row))
    return tuple(rows)


def _weyl_group(cartan: Matrix) -> list[FiniteWeylElt]:
    """Breadth-first closure of the simple reflections; the first word found for an element is reduced."""
    rank = len(cartan)
    ident = tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))
    generators = [(_simple_coweight_matrix(cartan, i), _simple_weight_matrix(cartan, i)) for i in range(rank)]
    elements = {ident: FiniteWeylElt(ident, ident, ())}
    queue = deque([elements[ident]])
    while queue:
        w = queue.popleft()
        for i, (cw, wt) in enumerate(generators):
            matrix = mat_mul(cw, w.coweight_matrix)
            if matrix not in elements:
                elements[matrix] = FiniteWeylElt(matrix, mat_mul(wt, w.weight_matrix), (i,) + w.word)
                queue.append(elements[matrix])
    return list(elements.values())


def build_root_system(letter: str, rank: int, rank_cap: int = DEFAULT_RANK_CAP) -> RootSystem:
    """Build a finite root system with its Weyl group materialized."""
    letter = letter.upper()
    if rank > rank_cap:
        raise RootSystemError(f"rank {rank} exceeds the configured cap {rank_cap}")
    raw = cartan_matrix(letter, rank)
    cartan: Matrix = tuple(tuple(row) for row in raw)
    norms = _symmetrizer(raw)

    psi_rows = []
    for i in range(rank):
        row = []
        for j in range(rank):
            value = Fraction(-cartan[i][j]) / norms[j]
            if value.denominator != 1:
                raise RootSystemError(f"non-integral form on coroots of {letter}{rank}")  # pragma: no cover
            row.append(int(value))
        psi_rows.append(tuple(row))
    psi: Matrix = tuple(psi_rows)

    roots = []
    for simple in _positive_roots(raw):
        weight = tuple(sum(simple[i] * cartan[j][i] for i in range(rank)) for j in range(rank))
        norm = sum(simple[i] * simple[j] * norms[i] * cartan[i][j] for i in range(rank) for j in range(rank)) / 2
        coroot = tuple(simple[i] * norms[i] / norm for i in range(rank))
        if any(c.denominator != 1 for c in coroot):
            raise RootSystemError("non-integral coroot")  # pragma: no cover
        root = Root(simple=simple, weight=weight, coroot=tuple(int(c) for c in coroot), norm=norm)
        roots.append(root)
    roots += [-r for r in roots]

    theta = max(roots, key=lambda r: r.height)
    coxeter = theta.height + 1
    dual_coxeter = 1 + sum(theta.coroot)
    rs = RootSystem(
        letter=letter,
        rank=rank,
        cartan=cartan,
        norms=tuple(norms),
        psi=psi,
        roots=tuple(roots),
        theta=theta,
        coxeter=coxeter,
        dual_coxeter=dual_coxeter,
        weyl=tuple(_weyl_group(cartan)),
    )
    _check_invariants(rs)
    logger.debug(
        "built %s: %d roots, |W| = %d, h = %d, h_dual = %d", rs.label, len(roots), len(rs.weyl), coxeter, dual_coxeter
    )
    return rs


def _check_invariants(rs: RootSystem) -> None:
    if len(rs.roots) != rs.rank * rs.coxeter:
        raise RootSystemError(f"{rs.label}: |roots| = {len(rs.roots)} but rank * h = {rs.rank * rs.coxeter}")
    psi = sympy.Matrix(rs.psi)
    for k in range(1, rs.rank + 1):
        minor = psi[:k, :k].det()
        if (minor > 0) != (k % 2 == 0) or minor == 0:
            raise RootSystemError(f"{rs.label}: form is not negative definite")
    if any(rs.psi[i][i] % 2 for i in range(rs.rank)):
        raise RootSystemError(f"{rs.label}: form is not even")
    if -rs.psi_form(rs.theta.coroot, rs.theta.coroot) != 2:
        raise RootSystemError(f"{rs.label}: form is not normalized on the highest coroot")


def parse_root_system_label(label: str, rank_cap: int = DEFAULT_RANK_CAP) -> RootSystem:
    """Build from a label such as ``A1`` or ``B2``."""
    label = label.strip()
    if len(label) < 2 or not label[1:].isdigit():
        raise RootSystemError(f"invalid root system label '{label}'")
    return build_root_system(label[0], int(label[1:]), rank_cap)


def kappa_index(rs: RootSystem, weights: Sequence[Sequence[int]]) -> int:
    """
    Index of a representation given by its weight multiset.

    Returns the integer kappa with phi(lambda(x)) = kappa * Psi(x, x) / 2 where phi is the
    second elementary symmetric function of the weight values <mu, x>.
    """
    if not weights:
        raise RootSystemError("weight multiset is empty")
    multiset = Counter(tuple(mu) for mu in weights)
    for i in range(rs.rank):
        reflected = Counter(rs.simple_reflection(i).act_weight(mu) for mu in multiset.elements())
        if reflected != multiset:
            raise RootSystemError("not proportional: weight multiset is not Weyl-stable")

    def phi(x: Vector) -> int:
        values = [dot(mu, x) for mu in multiset.elements()]
        return (sum(values) ** 2 - sum(v * v for v in values)) // 2

    samples = [tuple(int(k == i) for k in range(rs.rank)) for i in range(rs.rank)]
    samples += [
        tuple(int(k in (i, j)) for k in range(rs.rank)) for i in range(rs.rank) for j in range(i + 1, rs.rank)
    ]
    ratios = {Fraction(2 * phi(x), rs.psi_form(x, x)) for x in samples}
    if len(ratios) != 1:
        raise RootSystemError(f"not proportional: ratios {sorted(ratios)}")
    (ratio,) = ratios
    if ratio.denominator != 1:
        raise RootSystemError(f"not proportional: non-integral index {ratio}")
    return int(ratio)
