"""Intersection lattices of plumbing graphs, with exact rational linear algebra."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from .errors import SingularInconsistent
from .graph import PlumbingGraph


class Definiteness(enum.Enum):
    NEGATIVE_DEFINITE = "NegativeDefinite"
    NEGATIVE_SEMIDEFINITE = "NegativeSemidefinite"
    OTHER = "Other"


@dataclass(frozen=True)
class IntersectionMatrix:
    ids: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.ids)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entry(self, u: str, w: str) -> int:
        return self.rows[self.ids.index(u)][self.ids.index(w)]

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def apply(self, x: Sequence) -> list:
        return [sum(a * b for a, b in zip(row, x)) for row in self.rows]

    def is_symmetric(self) -> bool:
        n = len(self.rows)
        return all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    @classmethod
    def from_rows(cls, rows, ids=None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        ids = tuple(ids) if ids is not None else tuple(str(i) for i in range(len(rows)))
        return cls(ids, rows)


@dataclass(frozen=True)
class DefinitenessReport:
    kind: Definiteness
    nullity: int
    null_generator: dict | None = None

    @property
    def negative_definite(self) -> bool:
        return self.kind is Definiteness.NEGATIVE_DEFINITE


def intersection_matrix(g: PlumbingGraph) -> IntersectionMatrix:
    ids = g.ids
    idx = g.index
    rows = [[0] * len(ids) for _ in ids]
    for v in g.vertices:
        rows[idx[v.id]][idx[v.id]] = v.framing
    for e in g.edges:
        u, w = tuple(e)
        rows[idx[u]][idx[w]] = rows[idx[w]][idx[u]] = 1
    return IntersectionMatrix(ids, tuple(tuple(r) for r in rows))


def _as_rows(q) -> list[list[Fraction]]:
    rows = q.rows if isinstance(q, IntersectionMatrix) else q
    return [[Fraction(x) for x in r] for r in rows]


def classify_definiteness(q) -> DefinitenessReport:
    """Sign class of a symmetric form by exact elimination on ``-q``.

    A positive pivot is eliminated through its Schur complement. A zero
    diagonal entry whose row is nonzero, or a negative diagonal entry, rules
    out semidefiniteness. A zero row adds one to the nullity.
    """
    a = [[-x for x in r] for r in _as_rows(q)]
    n = len(a)
    alive = list(range(n))
    nullity = 0
    while alive:
        i = next((k for k in alive if a[k][k] > 0), None)
        if i is None:
            i = alive[0]
            if a[i][i] < 0 or any(a[i][j] for j in alive):
                return DefinitenessReport(Definiteness.OTHER, _nullity(q))
            nullity += 1
            alive.remove(i)
            continue
        alive.remove(i)
        p = a[i][i]
        for j in alive:
            if a[j][i]:
                f = a[j][i] / p
                for k in alive:
                    a[j][k] -= f * a[i][k]
    if nullity == 0:
        return DefinitenessReport(Definiteness.NEGATIVE_DEFINITE, 0)
    gen = None
    if nullity == 1:
        basis = nullspace(q)
        vec = primitive_integer(basis[0])
        if all(x <= 0 for x in vec):
            vec = [-x for x in vec]
        elif not all(x >= 0 for x in vec):
            first = next(x for x in vec if x)
            if first < 0:
                vec = [-x for x in vec]
        ids = q.ids if isinstance(q, IntersectionMatrix) else tuple(str(i) for i in range(n))
        gen = dict(zip(ids, vec))
    return DefinitenessReport(Definiteness.NEGATIVE_SEMIDEFINITE, nullity, gen)


def _nullity(q) -> int:
    return len(nullspace(q))


def _rref(a: list[list[Fraction]]):
    """Reduced row echelon form in place; returns pivot columns."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def nullspace(q) -> list[list[Fraction]]:
    a = _as_rows(q)
    n = len(a[0]) if a else 0
    pivots = _rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -a[r][f]
        basis.append(v)
    return basis


def primitive_integer(vec: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to a primitive integer vector."""
    den = reduce(lambda x, y: x * y // gcd(x, y), (Fraction(x).denominator for x in vec), 1)
    ints = [int(Fraction(x) * den) for x in vec]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    return [x // g for x in ints] if g else ints


def solve_q(q, b: Sequence) -> list[Fraction]:
    """Some x with ``q x = b``; the unique one when ``q`` is invertible."""
    a = _as_rows(q)
    n = len(a)
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    aug = [row + [Fraction(bi)] for row, bi in zip(a, b)]
    pivots = _rref(aug)
    if n in pivots:
        raise SingularInconsistent("right-hand side is outside the column space")
    x = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x[c] = aug[r][n]
    return x


def determinant(q) -> int:
    """Exact determinant (Bareiss fraction-free elimination)."""
    rows = q.rows if isinstance(q, IntersectionMatrix) else q
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_minors(q) -> list[int]:
    rows = q.rows if isinstance(q, IntersectionMatrix) else q
    return [determinant([r[:k] for r in rows[:k]]) for k in range(1, len(rows) + 1)]


def is_negative_definite(g: PlumbingGraph) -> bool:
    return classify_definiteness(intersection_matrix(g)).negative_definite
