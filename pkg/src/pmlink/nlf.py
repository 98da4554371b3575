"""Homology of planar nearly Lefschetz fibrations from combinatorial data.

A factorization is recorded by its page (a disk or a sphere with holes),
the partition of holes into orbits of the boundary permutation, the
vanishing cycles as the sets of holes they enclose, and the boundary
interchanges as hole pairs. Second homology classes are integer
combinations ``sum a_i alpha_i`` whose total winding is trivial in
H_1(W_0), together with the winding parameter ``w``.

Sign convention on sphere pages: if the per-hole winding sums to ``t * m``
on every orbit of size ``m``, the class has ``w = -t``. This is the choice
that makes the D_4 sphere-page classes evaluate to zero under c_1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import networkx as nx

from .errors import Inadmissible, InvalidGraph, MixedContexts
from .graph import PlumbingGraph
from .lattice import intersection_matrix

DISK, SPHERE = "disk", "sphere"


@dataclass(frozen=True)
class Factorization:
    page: str
    holes: tuple[str, ...]
    orbits: tuple[tuple[str, tuple[str, ...]], ...]
    cycles: tuple[tuple[str, frozenset], ...]
    interchanges: tuple[frozenset, ...] = ()

    def __post_init__(self):
        if self.page not in (DISK, SPHERE):
            raise InvalidGraph(f"page must be disk or sphere, got {self.page!r}")
        if self.page == SPHERE and not self.holes:
            raise InvalidGraph("a sphere page needs at least one hole")
        hs = set(self.holes)
        if len(hs) != len(self.holes):
            raise InvalidGraph("duplicate hole id")
        covered = [h for _, o in self.orbits for h in o]
        if sorted(covered) != sorted(self.holes):
            raise InvalidGraph("orbits must partition the holes")
        for cid, c in self.cycles:
            if not c <= hs:
                raise InvalidGraph(f"cycle {cid} encloses unknown holes")
        for pair in self.interchanges:
            if len(pair) != 2 or not pair <= hs:
                raise InvalidGraph(f"bad interchange {sorted(pair)}")

    @classmethod
    def build(cls, page, orbits, cycles, interchanges=(), holes=None):
        """``orbits``/``cycles`` are mappings from ids to hole lists."""
        orbits = tuple((str(k), tuple(v)) for k, v in dict(orbits).items())
        if holes is None:
            holes = tuple(h for _, o in orbits for h in o)
        cycles = tuple((str(k), frozenset(v)) for k, v in dict(cycles).items())
        inter = tuple(frozenset(p) for p in interchanges)
        return cls(page, tuple(holes), orbits, cycles, inter)

    @property
    def cycle_ids(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.cycles)

    def orbit_of(self) -> dict:
        return {h: oid for oid, o in self.orbits for h in o}


@dataclass(frozen=True)
class NlfViolation:
    kind: str
    message: str

    def __str__(self):
        return f"{self.kind}: {self.message}"


def check_admissible(f: Factorization):
    """``None`` if every orbit of size m has m - 1 interchanges forming a
    spanning tree on its holes; otherwise the first violation found."""
    orbit = f.orbit_of()
    seen = set()
    for pair in f.interchanges:
        if pair in seen:
            return NlfViolation("duplicate", f"interchange {'-'.join(sorted(pair))} repeated")
        seen.add(pair)
        a, b = sorted(pair)
        if orbit[a] != orbit[b]:
            return NlfViolation("cross-orbit", f"interchange {a}-{b} joins different orbits")
    for oid, holes in f.orbits:
        pairs = [p for p in seen if next(iter(p)) in holes]
        if len(pairs) != len(holes) - 1:
            return NlfViolation("count", f"orbit {oid} of size {len(holes)} has {len(pairs)} interchanges")
        t = nx.Graph()
        t.add_nodes_from(holes)
        t.add_edges_from(tuple(p) for p in pairs)
        if not nx.is_connected(t):
            return NlfViolation("disconnected", f"interchanges of orbit {oid} do not connect its holes")
    return None


def _require_admissible(f):
    problem = check_admissible(f)
    if problem is not None:
        raise Inadmissible(str(problem))


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relations: tuple[tuple[int, ...], ...]

    @property
    def free_rank(self) -> int:
        return len(self.generators) - len(self.relations)

    def has_torsion(self) -> bool:
        from math import gcd
        from functools import reduce
        return any(reduce(gcd, (abs(x) for x in r), 0) > 1 for r in self.relations)


def h1_w0(f: Factorization) -> GroupPresentation:
    """One generator per orbit; on a sphere page the single relation
    sum m_c mu_c = 0."""
    _require_admissible(f)
    gens = tuple(oid for oid, _ in f.orbits)
    rels = ()
    if f.page == SPHERE:
        rels = (tuple(len(o) for _, o in f.orbits),)
    return GroupPresentation(gens, rels)


@dataclass(frozen=True)
class HomologyClass:
    a: tuple[int, ...]
    w: int = 0
    context: Factorization | None = field(default=None, compare=False, repr=False)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        _same_context([self, other])
        return HomologyClass(tuple(x + y for x, y in zip(self.a, other.a)), self.w + other.w,
                             self.context or other.context)

    def __neg__(self):
        return HomologyClass(tuple(-x for x in self.a), -self.w, self.context)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return HomologyClass(tuple(k * x for x in self.a), k * self.w, self.context)

    def label(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"a{i + 1}" for i in range(len(self.a))]
        terms = []
        for c, n in zip(self.a, names):
            if c:
                coef = "" if abs(c) == 1 else str(abs(c))
                terms.append(("- " if c < 0 else "+ ") + coef + n)
        s = " ".join(terms).lstrip("+ ") if terms else "0"
        if s.startswith("- "):
            s = "-" + s[2:]
        return s + (f"  (w={self.w})" if self.w else "")


def _same_context(classes):
    ctx = [c.context for c in classes if c.context is not None]
    if any(x is not ctx[0] and x != ctx[0] for x in ctx[1:]):
        raise MixedContexts("classes come from different factorizations")
    if len({len(c.a) for c in classes}) > 1:
        raise MixedContexts("classes have different numbers of cycles")


def _incidence(f: Factorization) -> list[list[int]]:
    """rows = orbits, columns = cycles: holes of the orbit inside the cycle."""
    return [[len(c & set(o)) for _, c in f.cycles] for _, o in f.orbits]


def winding_parameter(f: Factorization, a: Sequence[int]):
    """``w`` for a kernel class, or ``None`` if ``a`` is not nullhomologous."""
    sums = [sum(x * y for x, y in zip(row, a)) for row in _incidence(f)]
    if f.page == DISK:
        return 0 if all(s == 0 for s in sums) else None
    sizes = [len(o) for _, o in f.orbits]
    if sums[0] % sizes[0]:
        return None
    t = sums[0] // sizes[0]
    if any(s != t * m for s, m in zip(sums, sizes)):
        return None
    return -t


def is_kernel_class(f: Factorization, x: HomologyClass) -> bool:
    return len(x.a) == len(f.cycles) and winding_parameter(f, x.a) == x.w


def integer_kernel(rows: list[list[int]], n: int) -> list[list[int]]:
    """Basis of {x in Z^n : rows . x = 0} by unimodular column operations."""
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(n)] for i in range(n)]  # columns track the operations
    col = 0
    for r in range(len(a)):
        if col >= n:
            break
        while True:
            nz = [j for j in range(col, n) if a[r][j]]
            if not nz:
                break
            p = min(nz, key=lambda j: abs(a[r][j]))
            _swap_cols(a, u, col, p)
            done = True
            for j in range(col + 1, n):
                if a[r][j]:
                    q = a[r][j] // a[r][col]
                    _add_col(a, u, j, col, -q)
                    if a[r][j]:
                        done = False
            if done:
                break
        if a[r][col]:
            col += 1
    basis = [[u[i][j] for i in range(n)] for j in range(col, n)]
    return [_tidy(v) for v in basis]


def _swap_cols(a, u, i, j):
    for m in (a, u):
        for row in m:
            row[i], row[j] = row[j], row[i]


def _add_col(a, u, dst, src, k):
    for m in (a, u):
        for row in m:
            row[dst] += k * row[src]


def _tidy(v):
    first = next((x for x in v if x), 0)
    return [-x for x in v] if first < 0 else v


def h2_kernel(f: Factorization) -> list[HomologyClass]:
    """Integral basis of the classes sum a_i alpha_i that vanish in H_1(W_0)."""
    _require_admissible(f)
    inc = _incidence(f)
    k = len(f.cycles)
    if f.page == DISK:
        vecs = integer_kernel(inc, k)
        return [HomologyClass(tuple(v), 0, f) for v in vecs]
    rows = [r + [-len(o)] for r, (_, o) in zip(inc, f.orbits)]
    vecs = integer_kernel(rows, k + 1)
    return [HomologyClass(tuple(v[:k]), -v[k], f) for v in vecs]


def intersection_form(classes: Sequence[HomologyClass]) -> list[list[int]]:
    _same_context(classes)
    return [[-sum(x * y for x, y in zip(c.a, d.a)) for d in classes] for c in classes]


def c1_evaluate(x: HomologyClass) -> int:
    return 2 * x.w + sum(x.a)


def adjunction_genus(x: HomologyClass):
    """Genus g with 2w + sum a + sum a^2 = 2 - 2g, or ``None`` when no
    symplectic surface can carry the class.

    Excluded: negative or fractional g, ``w < 0`` (the class must pair
    non-negatively with the fibre), classes that are not kernel classes of
    their factorization, and ``w = 0`` with every nonzero ``a_i = -1``,
    whose winding around some hole is negative and so never vanishes.
    """
    if x.w < 0:
        return None
    if x.context is not None and not is_kernel_class(x.context, x):
        return None
    if x.w == 0 and any(x.a) and all(c <= 0 for c in x.a):
        return None
    twice = 2 - 2 * x.w - sum(x.a) - sum(c * c for c in x.a)
    if twice < 0 or twice % 2:
        return None
    return twice // 2


def classify_sphere_classes(f: Factorization) -> list[HomologyClass]:
    """Kernel classes of the shapes alpha_j - sum_I alpha_i (w = 0) and, on
    sphere pages only, -sum_I alpha_i (w = 1)."""
    _require_admissible(f)
    k = len(f.cycles)
    out = []
    for j in [None] + list(range(k)):
        rest = [i for i in range(k) if i != j]
        for size in range(len(rest) + 1):
            for neg in combinations(rest, size):
                if j is None and not neg:
                    continue
                a = [0] * k
                for i in neg:
                    a[i] = -1
                if j is not None:
                    a[j] = 1
                w = winding_parameter(f, a)
                want = 0 if j is not None else 1
                if w != want or (j is None and f.page == DISK):
                    continue
                x = HomologyClass(tuple(a), w, f)
                if adjunction_genus(x) == 0:
                    out.append(x)
    return out


def lattice_coordinates(basis: Sequence[HomologyClass], x: HomologyClass):
    """Integer coordinates of ``x`` in ``basis``, or ``None`` if outside."""
    vecs = [list(b.a) + [b.w] for b in basis]
    target = list(x.a) + [x.w]
    n, m = len(vecs), len(target)
    if n == 0:
        return [] if not any(target) else None
    aug = [[Fraction(vecs[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(m)]
    from .lattice import _rref
    piv = _rref(aug)
    if n in piv:
        return None
    sol = [Fraction(0)] * n
    for r, c in enumerate(piv):
        sol[c] = aug[r][n]
    if any(s.denominator != 1 for s in sol):
        return None
    return [int(s) for s in sol]


def in_kernel_lattice(f: Factorization, x: HomologyClass) -> bool:
    return lattice_coordinates(h2_kernel(f), x) is not None


def _weighted_graph(m) -> nx.Graph:
    g = nx.Graph()
    for i, row in enumerate(m):
        g.add_node(i, d=row[i])
    for i, row in enumerate(m):
        for j in range(i + 1, len(row)):
            if row[j]:
                g.add_edge(i, j, w=row[j])
    return g


def matrices_congruent_by_permutation(m1, m2) -> bool:
    if len(m1) != len(m2):
        return False
    sig = lambda m: sorted((m[i][i], tuple(sorted(m[i]))) for i in range(len(m)))  # noqa: E731
    if sig(m1) != sig(m2):
        return False
    return nx.is_isomorphic(_weighted_graph(m1), _weighted_graph(m2),
                            node_match=lambda a, b: a["d"] == b["d"],
                            edge_match=lambda a, b: a["w"] == b["w"])


def match_plumbing(classes: Sequence[HomologyClass], g: PlumbingGraph) -> bool:
    q = intersection_matrix(g).as_lists()
    if not classes:
        return len(q) == 0
    return matrices_congruent_by_permutation(intersection_form(classes), q)


def all_kernel_classes(f: Factorization, bound: int = 2):
    """Brute-force enumeration of kernel classes with |a_i| <= bound."""
    k = len(f.cycles)
    for a in product(range(-bound, bound + 1), repeat=k):
        w = winding_parameter(f, a)
        if w is not None:
            yield HomologyClass(tuple(a), w, f)
