"""Divisors of functions on a resolution, their Milnor fibres, and capping
binding components with Hirzebruch-Jung chains."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import Mapping

from .calculus import ZERO_SEED, MoveSequence, blow_down, can_blow_down, resolve_ids, replay
from .errors import (InconsistentArrows, InvalidSequence, MissingArrow, NonIntegral, NonPositive,
                     NotCoprime, NotInLipmanCone)
from .graph import PlumbingGraph, fresh_id, pairing
from .lattice import intersection_matrix, solve_q


def arrow_totals(g: PlumbingGraph, arrows=None) -> dict:
    """Sum of arrow multiplicities per vertex (every vertex present)."""
    arrows = g.arrows if arrows is None else arrows
    items = arrows.items() if isinstance(arrows, Mapping) else arrows
    tot = {v: 0 for v in g.ids}
    for v, m in items:
        tot[v] += m
    return tot


def arrows_from_divisor(g: PlumbingGraph, d: Mapping[str, int]) -> dict:
    """a_v = -(d . E_v); the divisor must pair non-positively with every E_v."""
    a = {v: -pairing(g, d, v) for v in g.ids}
    bad = [v for v, x in a.items() if x < 0]
    if bad:
        raise NotInLipmanCone(f"divisor pairs positively with {', '.join(bad)}")
    return a


def divisor_from_arrows(g: PlumbingGraph, arrows=None) -> dict:
    """Solve Q r = -a for the exceptional part of the divisor."""
    a = arrow_totals(g, arrows)
    q = intersection_matrix(g)
    r = solve_q(q, [-a[v] for v in g.ids])
    sol = dict(zip(g.ids, r))
    if any(x.denominator != 1 for x in r):
        raise NonIntegral("exceptional multiplicities are not integral", sol)
    if any(x <= 0 for x in r):
        raise NonPositive("exceptional multiplicities are not all positive", sol)
    return {v: int(x) for v, x in sol.items()}


@dataclass(frozen=True)
class FiberInvariants:
    euler: int
    boundary_components: tuple  # ((vertex, multiplicity), count) per arrow
    total_boundary: int
    genus: int

    @property
    def planar(self) -> bool:
        return self.genus == 0


def fiber_invariants(g: PlumbingGraph, d: Mapping[str, int], arrows=None) -> FiberInvariants:
    """Euler characteristic, boundary count and genus of the Milnor fibre.

    chi = sum r_v (2 - d_v) with d_v counting edges and arrows at v; an
    arrow of multiplicity a at v contributes gcd(r_v, a) boundary circles.
    """
    g.require_spheres()
    arrows = list(g.arrows if arrows is None else (arrows.items() if isinstance(arrows, Mapping) else arrows))
    if any(d.get(v, 0) <= 0 for v in g.ids) or any(v not in g for v in d):
        raise NotInLipmanCone("divisor must have positive coefficients on every vertex")
    expected = arrows_from_divisor(g, d)
    got = arrow_totals(g, arrows)
    if expected != got:
        diff = [v for v in g.ids if expected[v] != got[v]]
        raise InconsistentArrows(f"arrow multiplicities disagree with the divisor at {', '.join(diff)}")
    n_arrows = {v: 0 for v in g.ids}
    for v, _ in arrows:
        n_arrows[v] += 1
    chi = sum(d[v] * (2 - g.degree(v) - n_arrows[v]) for v in g.ids)
    comps = tuple(((v, m), gcd(d[v], m)) for v, m in arrows)
    b = sum(c for _, c in comps)
    twice_genus = 2 - chi - b
    if twice_genus < 0 or twice_genus % 2:
        raise InconsistentArrows(f"chi = {chi} and b = {b} give no integral genus")
    return FiberInvariants(chi, comps, b, twice_genus // 2)


def riemann_roch_chi(g: PlumbingGraph, d: Mapping[str, int]) -> Fraction:
    """-(D.D + D.K)/2, using only K.E_v = -framing - 2."""
    g.require_spheres()
    dd = sum(c * pairing(g, d, v) for v, c in d.items())
    dk = sum(c * (-g.framing(v) - 2) for v, c in d.items())
    return Fraction(-(dd + dk), 2)


# -- null divisors of augmentations ------------------------------------------


def pm_null_divisor(seq: MoveSequence, keep):
    """Track multiplicities along blowups from a 0-framed seed.

    The seed has multiplicity 1, a vertex blowup copies the multiplicity of
    its vertex and an edge blowup adds the two. Returns ``(F_full, F, arrows)``
    where ``arrows`` lists ``(vertex, leaf multiplicity)`` for each removed
    -1 leaf.
    """
    start = seq.start if seq.start is not None else ZERO_SEED
    if len(start) != 1 or start.vertices[0].framing != 0:
        raise InvalidSequence("sequence must start at a single 0-framed vertex")
    seq = resolve_ids(start, seq)
    m = {start.ids[0]: 1}
    for mv in seq:
        if mv.kind == "bu_v":
            m[mv.created] = m[mv.loci[0]]
        elif mv.kind == "bu_e":
            m[mv.created] = m[mv.loci[0]] + m[mv.loci[1]]
        else:
            raise InvalidSequence(f"unexpected move {mv} in a blowup sequence from a 0-seed")
    final = replay(start, seq)
    keep = set(keep)
    if not keep <= set(final.ids):
        raise InvalidSequence("keep set is not a subset of the final vertices")
    arrows = []
    for v in final.ids:
        if v in keep:
            continue
        nb = final.neighbors(v)
        if final.framing(v) != -1 or len(nb) != 1 or not nb <= keep:
            raise InvalidSequence(f"vertex {v!r} outside keep is not a -1 leaf on keep")
        arrows.append((next(iter(nb)), m[v]))
    full = {v: m[v] for v in final.ids}
    restricted = {v: m[v] for v in final.ids if v in keep}
    return full, restricted, arrows


# -- Hirzebruch-Jung chains ------------------------------------------------------


@dataclass(frozen=True)
class HJChain:
    coefficients: tuple[int, ...]

    @property
    def framings(self) -> tuple[int, ...]:
        return tuple(-c for c in self.coefficients)

    def value(self) -> Fraction:
        x = Fraction(self.coefficients[-1])
        for c in reversed(self.coefficients[:-1]):
            x = c - 1 / x
        return x


def hj_expansion(b: int, a: int) -> HJChain:
    """Negative continued fraction b/a = c1 - 1/(c2 - 1/(...))."""
    if a <= 0 or b <= 0:
        raise ValueError("hj_expansion needs positive integers")
    if gcd(b, a) != 1:
        raise NotCoprime(f"gcd({b}, {a}) = {gcd(b, a)}")
    coeffs = []
    while a:
        c = ceil(Fraction(b, a))
        coeffs.append(c)
        b, a = a, c * a - b
    return HJChain(tuple(coeffs))


def cap_binding_component(g: PlumbingGraph, v: str, r_v: int, mult: int | None = None) -> PlumbingGraph:
    """Replace an arrow at ``v`` by the chain for slope -r_v/a.

    The chain is attached by its first vertex. Any -1 vertices the chain
    introduces are blown down, so a chain [1] just raises framing(v) by one.
    """
    ms = g.arrows_at(v)
    if not ms or (mult is not None and mult not in ms):
        raise MissingArrow(f"no arrow at {v!r}" + (f" with multiplicity {mult}" if mult else ""))
    a = ms[0] if mult is None else mult
    k = gcd(r_v, a)
    chain = hj_expansion(r_v // k, a // k)
    arrows = list(g.arrows)
    arrows.remove((v, a))
    h = g.with_arrows(arrows)
    prev, created = v, []
    for f in chain.framings:
        n = fresh_id(h.index, "h")
        h = h.add_vertex(n, f, [prev])
        created.append(n)
        prev = n
    changed = True
    while changed:
        changed = False
        for n in created:
            if n in h and h.framing(n) == -1 and can_blow_down(h, n):
                h = blow_down(h, n)
                changed = True
                break
    return h
