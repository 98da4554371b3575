"""Graph corpora: exhaustive small trees and random blowup sequences."""

from __future__ import annotations

import random
from itertools import product

import networkx as nx

from .calculus import ZERO_SEED, MoveSequence, bu_e, bu_v, replay
from .graph import PlumbingGraph, canonical_form
from .lattice import is_negative_definite


def tree_shapes(n: int):
    """Edge lists of the unlabelled trees on ``n`` vertices (vertices 0..n-1)."""
    if n == 1:
        yield []
        return
    for t in nx.nonisomorphic_trees(n):
        yield sorted(t.edges())


def small_trees(max_vertices: int = 6, framings=range(-5, 0), negative_definite: bool = True):
    """Every weighted tree up to isomorphism with the given framing range."""
    seen = set()
    out = []
    framings = list(framings)
    for n in range(1, max_vertices + 1):
        for edges in tree_shapes(n):
            for fs in product(framings, repeat=n):
                g = PlumbingGraph.build({f"v{i}": f for i, f in enumerate(fs)},
                                        [(f"v{a}", f"v{b}") for a, b in edges])
                key = canonical_form(g)
                if key in seen:
                    continue
                seen.add(key)
                if negative_definite and not is_negative_definite(g):
                    continue
                out.append(g)
    return out


def random_tree(rng: random.Random, n: int, framings=range(-5, 0)) -> PlumbingGraph:
    framings = list(framings)
    fr = {f"v{i}": rng.choice(framings) for i in range(n)}
    edges = [(f"v{i}", f"v{rng.randrange(i)}") for i in range(1, n)]
    return PlumbingGraph.build(fr, edges)


def random_blowups(rng: random.Random, length: int, start: PlumbingGraph = ZERO_SEED) -> MoveSequence:
    """Random vertex/edge blowups from ``start``."""
    g = start
    moves = []
    for _ in range(length):
        if g.edges and rng.random() < 0.5:
            u, w = sorted(rng.choice(sorted(g.edges, key=sorted)), key=g.index.__getitem__)
            m = bu_e(u, w)
        else:
            m = bu_v(rng.choice(g.ids))
        g = replay(g, [m])
        moves.append(m)
    return MoveSequence(tuple(moves), start)


def random_connected_subset(rng: random.Random, g: PlumbingGraph, size: int | None = None) -> set:
    size = size or rng.randint(1, len(g))
    start = rng.choice(g.ids)
    chosen = {start}
    frontier = set(g.neighbors(start))
    while len(chosen) < size and frontier:
        v = rng.choice(sorted(frontier))
        chosen.add(v)
        frontier |= set(g.neighbors(v))
        frontier -= chosen
    return chosen


def random_factorization(rng: random.Random, max_holes: int = 8, max_cycles: int = 8, page=None):
    """A random admissible factorization: holes split into orbits, each
    orbit joined by a random tree of interchanges, cycles enclosing random
    nonempty hole sets."""
    from .nlf import DISK, SPHERE, Factorization
    page = page or rng.choice([DISK, SPHERE])
    holes = [f"h{i + 1}" for i in range(rng.randint(1, max_holes))]
    shuffled = holes[:]
    rng.shuffle(shuffled)
    orbits, i = {}, 0
    while i < len(shuffled):
        size = rng.randint(1, len(shuffled) - i)
        orbits[f"o{len(orbits) + 1}"] = shuffled[i:i + size]
        i += size
    inter = []
    for o in orbits.values():
        for j in range(1, len(o)):
            inter.append((o[j], o[rng.randrange(j)]))
    cycles = {}
    for j in range(rng.randint(1, max_cycles)):
        cycles[f"a{j + 1}"] = rng.sample(holes, rng.randint(1, len(holes)))
    return Factorization.build(page, orbits, cycles, inter, holes)
