"""Reference procedures that do not use lattice embeddings.

They are slow and only meant for cross-checking the embedding-based
decisions on small graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .calculus import MoveSequence, Target, _dead, bd, blow_down, blowdown_search, reaches, replay
from .graph import PlumbingGraph, canonical_form, fresh_id
from .lattice import is_negative_definite


def leaf_bound(g: PlumbingGraph) -> int:
    """sum(-framing - 1) - |g| + 1: the number of -1 leaves an augmentation
    blowing down to the empty graph can need."""
    return sum(-f - 1 for f in g.framings.values()) - len(g) + 1


def _blowdownable_core(h: PlumbingGraph, v: str) -> bool:
    nb = h.neighbors(v)
    if h.framing(v) > -1 or len(nb) > 2:
        return False
    if len(nb) == 2:
        a, b = tuple(nb)
        return not h.has_edge(a, b)
    return True


# least leaf cost per canonical form, shared between calls
_MIN_COST: dict = {t: {} for t in Target}
_MIN_COST_LIMIT = 2_000_000


def min_leaves(g: PlumbingGraph, target: Target):
    """Least number of -1 leaves to attach to ``g`` so that the result blows
    down to ``target``, as ``(count, attaching vertex per leaf, order in
    which the vertices of g are blown down)``; ``None`` if no number works.

    Leaves on a vertex are always blown down right before the vertex itself,
    so the search runs on ``g`` alone: blowing down a vertex of framing f
    costs -1 - f leaves, and for the 0-vertex target the survivor of
    framing f costs -f.
    """
    memo = _MIN_COST[target]
    if len(memo) > _MIN_COST_LIMIT:
        memo.clear()

    def moves(h):
        for v in h.ids:
            if _blowdownable_core(h, v):
                yield v, -1 - h.framing(v), blow_down(h.with_framing(v, -1), v)

    def final_cost(h):
        if target is Target.EMPTY:
            return 0 if len(h) == 0 else None
        if len(h) == 1 and h.framing(h.ids[0]) <= 0:
            return -h.framing(h.ids[0])
        return None

    def cost(h):
        if _dead(h, target) and final_cost(h) is None:
            return None
        key = canonical_form(h)
        if key not in memo:
            opts = [c for c in [final_cost(h)] if c is not None]
            for _, pay, nxt in moves(h):
                sub = cost(nxt)
                if sub is not None:
                    opts.append(pay + sub)
            memo[key] = min(opts) if opts else None
        return memo[key]

    total = cost(g)
    if total is None:
        return None
    anchors, order, h, left = [], [], g, total
    while True:
        fc = final_cost(h)
        if fc is not None and fc == left:
            anchors += [h.ids[0]] * fc if fc else []
            break
        for v, pay, nxt in moves(h):
            sub = cost(nxt)
            if sub is not None and pay + sub == left:
                anchors += [v] * pay
                order.append(v)
                h, left = nxt, sub
                break
        else:
            raise AssertionError("inconsistent memo in min_leaves")
    return total, tuple(anchors), tuple(order)


def augment_with_leaves(g: PlumbingGraph, anchors) -> tuple[PlumbingGraph, list]:
    taken = set(g.ids)
    h = g
    added = []
    for v in anchors:
        leaf = fresh_id(taken, "o")
        taken.add(leaf)
        h = h.add_vertex(leaf, -1, [v])
        added.append((v, leaf))
    return h, added


@dataclass(frozen=True)
class OracleResult:
    value: bool
    leaves: int | None = None
    augmented: PlumbingGraph | None = None
    blowdown: MoveSequence | None = None


def augmentation_oracle(g: PlumbingGraph, target: Target, bound: int | None = None) -> OracleResult:
    """Is there an augmentation by at most ``bound`` -1 leaves blowing down
    to ``target``? Positive answers come with the augmented graph and an
    explicit blowdown sequence, which is replayed before returning."""
    g = g.without_arrows()
    if not is_negative_definite(g):
        return OracleResult(False)
    if bound is None:
        bound = leaf_bound(g) + (target is Target.ZERO_VERTEX)
    found = min_leaves(g, target)
    if found is None or found[0] > bound:
        return OracleResult(False, None if found is None else found[0])
    aug, added = augment_with_leaves(g, found[1])
    leaves_of: dict = {}
    for v, leaf in added:
        leaves_of.setdefault(v, []).append(leaf)
    moves = []
    for v in found[2]:
        moves += [bd(leaf) for leaf in leaves_of.pop(v, [])] + [bd(v)]
    moves += [bd(leaf) for rest in leaves_of.values() for leaf in rest]
    seq = MoveSequence(tuple(moves))
    if not reaches(replay(aug, seq), target):
        raise AssertionError(f"leaf augmentation of {g!r} did not blow down")
    return OracleResult(True, found[0], aug, seq)


def literal_augmentation_oracle(g: PlumbingGraph, target: Target, bound: int) -> bool:
    """Try every distribution of up to ``bound`` leaves (tiny graphs only)."""
    ids = g.ids
    for counts in product(range(bound + 1), repeat=len(ids)):
        if sum(counts) > bound:
            continue
        anchors = [v for v, c in zip(ids, counts) for _ in range(c)]
        aug, _ = augment_with_leaves(g, anchors)
        if blowdown_search(aug, target) is not None:
            return True
    return False


def brute_definiteness(rows, bound: int = 3) -> str:
    """Classify x^T Q x over the integer box [-bound, bound]^n."""
    q = np.array(rows, dtype=np.int64)
    n = len(rows)
    if n == 0:
        return "NegativeDefinite"
    grid = np.array(list(product(range(-bound, bound + 1), repeat=n)), dtype=np.int64)
    grid = grid[np.any(grid != 0, axis=1)]
    vals = np.einsum("ij,jk,ik->i", grid, q, grid)
    if np.any(vals > 0):
        return "Other"
    if np.any(vals == 0):
        return "NegativeSemidefinite"
    return "NegativeDefinite"


def genus_zero_shapes_bruteforce(f, bound: int = 2):
    """All kernel classes with |a_i| <= bound, w >= 0 and adjunction genus 0.

    Returns an integer array of rows ``(a_1..a_k, w)``; vectorised with numpy
    because the box has (2 bound + 1)^k points.
    """
    from .nlf import DISK, _incidence
    k = len(f.cycles)
    if k == 0:
        return np.zeros((0, 1), dtype=np.int64)
    grid = np.array(list(product(range(-bound, bound + 1), repeat=k)), dtype=np.int64)
    inc = np.array(_incidence(f), dtype=np.int64)  # orbits x cycles
    sums = grid @ inc.T
    sizes = np.array([len(o) for _, o in f.orbits], dtype=np.int64)
    if f.page == DISK:
        ok = np.all(sums == 0, axis=1)
        w = np.zeros(len(grid), dtype=np.int64)
    else:
        t = sums[:, 0] // sizes[0]
        ok = (sums[:, 0] % sizes[0] == 0) & np.all(sums == np.outer(t, sizes), axis=1)
        w = -t
    nonzero = np.any(grid != 0, axis=1)
    twice_g = 2 - 2 * w - grid.sum(axis=1) - (grid * grid).sum(axis=1)
    keep = ok & nonzero & (w >= 0) & (twice_g == 0)
    return np.column_stack([grid[keep], w[keep]])
