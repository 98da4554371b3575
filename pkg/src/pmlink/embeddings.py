"""Embeddings of plumbing trees into diagonal lattices.

The target lattice has an orthonormal basis e_1, e_2, ... with e_i . e_i = -1.
Every vertex image has the shape ``e_p - sum(e_n for n in N)`` (or ``-sum``
for the single pure-negative vertex a P-mode embedding may have), and the sum
of the images over any connected subgraph must have entries in {-1, 0, 1}
with exactly one (S mode) or at most one (P mode) +1.

S-embeddings characterise graphs that sit inside a graph blowing down to
nothing; P-embeddings characterise graphs sitting inside a graph blowing
down to a single 0-framed vertex. Both come with blowdown certificates.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Mapping

from .calculus import (EMPTY, MoveSequence, Target, bd, blow_down, blowdown_search,
                       can_blow_down, invert, leaf_form_ok, reaches, replay, resolve_ids)
from .config import DEFAULT_BUDGET, SearchBudget
from .errors import (BudgetExceeded, DimensionMismatch, Inconclusive, InternalError,
                     InvalidGraph, PlumbingError, UnverifiedEmbedding)
from .graph import PlumbingGraph, bfs_order, centroid, connected_subsets, fresh_id, path_between
from .lattice import is_negative_definite


class Mode(str, enum.Enum):
    S = "S"
    P = "P"


@dataclass(frozen=True)
class Image:
    pos: int | None
    neg: frozenset

    @cached_property
    def coeffs(self) -> dict:
        c = dict.fromkeys(self.neg, -1)
        if self.pos is not None:
            c[self.pos] = c.get(self.pos, 0) + 1
        return c

    def vector(self) -> Counter:
        return Counter(self.coeffs)


def image_pairing(a: Image, b: Image) -> int:
    """Pairing in the negative diagonal lattice."""
    va, vb = a.vector(), b.vector()
    return -sum(x * vb.get(i, 0) for i, x in va.items())


@dataclass(frozen=True)
class Embedding:
    mode: Mode
    basis_size: int
    images: Mapping[str, Image]

    def __getitem__(self, v) -> Image:
        return self.images[v]

    def restrict(self, keep) -> "Embedding":
        return Embedding(self.mode, self.basis_size, {v: i for v, i in self.images.items() if v in keep})

    def pure_negative(self) -> list[str]:
        return [v for v, im in self.images.items() if im.pos is None]

    def __str__(self):
        from .formats import format_embedding
        return format_embedding(self)


def make_embedding(mode, images: Mapping[str, tuple], basis_size: int | None = None) -> Embedding:
    """Build from ``{vertex: (pos or None, iterable of negatives)}``."""
    ims = {v: Image(p, frozenset(n)) for v, (p, n) in images.items()}
    used = [i for im in ims.values() for i in ([im.pos] if im.pos else []) + list(im.neg)]
    size = basis_size if basis_size is not None else max(used, default=0)
    return Embedding(Mode(mode), size, ims)


@dataclass(frozen=True)
class Violation:
    kind: str  # "shape", "gram" or "subgraph"
    where: tuple
    message: str

    def __str__(self):
        return f"{self.kind} violation at {', '.join(self.where)}: {self.message}"


def _subgraph_sum_ok(total: Counter, mode: Mode):
    plus = 0
    for x in total.values():
        if x > 1 or x < -1:
            return False
        plus += x == 1
    return plus == 1 if mode is Mode.S else plus <= 1


def verify_embedding(g: PlumbingGraph, phi: Embedding, max_subtrees: int = 2**18):
    """``None`` when ``phi`` is a valid embedding of ``g``, else a ``Violation``.

    Returns ``Inconclusive`` if checking the connected-subgraph condition
    would need more than ``max_subtrees`` subgraphs.
    """
    if set(phi.images) != set(g.ids):
        raise DimensionMismatch("embedding and graph have different vertex sets")
    for im in phi.images.values():
        for i in ([im.pos] if im.pos is not None else []) + list(im.neg):
            if not 1 <= i <= phi.basis_size:
                raise DimensionMismatch(f"basis index {i} outside 1..{phi.basis_size}")
    ids = g.ids
    pure = [v for v in ids if phi[v].pos is None]
    if phi.mode is Mode.S and pure:
        return Violation("shape", (pure[0],), "S mode needs a positive term at every vertex")
    if len(pure) > 1:
        return Violation("shape", tuple(pure[:2]), "at most one vertex may lack a positive term")
    owners = {}
    for v in ids:
        im = phi[v]
        if im.pos is not None and im.pos in im.neg:
            return Violation("shape", (v,), "positive index also appears negatively")
        if im.pos is not None:
            if im.pos in owners:
                return Violation("shape", (owners[im.pos], v), f"both use +e{im.pos}")
            owners[im.pos] = v
    for i, u in enumerate(ids):
        for w in ids[i:]:
            want = g.framing(u) if u == w else int(g.has_edge(u, w))
            got = image_pairing(phi[u], phi[w])
            if got != want:
                return Violation("gram", (u, w), f"pairing {got}, expected {want}")
    try:
        for sub in connected_subsets(g, cap=max_subtrees):
            total = Counter()
            for v in sub:
                for i, x in phi[v].coeffs.items():
                    total[i] += x
            if not _subgraph_sum_ok(total, phi.mode):
                bad = tuple(v for v in ids if v in sub)
                return Violation("subgraph", bad, "subgraph sum " + _fmt_vec(total))
    except OverflowError:
        return Inconclusive("connected-subgraph cap reached", max_subtrees)
    return None


def _fmt_vec(c: Counter) -> str:
    parts = [f"{x:+d}e{i}" for i, x in sorted(c.items()) if x]
    return " ".join(parts) if parts else "0"


# -- basis types -------------------------------------------------------------


@dataclass(frozen=True)
class BasisTypeReport:
    types: Mapping[int, str]  # index -> "T1" | "T2" | "T3" | "T4"

    def count(self, kind: str) -> int:
        return sum(1 for t in self.types.values() if t == kind)

    def indices(self, kind: str) -> list[int]:
        return sorted(i for i, t in self.types.items() if t == kind)


_TYPES = {(1, 0): "T1", (0, 1): "T2", (1, 1): "T3", (1, 2): "T4"}


def classify_basis_elements(phi: Embedding, g: PlumbingGraph | None = None) -> BasisTypeReport:
    """Sort each used basis index by its signed occurrences. With ``g`` the
    embedding is verified first."""
    if g is not None and verify_embedding(g, phi) is not None:
        raise UnverifiedEmbedding("embedding does not verify against the graph")
    plus, minus = Counter(), Counter()
    for im in phi.images.values():
        if im.pos is not None:
            plus[im.pos] += 1
        minus.update(im.neg)
    types = {}
    for i in sorted(set(plus) | set(minus)):
        t = _TYPES.get((plus[i], minus[i]))
        if t is None:
            raise UnverifiedEmbedding(f"index {i} occurs with signs +{plus[i]}/-{minus[i]}")
        types[i] = t
    return BasisTypeReport(types)


# -- search -----------------------------------------------------------------------


class _Search:
    def __init__(self, g: PlumbingGraph, mode: Mode, cap: int, budget: SearchBudget, anchor):
        self.g, self.mode, self.cap, self.budget, self.anchor = g, mode, cap, budget, anchor
        root = centroid(g)
        self.order = bfs_order(g, root)
        self.parent = {root: None}
        seen = {root}
        for v in self.order:
            for n in g.neighbors(v):
                if n not in seen:
                    seen.add(n)
                    self.parent[n] = v
        self.phi: dict[str, Image] = {}
        self.pos_holder: dict[int, str] = {}
        self.neg_holders: dict[int, list] = {}
        self.used = 0
        self.nodes = 0
        self.basis_pruned = False
        self.on_path = {}
        self.subsets = {}

    def path_contains(self, a, b, v):
        key = (b, v)
        if key not in self.on_path:
            self.on_path[key] = frozenset(path_between(self.g, b, v))
        return a in self.on_path[key]

    def parent_sums(self, v):
        """Coefficient sums of the connected subgraphs v joins through its
        parent, each with its count of +1 entries."""
        par = self.parent[v]
        sums = [({}, 0)]
        if par is None:
            return sums
        if v not in self.subsets:
            # phi always holds exactly the vertices before v in self.order
            self.subsets[v] = [tuple(sub) for sub in connected_subsets(
                self.g, cap=self.budget.max_subtrees, containing=par, within=set(self.phi))]
        for sub in self.subsets[v]:
            c = {}
            for x in sub:
                for i, a in self.phi[x].coeffs.items():
                    c[i] = c.get(i, 0) + a
            sums.append((c, sum(1 for a in c.values() if a == 1)))
        return sums

    def options(self, v):
        f = self.g.framing(v)
        pure_taken = any(im.pos is None for im in self.phi.values())
        anchor_pos = self.phi[self.anchor].pos if self.anchor in self.phi else None
        shapes = [True]
        if self.mode is Mode.P and not pure_taken and v != self.anchor:
            shapes.append(False)
        for has_pos in shapes:
            k = -f - 1 if has_pos else -f
            if k < 0:
                continue
            pos_choices = [None]
            if has_pos:
                pos_choices = []
                if v != self.anchor:
                    pos_choices += [e for e, hs in sorted(self.neg_holders.items())
                                    if e not in self.pos_holder and len(hs) == 1]
                pos_choices.append(self.used + 1)
            cands = []
            for e, a in sorted(self.pos_holder.items()):
                if e == anchor_pos:
                    continue
                hs = self.neg_holders.get(e, [])
                if len(hs) == 0 or (len(hs) == 1 and self.path_contains(a, hs[0], v)):
                    cands.append(e)
            for p in pos_choices:
                fresh_from = self.used + 1 + (p == self.used + 1)
                for j in range(min(k, len(cands)), -1, -1):
                    n_fresh = k - j
                    top = fresh_from - 1 + n_fresh
                    if top > self.cap:
                        self.basis_pruned = True
                        continue
                    fresh = tuple(range(fresh_from, fresh_from + n_fresh))
                    for chosen in combinations(cands, j):
                        yield Image(p, frozenset(chosen + fresh)), max(top, self.used)

    def pairing_ok(self, v, im: Image) -> bool:
        for u, other in self.phi.items():
            want = 1 if self.g.has_edge(u, v) else 0
            got = ((other.pos is not None and other.pos in im.neg)
                   + (im.pos is not None and im.pos in other.neg)
                   - len(other.neg & im.neg))
            if got != want:
                return False
        return True

    def sums_ok(self, im: Image, sums) -> bool:
        vec = im.coeffs
        for s, plus in sums:
            for i, x in vec.items():
                old = s.get(i, 0)
                new = old + x
                if new > 1 or new < -1:
                    return False
                plus += (new == 1) - (old == 1)
            if self.mode is Mode.S and plus != 1:
                return False
            if plus > 1:
                return False
        return True

    def assign(self, v, im, used):
        self.phi[v] = im
        saved = self.used
        self.used = used
        if im.pos is not None:
            self.pos_holder[im.pos] = v
        for n in im.neg:
            self.neg_holders.setdefault(n, []).append(v)
        return saved

    def unassign(self, v, im, saved):
        del self.phi[v]
        self.used = saved
        if im.pos is not None:
            del self.pos_holder[im.pos]
        for n in im.neg:
            self.neg_holders[n].pop()
            if not self.neg_holders[n]:
                del self.neg_holders[n]

    def run(self, i=0) -> bool:
        if i == len(self.order):
            return True
        v = self.order[i]
        sums = self.parent_sums(v)
        for im, used in self.options(v):
            self.nodes += 1
            if self.nodes > self.budget.max_nodes:
                raise BudgetExceeded("embedding search node cap reached", self.budget.max_nodes)
            if not self.pairing_ok(v, im) or not self.sums_ok(im, sums):
                continue
            saved = self.assign(v, im, used)
            if self.run(i + 1):
                return True
            self.unassign(v, im, saved)
        return False


def default_basis_budget(g: PlumbingGraph) -> int:
    return sum(max(-f, 0) for f in g.framings.values())


def find_embedding(g: PlumbingGraph, mode="S", basis_budget: int | None = None,
                   budget: SearchBudget = DEFAULT_BUDGET, anchor: str | None = None):
    """Backtracking search for an embedding; ``None`` if none exists.

    With ``anchor`` the anchor's positive index is required never to occur
    negatively. Raises ``BudgetExceeded`` when the node cap is hit, or when
    an explicit basis budget below the default cut off part of the search.
    """
    mode = Mode(mode)
    g = g.without_arrows()
    g.require_spheres()
    if len(g) == 0:
        return Embedding(mode, 0, {})
    g.require_tree()
    if basis_budget is None:
        basis_budget = budget.basis if budget.basis is not None else default_basis_budget(g)
    search = _Search(g, mode, basis_budget, budget, anchor)
    found = search.run()
    if not found:
        if search.basis_pruned and basis_budget < default_basis_budget(g):
            raise BudgetExceeded(f"no embedding within basis budget {basis_budget}", basis_budget)
        return None
    phi = Embedding(mode, search.used, dict(search.phi))
    problem = verify_embedding(g, phi, budget.max_subtrees)
    if problem is not None:
        raise InternalError(f"search produced an invalid embedding: {problem}")
    return phi


# -- certificates ----------------------------------------------------------------


@dataclass(frozen=True)
class SandwichCertificate:
    augmented: PlumbingGraph
    added_leaves: tuple[tuple[str, str], ...]  # (attached vertex, leaf id)
    blowdown: MoveSequence
    target: Target
    embedding: Embedding | None = field(default=None, compare=False)

    def check(self, g: PlumbingGraph) -> bool:
        return check_certificate(g, self)


def check_certificate(g: PlumbingGraph, cert: SandwichCertificate) -> bool:
    """Independent replay: leaves are -1 leaves of ``g`` and the blowdown
    sequence reaches the target."""
    g = g.without_arrows()
    aug = cert.augmented
    if not leaf_form_ok(aug, g, g.ids) or set(aug.ids) - set(g.ids) != {l for _, l in cert.added_leaves}:
        return False
    if g.induced(g.ids).framings != aug.induced(g.ids).framings:
        return False
    try:
        final = replay(aug, cert.blowdown)
    except PlumbingError:
        return False
    return reaches(final, cert.target)


def augment_from_embedding(g: PlumbingGraph, phi: Embedding):
    """Attach a -1 leaf carrying each type-2 index; returns the new graph,
    the new embedding and the list of (vertex, leaf) pairs added."""
    if verify_embedding(g, phi) is not None or phi.mode is not Mode.S:
        raise UnverifiedEmbedding("augmentation needs a verified S-embedding")
    types = classify_basis_elements(phi)
    images = dict(phi.images)
    taken = set(g.ids)
    added = []
    h = g
    for e in types.indices("T2"):
        v = next(x for x in g.ids if e in phi[x].neg)
        leaf = fresh_id(taken, "l")
        taken.add(leaf)
        h = h.add_vertex(leaf, -1, [v])
        images[leaf] = Image(e, frozenset())
        added.append((v, leaf))
    return h, Embedding(Mode.S, phi.basis_size, images), tuple(added)


def guided_blowdown(h: PlumbingGraph, phi: Embedding, keep_last: str | None = None):
    """Blow down vertices whose image is a single basis vector, projecting
    that vector out of the neighbours, until only ``keep_last`` (or nothing)
    is left. Returns the move sequence, or ``None`` if it gets stuck."""
    images = {v: (im.pos, set(im.neg)) for v, im in phi.images.items()}
    moves = []
    while len(h) > (1 if keep_last is not None else 0):
        pick = None
        for v in h.ids:
            if v != keep_last and not images[v][1] and can_blow_down(h, v):
                pick = v
                break
        if pick is None:
            return None
        e = images.pop(pick)[0]
        for _, neg in images.values():
            neg.discard(e)
        h = blow_down(h, pick)
        moves.append(bd(pick))
    if keep_last is not None and h.ids != (keep_last,):
        return None
    return MoveSequence(tuple(moves))


def sandwich_certificate(g: PlumbingGraph, phi: Embedding, budget=DEFAULT_BUDGET) -> SandwichCertificate:
    aug, phi2, added = augment_from_embedding(g, phi)
    seq = guided_blowdown(aug, phi2)
    if seq is None or not _replays_to(aug, seq, Target.EMPTY):
        seq = blowdown_search(aug, Target.EMPTY, budget)
        if not isinstance(seq, MoveSequence):
            raise InternalError("embedding did not yield a blowdown to the empty graph")
    return SandwichCertificate(aug, added, seq, Target.EMPTY, phi)


def _replays_to(g, seq, target) -> bool:
    try:
        return reaches(replay(g, seq), target)
    except PlumbingError:
        return False


def lower(g: PlumbingGraph, v: str) -> PlumbingGraph:
    return g.shift_framing(v, -1)


def pm_certificate_anchored(g: PlumbingGraph, v: str, phi_v: Embedding,
                            budget=DEFAULT_BUDGET) -> SandwichCertificate:
    """pm certificate from an S-embedding of ``g`` with ``v`` lowered by one
    whose positive index at ``v`` never occurs negatively.

    The lowered graph augments and blows down to the empty graph with ``v``
    last; restoring the framing at ``v`` leaves a single 0-framed vertex.
    """
    gv = lower(g, v)
    aug_v, phi2, added = augment_from_embedding(gv, phi_v)
    aug = aug_v.shift_framing(v, 1)
    seq = guided_blowdown(aug_v, phi2, keep_last=v)
    if seq is None or not _replays_to(aug, seq, Target.ZERO_VERTEX):
        seq = blowdown_search(aug, Target.ZERO_VERTEX, budget)
        if not isinstance(seq, MoveSequence):
            raise InternalError("anchored embedding did not yield a blowdown to a 0-vertex")
    return SandwichCertificate(aug, added, seq, Target.ZERO_VERTEX, phi_v)


def anchored_from_p(g: PlumbingGraph, phi: Embedding):
    """Turn a P-embedding into ``(v, S-embedding of g lowered at v)`` with the
    anchor condition, when the shape allows it; else ``None``."""
    pure = phi.pure_negative()
    e_new = phi.basis_size + 1
    images = dict(phi.images)
    if pure:
        v = pure[0]
        images[v] = Image(e_new, phi[v].neg)
    else:
        types = classify_basis_elements(phi)
        t1 = types.indices("T1")
        if not t1:
            return None
        v = next(x for x in g.ids if phi[x].pos == t1[0])
        images[v] = Image(phi[v].pos, phi[v].neg | {e_new})
    cand = Embedding(Mode.S, e_new, images)
    if verify_embedding(lower(g, v), cand) is not None:
        return None
    if any(cand[v].pos in im.neg for im in cand.images.values()):
        return None
    return v, cand


def _prepare_decision(g: PlumbingGraph) -> PlumbingGraph:
    g = g.without_arrows()
    g.require_spheres()
    if len(g) == 0:
        raise InvalidGraph("empty graph")
    g.require_tree()
    return g


def decide_sandwiched(g: PlumbingGraph, budget: SearchBudget = DEFAULT_BUDGET):
    """``(True, certificate)``, ``(False, None)`` or ``(Inconclusive, None)``."""
    g = _prepare_decision(g)
    if not is_negative_definite(g):
        return False, None
    try:
        phi = find_embedding(g, Mode.S, budget=budget)
    except BudgetExceeded as exc:
        return Inconclusive(str(exc), exc.budget), None
    if phi is None:
        return False, None
    cert = sandwich_certificate(g, phi, budget)
    if not check_certificate(g, cert):
        raise InternalError("sandwich certificate failed replay")
    return True, cert


def anchored_route(g: PlumbingGraph, budget: SearchBudget = DEFAULT_BUDGET):
    """Second pm route: some vertex, lowered by one, carries the unique
    type-1 index of an S-embedding. Returns ``(v, embedding)`` or ``None``."""
    for v in g.ids:
        phi_v = find_embedding(lower(g, v), Mode.S, budget=budget, anchor=v)
        if phi_v is not None:
            return v, phi_v
    return None


def decide_pm(g: PlumbingGraph, budget: SearchBudget = DEFAULT_BUDGET, cross_check: bool = True):
    """``(True, certificate)``, ``(False, None)`` or ``(Inconclusive, None)``.

    The primary route searches for a P-embedding. On small graphs the
    anchored S-embedding route is run as well and any disagreement raises
    ``InternalError``.
    """
    g = _prepare_decision(g)
    if not is_negative_definite(g):
        return False, None
    try:
        phi = find_embedding(g, Mode.P, budget=budget)
    except BudgetExceeded as exc:
        return Inconclusive(str(exc), exc.budget), None
    value = phi is not None
    anchored = None
    if cross_check and len(g) <= budget.cross_check_limit:
        try:
            anchored = anchored_route(g, budget)
        except BudgetExceeded:
            anchored = False  # cross-check skipped
        if anchored is not False and (anchored is not None) != value:
            raise InternalError(f"pm routes disagree on {g!r}: P-embedding {value}, "
                                f"anchored route {anchored is not None}")
    if not value:
        return False, None
    pair = anchored_from_p(g, phi)
    if pair is None:
        pair = anchored if anchored else anchored_route(g, budget)
        if pair is None:
            raise InternalError("P-embedding found but no anchored S-embedding")
    v, phi_v = pair
    cert = pm_certificate_anchored(g, v, phi_v, budget)
    if not check_certificate(g, cert):
        raise InternalError("pm certificate failed replay")
    return True, cert


# -- embeddings from blowup sequences ----------------------------------------


def embedding_from_construction(seq: MoveSequence) -> tuple[PlumbingGraph, Embedding]:
    """Embedding of the graph built by a blowup sequence.

    Each blowup introduces a new basis vector e: a point blowup maps the new
    vertex to e, vertex and edge blowups map it to e and subtract e from the
    images of the blown-up vertices. A 0-framed seed starts at the zero
    vector, which gives a P-mode embedding.
    """
    start = seq.start if seq.start is not None else EMPTY
    if len(start) > 1 or (len(start) == 1 and start.vertices[0].framing != 0):
        raise InvalidGraph("construction must start empty or at a single 0-framed vertex")
    seq = resolve_ids(start, seq)
    images = {v: (None, set()) for v in start.ids}
    g = start
    k = 0
    for m in seq:
        if not m.is_blowup:
            raise InvalidGraph("construction uses blowups only")
        k += 1
        for x in m.loci:
            images[x][1].add(k)
        images[m.created] = (k, set())
        g = replay(g, [m])
    mode = Mode.P if len(start) else Mode.S
    phi = Embedding(mode, k, {v: Image(p, frozenset(n)) for v, (p, n) in images.items()})
    return g, phi


def _compact(phi: Embedding) -> Embedding:
    used = sorted({i for im in phi.images.values()
                   for i in ([im.pos] if im.pos is not None else []) + list(im.neg)})
    ren = {i: k for k, i in enumerate(used, 1)}
    ims = {v: Image(ren[im.pos] if im.pos is not None else None, frozenset(ren[n] for n in im.neg))
           for v, im in phi.images.items()}
    return Embedding(phi.mode, len(used), ims)


def rebuild_augmentation(final: PlumbingGraph, keep, start: PlumbingGraph,
                         seq: MoveSequence | None = None):
    """Leaf-form augmentation of ``final`` restricted to ``keep``, rebuilt from
    the lattice embedding of the construction. Returns ``(graph, blowups)``
    with blowups starting at the seed, or ``None``."""
    if seq is None:
        return None
    _, phi = embedding_from_construction(seq)
    sub = final.induced(keep)
    if not sub.is_tree():
        return None
    phi = _compact(phi.restrict(set(keep)))
    if verify_embedding(sub, phi) is not None:
        return None
    if len(start) == 0:
        phi = Embedding(Mode.S, phi.basis_size, phi.images)
        cert = sandwich_certificate(sub, phi)
    else:
        pair = anchored_from_p(sub, phi) or anchored_route(sub)
        if pair is None:
            return None
        cert = pm_certificate_anchored(sub, pair[0], pair[1])
    ups = invert(cert.augmented, cert.blowdown)
    return cert.augmented, ups
