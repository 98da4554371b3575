"""Blowup and blowdown moves, blowdown search, and augmentation rewriting."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .config import DEFAULT_BUDGET, SearchBudget
from .errors import (Inconclusive, InvalidGraph, InvalidSequence, MissingLocus,
                     NotBlowdownable, ParseError, PlumbingError)
from .graph import PlumbingGraph, canonical_form, fresh_id


class Target(enum.Enum):
    EMPTY = "empty"
    ZERO_VERTEX = "zero-vertex"


BLOWUP_KINDS = ("bu_p", "bu_v", "bu_e")


@dataclass(frozen=True)
class Move:
    """One move. ``loci`` holds 0 (point), 1 (vertex) or 2 (edge) ids for
    blowups and the blown-down vertex for ``bd``."""

    kind: str
    loci: tuple[str, ...]
    created: str | None = None

    def __post_init__(self):
        expected = {"bu_p": 0, "bu_v": 1, "bu_e": 2, "bd": 1}
        if self.kind not in expected:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if len(self.loci) != expected[self.kind]:
            raise ValueError(f"{self.kind} takes {expected[self.kind]} ids, got {len(self.loci)}")

    @property
    def is_blowup(self) -> bool:
        return self.kind in BLOWUP_KINDS

    def __str__(self):
        return " ".join((self.kind,) + self.loci)


@dataclass(frozen=True)
class MoveSequence:
    moves: tuple[Move, ...] = ()
    start: PlumbingGraph | None = None  # only needed when replaying from a seed

    def __len__(self):
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def __getitem__(self, i):
        return self.moves[i]

    def then(self, *moves: Move) -> "MoveSequence":
        return replace(self, moves=self.moves + tuple(moves))


def bd(v: str) -> Move:
    return Move("bd", (v,))


def bu_v(v: str, created: str | None = None) -> Move:
    return Move("bu_v", (v,), created)


def bu_e(u: str, w: str, created: str | None = None) -> Move:
    return Move("bu_e", (u, w), created)


def bu_p(created: str | None = None) -> Move:
    return Move("bu_p", (), created)


ZERO_SEED = PlumbingGraph.build({"s": 0})
EMPTY = PlumbingGraph()


# -- single moves ------------------------------------------------------


def blow_up(g: PlumbingGraph, locus=None, new_id: str | None = None) -> PlumbingGraph:
    """Blow up at a vertex id, an edge ``(u, w)``, or (``locus=None``) a point
    off the configuration, which adds an isolated -1 vertex."""
    n = new_id or fresh_id(g.index)
    if n in g:
        raise InvalidGraph(f"vertex {n!r} already present")
    if locus is None:
        return g.add_vertex(n, -1)
    if isinstance(locus, str):
        if locus not in g:
            raise MissingLocus(f"no vertex {locus!r}")
        return g.shift_framing(locus, -1).add_vertex(n, -1, [locus])
    u, w = locus
    if u not in g or w not in g or not g.has_edge(u, w):
        raise MissingLocus(f"no edge {u}-{w}")
    h = g.remove_edge(u, w).shift_framing(u, -1).shift_framing(w, -1)
    return h.add_vertex(n, -1, [u, w])


def can_blow_down(g: PlumbingGraph, v: str) -> bool:
    if v not in g or g.framing(v) != -1 or g.genus(v) != 0 or g.arrow_count(v):
        return False
    nb = g.neighbors(v)
    if len(nb) > 2:
        return False
    if len(nb) == 2:
        a, b = tuple(nb)
        return not g.has_edge(a, b)
    return True


def blow_down(g: PlumbingGraph, v: str) -> PlumbingGraph:
    if v not in g:
        raise MissingLocus(f"no vertex {v!r}")
    if not can_blow_down(g, v):
        raise NotBlowdownable(
            f"cannot blow down {v!r} (framing {g.framing(v)}, degree {g.degree(v)}, "
            f"arrows {g.arrow_count(v)})")
    nb = sorted(g.neighbors(v), key=g.index.__getitem__)
    h = g.remove_vertex(v)
    for u in nb:
        h = h.shift_framing(u, 1)
    if len(nb) == 2:
        h = h.add_edge(*nb)
    return h


def apply_move(g: PlumbingGraph, m: Move) -> tuple[PlumbingGraph, Move]:
    """Apply ``m``; the returned move records the id actually created."""
    if m.kind == "bd":
        return blow_down(g, m.loci[0]), m
    n = m.created or fresh_id(g.index)
    locus = None if m.kind == "bu_p" else (m.loci[0] if m.kind == "bu_v" else m.loci)
    return blow_up(g, locus, n), replace(m, created=n)


def replay(g: PlumbingGraph | None, seq: MoveSequence | Iterable[Move]) -> PlumbingGraph:
    return replay_trace(g, seq)[-1]


def replay_trace(g: PlumbingGraph | None, seq) -> list[PlumbingGraph]:
    """All intermediate graphs, first to last. ``g=None`` uses the sequence start."""
    if g is None:
        g = seq.start if isinstance(seq, MoveSequence) and seq.start is not None else EMPTY
    states = [g]
    for i, m in enumerate(seq):
        try:
            g, _ = apply_move(g, m)
        except PlumbingError as exc:
            raise InvalidSequence(f"move {i + 1} ({m}) failed: {exc}") from exc
        states.append(g)
    return states


def resolve_ids(g: PlumbingGraph, seq) -> MoveSequence:
    """Copy of ``seq`` with every created id filled in."""
    out = []
    for i, m in enumerate(seq):
        try:
            g, m = apply_move(g, m)
        except PlumbingError as exc:
            raise InvalidSequence(f"move {i + 1} ({m}) failed: {exc}") from exc
        out.append(m)
    start = seq.start if isinstance(seq, MoveSequence) else None
    return MoveSequence(tuple(out), start)


def reaches(g: PlumbingGraph, target: Target) -> bool:
    if target is Target.EMPTY:
        return len(g) == 0
    return len(g) == 1 and g.vertices[0].framing == 0 and not g.arrows and g.vertices[0].genus == 0


# -- search --------------------------------------------------------------


def _dead(g: PlumbingGraph, target: Target) -> bool:
    fr = g.framings
    if target is Target.EMPTY:
        return any(f >= 0 for f in fr.values())
    if any(f > 0 for f in fr.values()):
        return True
    zeros = [v for v, f in fr.items() if f == 0]
    return len(zeros) > 1 or any(g.degree(v) for v in zeros)


# Canonical forms of states proven not to reach each target. Whether a state
# blows down is a property of its isomorphism class, so the sets are shared
# between searches; they are dropped when they grow past _FAILED_LIMIT.
_FAILED: dict = {t: set() for t in Target}
_FAILED_LIMIT = 2_000_000


def blowdown_search(g: PlumbingGraph, target: Target = Target.EMPTY,
                    budget: SearchBudget = DEFAULT_BUDGET):
    """Blowdown sequence from ``g`` to ``target``.

    Returns a ``MoveSequence``, ``None`` when exhaustive search proves there
    is none, or ``Inconclusive`` when the state cap is hit. Successors are
    tried in order of their canonical form, so the result is deterministic.
    """
    if g.arrows:
        raise InvalidGraph("blowdown search needs a graph without arrows")
    g.require_spheres()
    if not g.is_forest():
        raise InvalidGraph("blowdown search is limited to forests")
    failed = _FAILED[target]
    if len(failed) > _FAILED_LIMIT:
        failed.clear()
    states = 0
    path: list[Move] = []

    def dfs(h: PlumbingGraph) -> bool:
        nonlocal states
        if reaches(h, target):
            return True
        if _dead(h, target):
            return False
        key = canonical_form(h)
        if key in failed:
            return False
        states += 1
        if states > budget.max_states:
            raise _Budget()
        succ = []
        for v in h.ids:
            if can_blow_down(h, v):
                nxt = blow_down(h, v)
                succ.append((canonical_form(nxt), h.index[v], v, nxt))
        succ.sort(key=lambda t: (t[0], t[1]))
        seen = set()
        for key2, _, v, nxt in succ:
            if key2 in seen:
                continue
            seen.add(key2)
            path.append(bd(v))
            if dfs(nxt):
                return True
            path.pop()
        failed.add(key)
        return False

    try:
        found = dfs(g)
    except _Budget:
        return Inconclusive("blowdown search state cap reached", budget.max_states,
                            {"states": states})
    return MoveSequence(tuple(path)) if found else None


class _Budget(Exception):
    pass


def all_blowdown_orders(g: PlumbingGraph, target: Target) -> bool:
    """Unmemoised enumeration of every blowdown order (test oracle, tiny graphs)."""
    if reaches(g, target):
        return True
    return any(all_blowdown_orders(blow_down(g, v), target)
               for v in g.ids if can_blow_down(g, v))


def invert(g: PlumbingGraph, seq) -> MoveSequence:
    """Turn a blowdown sequence from ``g`` into blowups rebuilding ``g``.

    The result starts at the final graph of ``seq`` and recreates every
    removed vertex under its original id.
    """
    ups = []
    for m in seq:
        if m.kind != "bd":
            raise InvalidSequence("invert expects blowdowns only")
        v = m.loci[0]
        nb = sorted(g.neighbors(v), key=g.index.__getitem__)
        if len(nb) == 0:
            ups.append(bu_p(v))
        elif len(nb) == 1:
            ups.append(bu_v(nb[0], v))
        else:
            ups.append(bu_e(nb[0], nb[1], v))
        g = blow_down(g, v)
    return MoveSequence(tuple(reversed(ups)), g)


# -- augmentation rewriting ---------------------------------------------


def leaf_form_ok(full: PlumbingGraph, reference: PlumbingGraph, keep) -> bool:
    """``full`` restricted to ``keep`` equals ``reference`` restricted to
    ``keep``, and everything else is a -1 leaf hanging off ``keep``."""
    keep = set(keep)
    a, b = full.induced(keep), reference.induced(keep)
    if a.framings != b.framings or a.edges != b.edges:
        return False
    for v in full.ids:
        if v in keep:
            continue
        nb = full.neighbors(v)
        if full.framing(v) != -1 or len(nb) != 1 or not nb <= keep:
            return False
    return True


def normalize_augmentation(seq: MoveSequence, keep: Iterable[str]) -> tuple[PlumbingGraph, MoveSequence]:
    """Rewrite a blowup sequence so that everything outside ``keep`` becomes a
    -1 leaf, with the induced graph on ``keep`` unchanged.

    Blowups creating kept vertices are retargeted at their kept loci, the
    rest are dropped, and missing framing is restored with extra leaves.
    When that does not produce leaf form (for instance when the seed vertex
    is not kept) the augmentation is rebuilt from a lattice embedding.
    """
    start = seq.start if seq.start is not None else EMPTY
    resolved = resolve_ids(start, seq)
    if any(not m.is_blowup for m in resolved):
        raise InvalidSequence("normalize_augmentation expects blowups only")
    final = replay(start, resolved)
    keep = set(keep)
    if not keep <= set(final.ids):
        raise InvalidSequence("keep set is not a subset of the final vertices")

    rewritten = _rewrite(start, resolved, keep, final)
    if rewritten is not None:
        return rewritten
    from .embeddings import rebuild_augmentation  # lattice route, lazy to avoid a cycle
    out = rebuild_augmentation(final, keep, start, resolved)
    if out is None:
        raise InvalidSequence("could not bring the augmentation into leaf form")
    return out


def _rewrite(start, resolved, keep, final):
    kept = keep | set(start.ids)
    cur = start
    moves = []
    try:
        for m in resolved:
            if m.created not in kept:
                continue
            loci = tuple(x for x in m.loci if x in kept)
            if len(loci) == 2:
                nm = bu_e(*loci, created=m.created)
            elif len(loci) == 1:
                nm = bu_v(loci[0], created=m.created)
            else:
                nm = bu_p(created=m.created)
            cur, nm = apply_move(cur, nm)
            moves.append(nm)
        taken = set(cur.ids) | set(final.ids)
        for v in sorted(kept, key=lambda x: (x not in start, x)):
            if v not in cur or v not in final:
                return None
            for _ in range(cur.framing(v) - final.framing(v)):
                n = fresh_id(taken)
                taken.add(n)
                cur, nm = apply_move(cur, bu_v(v, n))
                moves.append(nm)
    except PlumbingError:
        return None
    if not leaf_form_ok(cur, final, keep):
        return None
    return cur, MoveSequence(tuple(moves), start)


# -- text form -------------------------------------------------------------


def format_moves(seq, g: PlumbingGraph | None = None) -> str:
    """One move per line. Created ids that differ from the default fresh
    ``n<k>`` choice are written as ``as <id>``."""
    if g is None:
        g = seq.start if isinstance(seq, MoveSequence) and seq.start is not None else EMPTY
    lines = []
    for m in seq:
        if m.kind == "bd":
            g = blow_down(g, m.loci[0])
            lines.append(str(m))
            continue
        default = fresh_id(g.index)
        g, m = apply_move(g, m)
        lines.append(str(m) + ("" if m.created == default else f" as {m.created}"))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_moves(text: str) -> MoveSequence:
    moves = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        created = None
        if len(parts) >= 3 and parts[-2] == "as":
            created = parts[-1]
            parts = parts[:-2]
        kind, loci = parts[0], tuple(parts[1:])
        try:
            moves.append(Move(kind, loci, created))
        except ValueError as exc:
            raise ParseError(str(exc), lineno, raw.find(parts[0]) + 1) from None
    return MoveSequence(tuple(moves))
