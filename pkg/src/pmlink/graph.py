"""Plumbing graphs: weighted simple graphs of spheres with arrowheads.

Vertex ids are opaque strings. They survive every move in the blowup
calculus, so certificates can always name vertices of the input graph.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import Disconnected, GenusNotSupported, InvalidGraph

ID_PATTERN = re.compile(r"[A-Za-z0-9_]+\Z")

Divisor = dict  # vertex id -> int (or Fraction for rational solutions)


@dataclass(frozen=True)
class Vertex:
    id: str
    framing: int
    genus: int = 0


@dataclass(frozen=True)
class PlumbingGraph:
    vertices: tuple[Vertex, ...] = ()
    edges: frozenset = frozenset()
    arrows: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if not isinstance(v.id, str) or not ID_PATTERN.match(v.id):
                raise InvalidGraph(f"bad vertex id {v.id!r}")
            if v.id in seen:
                raise InvalidGraph(f"duplicate vertex id {v.id!r}")
            if v.genus < 0:
                raise InvalidGraph(f"negative genus at {v.id!r}")
            seen.add(v.id)
        for e in self.edges:
            if len(e) != 2:
                raise InvalidGraph(f"loop or malformed edge {sorted(e)!r}")
            for x in e:
                if x not in seen:
                    raise InvalidGraph(f"edge references unknown vertex {x!r}")
        for vid, mult in self.arrows:
            if vid not in seen:
                raise InvalidGraph(f"arrow references unknown vertex {vid!r}")
            if mult < 1:
                raise InvalidGraph(f"arrow multiplicity must be positive, got {mult}")

    def _key(self):
        return (frozenset(self.vertices), self.edges, tuple(sorted(self.arrows)))

    def __eq__(self, other):
        # vertex order is presentation only
        if not isinstance(other, PlumbingGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @classmethod
    def build(cls, framings: Mapping[str, int], edges: Iterable = (), arrows: Iterable = (),
              genera: Mapping[str, int] | None = None) -> "PlumbingGraph":
        genera = genera or {}
        verts = tuple(Vertex(str(k), int(f), int(genera.get(k, 0))) for k, f in framings.items())
        es = set()
        for u, w in edges:
            e = frozenset((str(u), str(w)))
            if e in es:
                raise InvalidGraph(f"multi-edge {u}-{w}")
            es.add(e)
        return cls(verts, frozenset(es), tuple((str(v), int(m)) for v, m in arrows))

    # -- lookups -------------------------------------------------------

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.ids)}

    @cached_property
    def framings(self) -> dict[str, int]:
        return {v.id: v.framing for v in self.vertices}

    @cached_property
    def adjacency(self) -> dict[str, frozenset]:
        adj = {v: set() for v in self.ids}
        for e in self.edges:
            u, w = tuple(e)
            adj[u].add(w)
            adj[w].add(u)
        return {v: frozenset(s) for v, s in adj.items()}

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, vid):
        return vid in self.index

    def framing(self, vid: str) -> int:
        return self.framings[vid]

    def genus(self, vid: str) -> int:
        return self.vertices[self.index[vid]].genus

    def neighbors(self, vid: str) -> frozenset:
        return self.adjacency[vid]

    def degree(self, vid: str) -> int:
        """Number of edges at ``vid``; arrows are not counted."""
        return len(self.adjacency[vid])

    def arrow_count(self, vid: str) -> int:
        return sum(1 for v, _ in self.arrows if v == vid)

    def arrows_at(self, vid: str) -> list[int]:
        return [m for v, m in self.arrows if v == vid]

    def has_edge(self, u: str, w: str) -> bool:
        return frozenset((u, w)) in self.edges

    # -- structure -----------------------------------------------------

    def components(self) -> list[list[str]]:
        seen, comps = set(), []
        for s in self.ids:
            if s in seen:
                continue
            comp, queue = [], deque([s])
            seen.add(s)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in sorted(self.adjacency[x], key=self.index.__getitem__):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_forest(self) -> bool:
        return len(self.edges) == len(self.vertices) - len(self.components())

    def is_tree(self) -> bool:
        return len(self.vertices) > 0 and self.is_connected() and self.is_forest()

    def require_spheres(self):
        for v in self.vertices:
            if v.genus != 0:
                raise GenusNotSupported(f"vertex {v.id!r} has genus {v.genus}; only spheres are supported")

    def require_tree(self):
        if not self.is_connected():
            raise Disconnected("graph is not connected")
        if not self.is_forest():
            raise InvalidGraph("graph has a cycle; only trees are supported")

    # -- edits (all return new graphs) ---------------------------------

    @classmethod
    def _trusted(cls, vertices, edges, arrows, **cached) -> "PlumbingGraph":
        """Skip validation for edits that cannot break it; ``cached`` seeds
        cached properties that the edit leaves unchanged."""
        g = object.__new__(cls)
        object.__setattr__(g, "vertices", vertices)
        object.__setattr__(g, "edges", edges)
        object.__setattr__(g, "arrows", arrows)
        g.__dict__.update(cached)
        return g

    def with_framing(self, vid: str, framing: int) -> "PlumbingGraph":
        i = self.index[vid]
        v = self.vertices[i]
        verts = self.vertices[:i] + (Vertex(v.id, framing, v.genus),) + self.vertices[i + 1:]
        return PlumbingGraph._trusted(verts, self.edges, self.arrows, ids=self.ids, index=self.index,
                                      adjacency=self.adjacency)

    def shift_framing(self, vid: str, delta: int) -> "PlumbingGraph":
        return self.with_framing(vid, self.framing(vid) + delta)

    def add_vertex(self, vid: str, framing: int, neighbors: Iterable[str] = ()) -> "PlumbingGraph":
        if vid in self.index:
            raise InvalidGraph(f"vertex {vid!r} already present")
        edges = set(self.edges)
        edges.update(frozenset((vid, n)) for n in neighbors)
        return PlumbingGraph(self.vertices + (Vertex(vid, framing),), frozenset(edges), self.arrows)

    def remove_vertex(self, vid: str) -> "PlumbingGraph":
        verts = tuple(v for v in self.vertices if v.id != vid)
        edges = frozenset(e for e in self.edges if vid not in e)
        arrows = tuple(a for a in self.arrows if a[0] != vid)
        return PlumbingGraph._trusted(verts, edges, arrows)

    def add_edge(self, u: str, w: str) -> "PlumbingGraph":
        e = frozenset((u, w))
        if e in self.edges:
            raise InvalidGraph(f"edge {u}-{w} already present")
        return PlumbingGraph(self.vertices, self.edges | {e}, self.arrows)

    def remove_edge(self, u: str, w: str) -> "PlumbingGraph":
        return PlumbingGraph._trusted(self.vertices, self.edges - {frozenset((u, w))}, self.arrows)

    def with_arrows(self, arrows: Iterable) -> "PlumbingGraph":
        return PlumbingGraph(self.vertices, self.edges, tuple((v, int(m)) for v, m in arrows))

    def without_arrows(self) -> "PlumbingGraph":
        if not self.arrows:
            return self
        return PlumbingGraph._trusted(self.vertices, self.edges, (), ids=self.ids, index=self.index,
                                      adjacency=self.adjacency)

    def induced(self, keep: Iterable[str]) -> "PlumbingGraph":
        keep = set(keep)
        verts = tuple(v for v in self.vertices if v.id in keep)
        edges = frozenset(e for e in self.edges if e <= keep)
        arrows = tuple(a for a in self.arrows if a[0] in keep)
        return PlumbingGraph._trusted(verts, edges, arrows)

    def relabel(self, mapping: Mapping[str, str]) -> "PlumbingGraph":
        m = lambda x: mapping.get(x, x)  # noqa: E731
        verts = tuple(Vertex(m(v.id), v.framing, v.genus) for v in self.vertices)
        edges = frozenset(frozenset(m(x) for x in e) for e in self.edges)
        return PlumbingGraph(verts, edges, tuple((m(v), a) for v, a in self.arrows))

    def __repr__(self):
        vs = " ".join(f"{v.id}:{v.framing}" for v in self.vertices)
        es = " ".join("-".join(sorted(e)) for e in sorted(self.edges, key=sorted))
        ar = " ".join(f"{v}->{m}" for v, m in self.arrows)
        return f"PlumbingGraph({vs}; {es}" + (f"; {ar})" if ar else ")")


def fresh_id(taken, prefix: str = "n") -> str:
    """Smallest ``<prefix><k>`` (k >= 1) not in ``taken``."""
    k = 1
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}"


def pairing(g: PlumbingGraph, d: Mapping[str, int], vid: str):
    """Intersection number D . E_v (edges only, arrows ignored)."""
    total = d.get(vid, 0) * g.framing(vid)
    for n in g.adjacency[vid]:
        total += d.get(n, 0)
    return total


def self_intersection(g: PlumbingGraph, d: Mapping[str, int]):
    return sum(c * pairing(g, d, v) for v, c in d.items() if c)


# -- canonical forms ----------------------------------------------------


def _tree_centers(nodes: list[str], adj) -> list[str]:
    if len(nodes) <= 2:
        return list(nodes)
    deg = {v: len(adj[v]) for v in nodes}
    layer = [v for v in nodes if deg[v] <= 1]
    remaining = len(nodes)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for n in adj[v]:
                deg[n] -= 1
                if deg[n] == 1:
                    nxt.append(n)
            deg[v] = 0
        layer = nxt
    return layer


def _encode(root: str, parent, adj, label) -> str:
    # iterative post-order keeps deep chains off the Python stack
    order, stack = [], [(root, parent)]
    while stack:
        v, p = stack.pop()
        order.append((v, p))
        for n in adj[v]:
            if n != p:
                stack.append((n, v))
    codes: dict[str, str] = {}
    for v, p in reversed(order):
        kids = sorted(codes.pop(n) for n in adj[v] if n != p)
        codes[v] = "(" + label(v) + "".join(kids) + ")"
    return codes[root]


def canonical_form(g: PlumbingGraph, with_arrows: bool = True) -> tuple:
    """Isomorphism invariant of a weighted forest that is complete for forests.

    Uses the centre-rooted AHU encoding on (framing, genus, arrow multiset)
    labels. Raises for graphs with cycles.
    """
    cache = g.__dict__.setdefault("_canonical", {})
    if with_arrows not in cache:
        cache[with_arrows] = _canonical_form(g, with_arrows)
    return cache[with_arrows]


def _canonical_form(g: PlumbingGraph, with_arrows: bool) -> tuple:
    if not g.is_forest():
        raise InvalidGraph("canonical_form is only defined for forests")
    adj = g.adjacency
    arrows = {}
    if with_arrows:
        for v, m in g.arrows:
            arrows.setdefault(v, []).append(m)

    def label(v):
        s = str(g.framing(v))
        gv = g.genus(v)
        if gv:
            s += f"g{gv}"
        if v in arrows:
            s += "a" + ",".join(map(str, sorted(arrows[v])))
        return s

    comps = []
    for comp in g.components():
        centers = _tree_centers(comp, adj)
        if len(centers) == 1:
            comps.append(_encode(centers[0], None, adj, label))
        else:
            a, b = centers
            # root at the central edge: encode both halves, order them
            ea, eb = _encode(a, b, adj, label), _encode(b, a, adj, label)
            comps.append("[" + "".join(sorted((ea, eb))) + "]")
    return tuple(sorted(comps))


def tree_isomorphic(g: PlumbingGraph, h: PlumbingGraph, with_arrows: bool = True) -> bool:
    return len(g) == len(h) and canonical_form(g, with_arrows) == canonical_form(h, with_arrows)


def bfs_order(g: PlumbingGraph, root: str) -> list[str]:
    order, seen, queue = [], {root}, deque([root])
    while queue:
        x = queue.popleft()
        order.append(x)
        for y in sorted(g.adjacency[x], key=g.index.__getitem__):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return order


def centroid(g: PlumbingGraph) -> str:
    """A vertex minimising the largest remaining branch; ties by vertex order."""
    best, best_size = None, None
    for v in g.ids:
        largest = 0
        for n0 in g.adjacency[v]:
            size, seen, queue = 0, {v, n0}, deque([n0])
            while queue:
                x = queue.popleft()
                size += 1
                for y in g.adjacency[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            largest = max(largest, size)
        if best_size is None or largest < best_size:
            best, best_size = v, largest
    return best


def path_between(g: PlumbingGraph, a: str, b: str) -> list[str]:
    prev = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in g.adjacency[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    if b not in prev:
        return []
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def connected_subsets(g: PlumbingGraph, cap: int | None = None, containing: str | None = None,
                      within: set | None = None):
    """Yield every connected vertex subset (as frozenset).

    ``containing`` restricts to subsets through one vertex, ``within`` to a
    vertex subset. Uses the standard extension enumeration so each subset
    appears exactly once. Stops with ``OverflowError`` past ``cap``.
    """
    verts = [v for v in g.ids if within is None or v in within]
    pos = {v: i for i, v in enumerate(verts)}
    adj = {v: [n for n in g.adjacency[v] if n in pos] for v in verts}
    count = 0
    roots = [containing] if containing is not None else verts
    for root in roots:
        # subsets whose minimum-position vertex is ``root`` (or all, if anchored)
        def allowed(x):
            return containing is not None or pos[x] > pos[root]

        stack = [(frozenset([root]), frozenset(n for n in adj[root] if allowed(n)), frozenset())]
        while stack:
            current, frontier, banned = stack.pop()
            count += 1
            if cap is not None and count > cap:
                raise OverflowError(f"more than {cap} connected subsets")
            yield current
            banned_now = set(banned)
            for x in sorted(frontier, key=pos.__getitem__):
                new_front = (frontier - {x}) | frozenset(
                    n for n in adj[x] if allowed(n) and n not in current and n not in banned_now
                    and n not in frontier)
                stack.append((current | {x}, frozenset(new_front - banned_now), frozenset(banned_now)))
                banned_now.add(x)
