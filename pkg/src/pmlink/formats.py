"""Line-oriented text formats for graphs, divisors, factorizations and
embeddings. Blank lines and ``#`` comments are ignored everywhere."""

from __future__ import annotations

import re

from .errors import DanglingReference, DuplicateId, GraphSyntaxError, ParseError
from .graph import ID_PATTERN, PlumbingGraph, Vertex
from .nlf import Factorization

_INT = re.compile(r"[+-]?\d+\Z")


def _tokens(text: str):
    """Yield (line number, [(column, token), ...]) for non-empty lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]
        if toks:
            yield lineno, toks


def _int(tok, lineno, err=GraphSyntaxError) -> int:
    col, s = tok
    if not _INT.match(s):
        raise err(f"expected an integer, got {s!r}", lineno, col)
    return int(s)


def _id(tok, lineno, err=GraphSyntaxError) -> str:
    col, s = tok
    if not ID_PATTERN.match(s):
        raise err(f"bad identifier {s!r}", lineno, col)
    return s


def _arity(toks, lo, hi, lineno, err=GraphSyntaxError):
    n = len(toks) - 1
    if not lo <= n <= hi:
        want = str(lo) if lo == hi else f"{lo}-{hi}"
        raise err(f"{toks[0][1]} takes {want} arguments, got {n}", lineno, toks[0][0])


def parse_graph(text: str) -> PlumbingGraph:
    vertices: dict[str, Vertex] = {}
    edges: list = []
    arrows: list = []
    for lineno, toks in _tokens(text):
        kw = toks[0][1]
        if kw == "vertex":
            _arity(toks, 2, 3, lineno)
            vid = _id(toks[1], lineno)
            if vid in vertices:
                raise DuplicateId(f"vertex {vid!r} defined twice", lineno, toks[1][0])
            genus = _int(toks[3], lineno) if len(toks) == 4 else 0
            if genus < 0:
                raise GraphSyntaxError("genus must be non-negative", lineno, toks[3][0])
            vertices[vid] = Vertex(vid, _int(toks[2], lineno), genus)
        elif kw == "edge":
            _arity(toks, 2, 2, lineno)
            a, b = _id(toks[1], lineno), _id(toks[2], lineno)
            if a == b:
                raise GraphSyntaxError("loops are not allowed", lineno, toks[2][0])
            edges.append((a, b, lineno, toks))
        elif kw == "arrow":
            _arity(toks, 2, 2, lineno)
            m = _int(toks[2], lineno)
            if m < 1:
                raise GraphSyntaxError("arrow multiplicity must be positive", lineno, toks[2][0])
            arrows.append((_id(toks[1], lineno), m, lineno, toks))
        else:
            raise GraphSyntaxError(f"unknown keyword {kw!r}", lineno, toks[0][0])
    seen = set()
    for a, b, lineno, toks in edges:
        for tok, x in ((toks[1], a), (toks[2], b)):
            if x not in vertices:
                raise DanglingReference(f"edge references unknown vertex {x!r}", lineno, tok[0])
        e = frozenset((a, b))
        if e in seen:
            raise DuplicateId(f"edge {a}-{b} listed twice", lineno, toks[0][0])
        seen.add(e)
    for v, _, lineno, toks in arrows:
        if v not in vertices:
            raise DanglingReference(f"arrow references unknown vertex {v!r}", lineno, toks[1][0])
    return PlumbingGraph(tuple(vertices.values()), frozenset(seen),
                         tuple((v, m) for v, m, _, _ in arrows))


def format_graph(g: PlumbingGraph) -> str:
    lines = []
    for v in g.vertices:
        lines.append(f"vertex {v.id} {v.framing}" + (f" {v.genus}" if v.genus else ""))
    for e in sorted(g.edges, key=lambda e: sorted(g.index[x] for x in e)):
        a, b = sorted(e, key=g.index.__getitem__)
        lines.append(f"edge {a} {b}")
    for v, m in g.arrows:
        lines.append(f"arrow {v} {m}")
    return "\n".join(lines) + "\n"


def parse_divisor(text: str) -> dict:
    d = {}
    for lineno, toks in _tokens(text):
        if toks[0][1] != "coeff":
            raise ParseError(f"unknown keyword {toks[0][1]!r}", lineno, toks[0][0])
        _arity(toks, 2, 2, lineno, ParseError)
        vid = _id(toks[1], lineno, ParseError)
        if vid in d:
            raise DuplicateId(f"coefficient for {vid!r} given twice", lineno, toks[1][0])
        d[vid] = _int(toks[2], lineno, ParseError)
    return d


def format_divisor(d: dict) -> str:
    return "".join(f"coeff {v} {c}\n" for v, c in d.items())


def parse_factorization(text: str) -> Factorization:
    page = None
    holes: list[str] = []
    orbits, cycles, inter = {}, {}, []
    for lineno, toks in _tokens(text):
        kw = toks[0][1]
        if kw == "page":
            _arity(toks, 1, 1, lineno, ParseError)
            if toks[1][1] not in ("disk", "sphere"):
                raise ParseError("page must be disk or sphere", lineno, toks[1][0])
            page = toks[1][1]
        elif kw == "hole":
            _arity(toks, 1, 1, lineno, ParseError)
            h = _id(toks[1], lineno, ParseError)
            if h in holes:
                raise DuplicateId(f"hole {h!r} defined twice", lineno, toks[1][0])
            holes.append(h)
        elif kw in ("orbit", "cycle"):
            if len(toks) < 2:
                raise ParseError(f"{kw} needs an id", lineno, toks[0][0])
            target = orbits if kw == "orbit" else cycles
            name = _id(toks[1], lineno, ParseError)
            if name in target:
                raise DuplicateId(f"{kw} {name!r} defined twice", lineno, toks[1][0])
            members = []
            for tok in toks[2:]:
                h = _id(tok, lineno, ParseError)
                if h not in holes:
                    raise DanglingReference(f"unknown hole {h!r}", lineno, tok[0])
                members.append(h)
            target[name] = members
        elif kw == "interchange":
            _arity(toks, 2, 2, lineno, ParseError)
            pair = []
            for tok in toks[1:]:
                h = _id(tok, lineno, ParseError)
                if h not in holes:
                    raise DanglingReference(f"unknown hole {h!r}", lineno, tok[0])
                pair.append(h)
            inter.append(pair)
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, toks[0][0])
    if page is None:
        raise ParseError("missing page line")
    return Factorization.build(page, orbits, cycles, inter, holes=holes)


def format_factorization(f: Factorization) -> str:
    lines = [f"page {f.page}"]
    lines += [f"hole {h}" for h in f.holes]
    lines += [f"orbit {oid} " + " ".join(o) for oid, o in f.orbits]
    order = {h: i for i, h in enumerate(f.holes)}
    lines += [f"cycle {cid} " + " ".join(sorted(c, key=order.__getitem__)) for cid, c in f.cycles]
    lines += ["interchange " + " ".join(sorted(p, key=order.__getitem__)) for p in f.interchanges]
    return "\n".join(lines) + "\n"


def format_embedding(phi) -> str:
    lines = []
    for v, im in phi.images.items():
        parts = [f"{v} :"]
        if im.pos is not None:
            parts.append(f"+{im.pos}")
        if im.neg:
            parts.append("-")
            parts += [str(n) for n in sorted(im.neg)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_embedding(text: str, mode=None):
    from .embeddings import Embedding, Image, Mode
    images = {}
    for lineno, toks in _tokens(text):
        if len(toks) < 2 or toks[1][1] != ":":
            raise ParseError("expected '<id> : ...'", lineno, toks[0][0])
        vid = _id(toks[0], lineno, ParseError)
        pos, neg, i = None, [], 2
        if i < len(toks) and toks[i][1].startswith("+"):
            pos = _int((toks[i][0], toks[i][1][1:]), lineno, ParseError)
            i += 1
        if i < len(toks):
            if toks[i][1] != "-":
                raise ParseError("expected '-' before negative indices", lineno, toks[i][0])
            neg = [_int(t, lineno, ParseError) for t in toks[i + 1:]]
        images[vid] = Image(pos, frozenset(neg))
    if mode is None:
        mode = Mode.P if any(im.pos is None for im in images.values()) else Mode.S
    used = [x for im in images.values() for x in ([im.pos] if im.pos else []) + list(im.neg)]
    return Embedding(Mode(mode), max(used, default=0), images)
