"""Command line entry point: ``python -m pmlink <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import fixtures
from .calculus import Target, parse_moves, reaches, replay_trace
from .config import DEFAULT_BUDGET
from .embeddings import Mode, find_embedding
from .errors import BudgetExceeded, PlumbingError
from .formats import format_embedding, format_graph, parse_divisor, parse_factorization, parse_graph
from .milnor import fiber_invariants, riemann_roch_chi
from .nlf import (adjunction_genus, c1_evaluate, check_admissible, classify_sphere_classes,
                  h1_w0, h2_kernel, intersection_form)
from .report import ClassifyOptions, classify, emit_report


def _read(path: str, ext: str) -> str:
    """File contents; ``fixture:NAME`` reads a bundled fixture."""
    if path.startswith("fixture:"):
        return fixtures.text(path.split(":", 1)[1], ext)
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _budget(args):
    if args.budget is None:
        return DEFAULT_BUDGET
    return replace(DEFAULT_BUDGET, max_states=args.budget, max_nodes=args.budget)


def cmd_classify(args) -> int:
    g = parse_graph(_read(args.file, "graph"))
    div = parse_divisor(_read(args.divisor, "div")) if args.divisor else None
    opts = ClassifyOptions(budget=_budget(args), divisor=div, seed=args.seed)
    r = classify(g, opts)
    sys.stdout.write(emit_report(r, "json" if args.json else "text", include_timing=args.timing))
    return 0


def cmd_embed(args) -> int:
    g = parse_graph(_read(args.file, "graph"))
    mode = Mode(args.mode.upper())
    try:
        phi = find_embedding(g, mode, basis_budget=args.basis, budget=_budget(args))
    except BudgetExceeded as exc:
        phi, note = None, f"inconclusive: {exc}"
    else:
        note = None if phi is not None else "none"
    if args.json:
        val = note if phi is None else format_embedding(phi).splitlines()
        print(json.dumps({"schema": 1, "mode": mode.value, "embedding": val}, indent=2))
    else:
        sys.stdout.write(format_embedding(phi) if phi is not None else note + "\n")
    return 0


def cmd_fiber(args) -> int:
    g = parse_graph(_read(args.graph, "graph"))
    d = parse_divisor(_read(args.divisor, "div"))
    f = fiber_invariants(g, d)
    rr = riemann_roch_chi(g.without_arrows(), d)
    if args.json:
        print(json.dumps({
            "schema": 1, "euler": f.euler, "total_boundary": f.total_boundary, "genus": f.genus,
            "planar": f.planar,
            "boundary_components": [[v, m, c] for (v, m), c in f.boundary_components],
            "riemann_roch_chi": str(rr)}, indent=2))
    else:
        print(f"euler characteristic: {f.euler}")
        for (v, m), c in f.boundary_components:
            print(f"  arrow at {v} (multiplicity {m}): {c} boundary circle(s)")
        print(f"boundary components: {f.total_boundary}")
        print(f"genus: {f.genus}{' (planar)' if f.planar else ''}")
        print(f"riemann-roch chi: {rr}")
    return 0


def cmd_nlf(args) -> int:
    f = parse_factorization(_read(args.file, "fact"))
    problem = check_admissible(f)
    names = f.cycle_ids
    if problem is not None:
        if args.json:
            print(json.dumps({"schema": 1, "admissible": False, "violation": str(problem)}, indent=2))
        else:
            print(f"not admissible: {problem}")
        return 1
    h1 = h1_w0(f)
    basis = h2_kernel(f)
    gram = intersection_form(basis)
    spheres = classify_sphere_classes(f)
    if args.json:
        print(json.dumps({
            "schema": 1, "admissible": True,
            "h1_w0": {"generators": list(h1.generators), "relations": [list(r) for r in h1.relations]},
            "cycles": list(names),
            "kernel": [{"a": list(x.a), "w": x.w, "c1": c1_evaluate(x),
                        "genus": adjunction_genus(x)} for x in basis],
            "gram": gram,
            "sphere_classes": [{"a": list(x.a), "w": x.w} for x in spheres]}, indent=2))
        return 0
    print("admissible")
    rel = "; ".join(" + ".join(f"{c}{g}" for c, g in zip(r, h1.generators)) + " = 0" for r in h1.relations)
    print(f"H1(W0): generators {', '.join(h1.generators)}" + (f"; relation {rel}" if rel else " (free)"))
    print("H2 basis:")
    for x in basis:
        print(f"  {x.label(names)}   c1 = {c1_evaluate(x)}")
    print("intersection form:")
    for row in gram:
        print("  " + " ".join(f"{v:3d}" for v in row))
    print("sphere classes:")
    for x in spheres:
        print(f"  {x.label(names)}")
    return 0


def cmd_replay(args) -> int:
    g = parse_graph(_read(args.graph, "graph")).without_arrows()
    seq = parse_moves(_read(args.moves, "moves"))
    states = replay_trace(g, seq)
    for m, h in zip(seq, states[1:]):
        print(f"{m}: " + (" ".join(f"{v.id}({v.framing})" for v in h.vertices) or "(empty)"))
    final = states[-1]
    if reaches(final, Target.EMPTY):
        print("reached: empty graph")
    elif reaches(final, Target.ZERO_VERTEX):
        print("reached: single 0-framed vertex")
    else:
        print("final graph:")
        sys.stdout.write(format_graph(final))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget", type=int, default=None, help="node/state cap for searches")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized corpora; never changes a decision")
    p = argparse.ArgumentParser(prog="pmlink", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="rationality, sandwiched and pm with certificates")
    c.add_argument("file")
    c.add_argument("--divisor", help="divisor file; adds Milnor fibre invariants")
    c.add_argument("--timing", action="store_true", help="include timings (not deterministic)")
    c.set_defaults(func=cmd_classify)

    e = sub.add_parser("embed", parents=[common], help="search for an S- or P-embedding")
    e.add_argument("file")
    e.add_argument("--mode", choices=["s", "p", "S", "P"], default="s")
    e.add_argument("--basis", type=int, default=None, help="basis size budget")
    e.set_defaults(func=cmd_embed)

    f = sub.add_parser("fiber", parents=[common], help="Milnor fibre invariants of a divisor")
    f.add_argument("graph")
    f.add_argument("divisor")
    f.set_defaults(func=cmd_fiber)

    n = sub.add_parser("nlf", parents=[common], help="homology of a planar factorization")
    n.add_argument("file")
    n.set_defaults(func=cmd_nlf)

    r = sub.add_parser("replay", parents=[common], help="replay a move file on a graph")
    r.add_argument("graph")
    r.add_argument("moves")
    r.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PlumbingError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
