"""The classification pipeline and its JSON / text reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .calculus import Target, blow_down, format_moves
from .config import DEFAULT_BUDGET, SearchBudget
from .embeddings import Mode, SandwichCertificate, check_certificate, decide_pm, decide_sandwiched, find_embedding
from .errors import BudgetExceeded, Inconclusive, InternalError, NotNegativeDefinite, PlumbingError
from .formats import format_embedding, format_graph
from .lattice import classify_definiteness, intersection_matrix
from .milnor import fiber_invariants
from .rationality import fundamental_cycle

SCHEMA = 1


@dataclass(frozen=True)
class ClassifyOptions:
    budget: SearchBudget = DEFAULT_BUDGET
    divisor: dict | None = None
    embeddings: bool = True
    seed: int | None = None  # recorded only; no decision depends on it


@dataclass
class Report:
    graph: object
    definiteness: object
    laufer: object = None  # LauferTrace, or None when not negative definite
    sandwiched: object = None
    sandwiched_certificate: SandwichCertificate | None = None
    pm: object = None
    pm_certificate: SandwichCertificate | None = None
    embeddings: dict = field(default_factory=dict)
    fiber: object = None
    fiber_error: str | None = None
    timing: dict = field(default_factory=dict)
    options: ClassifyOptions = field(default_factory=ClassifyOptions)

    @property
    def rational(self):
        return None if self.laufer is None else self.laufer.rational


def _timed(timing, name, fn):
    t0 = time.perf_counter()
    try:
        return fn()
    finally:
        timing[name] = round(time.perf_counter() - t0, 6)


def classify(g, options: ClassifyOptions = ClassifyOptions()) -> Report:
    g.require_spheres()
    g.require_tree()
    timing = {}
    core = g.without_arrows()
    report = Report(g, classify_definiteness(intersection_matrix(core)), options=options, timing=timing)
    try:
        report.laufer = _timed(timing, "rationality", lambda: fundamental_cycle(core))
    except NotNegativeDefinite:
        report.laufer = None
    b = options.budget
    report.sandwiched, report.sandwiched_certificate = _timed(
        timing, "sandwiched", lambda: decide_sandwiched(core, b))
    report.pm, report.pm_certificate = _timed(timing, "pm", lambda: decide_pm(core, b))
    for cert in (report.sandwiched_certificate, report.pm_certificate):
        if cert is not None and not check_certificate(core, cert):
            raise InternalError("certificate failed replay")
    if options.embeddings and report.definiteness.negative_definite:
        for mode in (Mode.S, Mode.P):
            try:
                report.embeddings[mode.value] = _timed(
                    timing, f"embedding_{mode.value}", lambda m=mode: find_embedding(core, m, budget=b))
            except BudgetExceeded as exc:
                report.embeddings[mode.value] = Inconclusive(str(exc), exc.budget)
    if options.divisor is not None:
        try:
            report.fiber = fiber_invariants(g, options.divisor)
        except PlumbingError as exc:
            report.fiber_error = f"{type(exc).__name__}: {exc}"
    return report


# -- serialisation -------------------------------------------------------------


def _graph_json(g):
    return {
        "vertices": [[v.id, v.framing] for v in g.vertices],
        "edges": sorted(sorted(e, key=g.index.__getitem__) for e in g.edges),
        "arrows": [list(a) for a in g.arrows],
    }


def _cert_json(cert: SandwichCertificate):
    out = {
        "target": cert.target.value,
        "added_leaves": [list(p) for p in cert.added_leaves],
        "augmented": _graph_json(cert.augmented),
        "blowdown": [str(m) for m in cert.blowdown],
    }
    if cert.embedding is not None:
        out["embedding"] = format_embedding(cert.embedding).splitlines()
    return out


def _tri_json(value, cert):
    if isinstance(value, Inconclusive):
        return "inconclusive"
    if value:
        return {"value": True, "certificate": _cert_json(cert)}
    return False


def report_dict(r: Report, include_timing: bool = False) -> dict:
    d = {
        "schema": SCHEMA,
        "graph": _graph_json(r.graph),
        "definiteness": {"class": r.definiteness.kind.value, "nullity": r.definiteness.nullity},
    }
    if r.laufer is None:
        d["rational"] = None
    else:
        t = r.laufer
        d["rational"] = {
            "value": t.rational,
            "start": t.start,
            "steps": [[v, p] for v, p in t.steps],
            "violation": t.violation,
            "fundamental_cycle": t.final,
        }
    d["sandwiched"] = _tri_json(r.sandwiched, r.sandwiched_certificate)
    d["pm"] = _tri_json(r.pm, r.pm_certificate)
    embs = {}
    for mode, phi in r.embeddings.items():
        if isinstance(phi, Inconclusive):
            embs[mode] = "inconclusive"
        else:
            embs[mode] = None if phi is None else format_embedding(phi).splitlines()
    d["embeddings"] = embs
    if r.fiber is not None:
        f = r.fiber
        d["fiber"] = {
            "euler": f.euler,
            "boundary_components": [[v, m, c] for (v, m), c in f.boundary_components],
            "total_boundary": f.total_boundary,
            "genus": f.genus,
            "planar": f.planar,
        }
    elif r.fiber_error:
        d["fiber"] = {"error": r.fiber_error}
    b = r.options.budget
    meta = {"budget": {"max_states": b.max_states, "max_nodes": b.max_nodes,
                       "max_subtrees": b.max_subtrees, "basis": b.basis}}
    inconclusive = {name: {"reason": v.reason, "budget": v.budget}
                    for name, v in (("sandwiched", r.sandwiched), ("pm", r.pm))
                    if isinstance(v, Inconclusive)}
    if inconclusive:
        meta["inconclusive"] = inconclusive
    if r.options.seed is not None:
        meta["seed"] = r.options.seed
    if include_timing:
        meta["timing"] = r.timing
    d["metadata"] = meta
    return d


def _tri_text(value):
    if isinstance(value, Inconclusive):
        return f"inconclusive ({value.reason})"
    return "true" if value else "false"


def replay_transcript(cert: SandwichCertificate) -> list[str]:
    lines = []
    h = cert.augmented
    lines.append(f"  start: {_short(h)}")
    for m in cert.blowdown:
        h = blow_down(h, m.loci[0])
        lines.append(f"  {m}: {_short(h)}")
    return lines


def _short(g) -> str:
    if len(g) == 0:
        return "(empty)"
    vs = " ".join(f"{v.id}({v.framing})" for v in g.vertices)
    es = " ".join("-".join(sorted(e, key=g.index.__getitem__)) for e in
                  sorted(g.edges, key=lambda e: sorted(g.index[x] for x in e)))
    return vs + (f" | {es}" if es else "")


def emit_report(r: Report, fmt: str = "json", include_timing: bool = False) -> str:
    if fmt == "json":
        return json.dumps(report_dict(r, include_timing), indent=2, sort_keys=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    out = ["graph:"]
    out += ["  " + line for line in format_graph(r.graph).splitlines()]
    out.append(f"definiteness: {r.definiteness.kind.value} (nullity {r.definiteness.nullity})")
    if r.laufer is None:
        out.append("rational: n/a (not negative definite)")
    else:
        t = r.laufer
        out.append(f"rational: {'true' if t.rational else 'false'}")
        out.append(f"  start {t.start}; steps " + ", ".join(f"{v}:{p}" for v, p in t.steps))
        if t.violation is not None:
            v, p = t.steps[t.violation]
            out.append(f"  step {t.violation + 1} adds {v} with pairing {p}")
        out.append("  fundamental cycle " + " ".join(f"{v}={c}" for v, c in t.final.items()))
    for name, value, cert in (("sandwiched", r.sandwiched, r.sandwiched_certificate),
                              ("pm", r.pm, r.pm_certificate)):
        out.append(f"{name}: {_tri_text(value)}")
        if cert is not None:
            leaves = ", ".join(f"{l} on {v}" for v, l in cert.added_leaves) or "none"
            out.append(f"  added -1 leaves: {leaves}")
            out.append(f"  blowdown to {cert.target.value}:")
            out += replay_transcript(cert)
    for mode, phi in r.embeddings.items():
        if phi is None:
            out.append(f"{mode}-embedding: none")
        elif isinstance(phi, Inconclusive):
            out.append(f"{mode}-embedding: {phi}")
        else:
            out.append(f"{mode}-embedding:")
            out += ["  " + line for line in format_embedding(phi).splitlines()]
    if r.fiber is not None:
        f = r.fiber
        out.append(f"fiber: euler {f.euler}, boundary {f.total_boundary}, genus {f.genus}")
    elif r.fiber_error:
        out.append(f"fiber: {r.fiber_error}")
    if include_timing:
        out.append("timing: " + ", ".join(f"{k} {v:.3f}s" for k, v in r.timing.items()))
    return "\n".join(out) + "\n"
