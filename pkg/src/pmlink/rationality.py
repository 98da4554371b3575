"""Laufer's computation sequence, rationality, and the Lipman cone."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import Disconnected, NotNegativeDefinite
from .graph import PlumbingGraph, pairing
from .lattice import is_negative_definite


@dataclass(frozen=True)
class LauferTrace:
    start: str
    steps: tuple[tuple[str, int], ...]  # (vertex added, Z_k . E_v before adding)
    final: dict
    rational: bool
    violation: int | None  # index into steps of the first pairing >= 2


def _prepare(g: PlumbingGraph):
    g.require_spheres()
    if len(g) == 0 or not g.is_connected():
        raise Disconnected("fundamental cycle needs a nonempty connected graph")
    if not is_negative_definite(g):
        raise NotNegativeDefinite("intersection form is not negative definite")


def fundamental_cycle(g: PlumbingGraph, start: str | None = None,
                      order: Sequence[str] | None = None) -> LauferTrace:
    """Run Laufer's sequence from ``E_start``.

    Whenever several vertices pair positively with the running cycle, the
    first one in ``order`` is added (default: ids sorted as strings).
    """
    _prepare(g)
    order = list(order) if order is not None else sorted(g.ids)
    if sorted(order) != sorted(g.ids):
        raise ValueError("order must list every vertex exactly once")
    start = start if start is not None else order[0]
    z = {v: 0 for v in g.ids}
    z[start] = 1
    steps = []
    while True:
        for v in order:
            p = pairing(g, z, v)
            if p > 0:
                steps.append((v, p))
                z[v] += 1
                break
        else:
            break
    violation = next((i for i, (_, p) in enumerate(steps) if p >= 2), None)
    return LauferTrace(start, tuple(steps), z, violation is None, violation)


def check_rational(g: PlumbingGraph) -> bool:
    return fundamental_cycle(g).rational


def lipman_cone_check(g: PlumbingGraph, d: Mapping[str, int]) -> bool:
    if any(v not in g for v in d):
        return False
    if any(d.get(v, 0) <= 0 for v in g.ids):
        return False
    return all(pairing(g, d, v) <= 0 for v in g.ids)
