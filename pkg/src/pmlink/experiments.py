"""Randomized and exhaustive experiments shared by scripts/ and the tests."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .calculus import Target, normalize_augmentation
from .config import DEFAULT_BUDGET
from .corpus import random_blowups, random_connected_subset
from .embeddings import decide_pm, decide_sandwiched
from .errors import Inconclusive
from .lattice import classify_definiteness, intersection_matrix
from .milnor import fiber_invariants, pm_null_divisor, riemann_roch_chi
from .oracles import augmentation_oracle
from .rationality import check_rational


@dataclass(frozen=True)
class NullDivisorTrial:
    length: int
    keep: frozenset
    null_generator_ok: bool
    rr_chi: object
    genus: int
    euler: int
    total_arrow_mult: int

    @property
    def ok(self) -> bool:
        return (self.null_generator_ok and self.rr_chi == 1 and self.genus == 0
                and self.euler == 2 - self.total_arrow_mult)


def null_divisor_trial(rng: random.Random, max_length: int = 10) -> NullDivisorTrial:
    """Blow up a 0-vertex at random, keep a random connected subset, bring the
    rest into -1 leaf form and read off the fibre of the kept graph."""
    length = rng.randint(1, max_length)
    seq = random_blowups(rng, length)
    from .calculus import replay
    final = replay(seq.start, seq)
    keep = random_connected_subset(rng, final)
    full_graph, norm = normalize_augmentation(seq, keep)
    f_full, f_keep, arrows = pm_null_divisor(norm, keep)
    rep = classify_definiteness(intersection_matrix(full_graph))
    null_ok = rep.nullity == 1 and rep.null_generator == f_full
    sub = full_graph.induced(keep).with_arrows(arrows)
    fib = fiber_invariants(sub, f_keep)
    return NullDivisorTrial(length, frozenset(keep), null_ok, riemann_roch_chi(full_graph, f_full),
                            fib.genus, fib.euler, sum(m for _, m in arrows))


@dataclass
class CorpusComparison:
    size: int = 0
    sandwiched: int = 0
    pm: int = 0
    rational: int = 0
    mismatches: list = field(default_factory=list)  # (graph, what, ours, oracle)
    chain_failures: list = field(default_factory=list)  # graphs breaking sandwiched => pm => rational
    inconclusive: list = field(default_factory=list)
    classes: Counter = field(default_factory=Counter)


def compare_with_oracles(corpus, budget=DEFAULT_BUDGET, progress=None) -> CorpusComparison:
    """Run both decisions and both oracles over ``corpus``."""
    out = CorpusComparison()
    for i, g in enumerate(corpus):
        s, _ = decide_sandwiched(g, budget)
        p, _ = decide_pm(g, budget, cross_check=False)
        if isinstance(s, Inconclusive) or isinstance(p, Inconclusive):
            out.inconclusive.append(g)
            continue
        os_ = augmentation_oracle(g, Target.EMPTY).value
        op = augmentation_oracle(g, Target.ZERO_VERTEX).value
        r = check_rational(g)
        out.size += 1
        out.sandwiched += s
        out.pm += p
        out.rational += r
        out.classes[(s, p, r)] += 1
        if s != os_:
            out.mismatches.append((g, "sandwiched", s, os_))
        if p != op:
            out.mismatches.append((g, "pm", p, op))
        if (s and not p) or (p and not r):
            out.chain_failures.append(g)
        if progress is not None:
            progress(i, g)
    return out
