"""The eleven acceptance criteria, one test (or parametrized group) each.

A summary line per criterion is printed at the end of the pytest run.
"""

import random
import time

import pytest

from pmlink import fixtures
from pmlink.calculus import Target, blow_down, blow_up, replay
from pmlink.corpus import random_blowups, random_factorization
from pmlink.embeddings import Mode, Violation, check_certificate, decide_pm, find_embedding, make_embedding, \
    verify_embedding
from pmlink.errors import Inconclusive
from pmlink.experiments import compare_with_oracles, null_divisor_trial
from pmlink.lattice import Definiteness, classify_definiteness, determinant, intersection_matrix
from pmlink.milnor import divisor_from_arrows, fiber_invariants
from pmlink.nlf import (DISK, HomologyClass, c1_evaluate, check_admissible, classify_sphere_classes,
                        h2_kernel, in_kernel_lattice, intersection_form, match_plumbing)
from pmlink.oracles import genus_zero_shapes_bruteforce
from pmlink.rationality import fundamental_cycle
from pmlink.report import classify


@pytest.fixture(scope="module")
def comparison(corpus):
    t0 = time.perf_counter()
    res = compare_with_oracles(corpus)
    return res, time.perf_counter() - t0


def test_c01_d4_classification():
    r = classify(fixtures.graph("d4"))
    assert r.rational is True
    assert r.sandwiched is False
    assert r.pm is True
    cert = r.pm_certificate
    assert check_certificate(fixtures.graph("d4"), cert)
    assert len(cert.added_leaves) == 1
    assert cert.target is Target.ZERO_VERTEX
    final = replay(cert.augmented, cert.blowdown)
    assert len(final) == 1 and final.vertices[0].framing == 0


def test_c02_fig1_right_sandwiched():
    g = fixtures.graph("fig1_right")
    r = classify(g)
    assert r.sandwiched is True
    cert = r.sandwiched_certificate
    assert cert.target is Target.EMPTY
    assert check_certificate(g, cert)
    assert len(replay(cert.augmented, cert.blowdown)) == 0


@pytest.mark.parametrize("name", ["e6", "e8"])
def test_c03_e6_e8_not_pm_triangle_not_rational(name):
    value, cert = decide_pm(fixtures.graph(name))
    assert not isinstance(value, Inconclusive)
    assert value is False and cert is None


def test_c03_e6_e8_not_pm_triangle_not_rational_triangle():
    g = fixtures.graph("triangle")
    t = fundamental_cycle(g)
    assert not t.rational
    assert t.steps[t.violation][1] >= 2
    assert find_embedding(g, Mode.S) is None
    # columns of the 5 x 4 matrix: c = e1, l1 = e2 - e1 - e5, ...
    phi = make_embedding("S", {"c": (1, []), "l1": (2, [1, 5]), "l2": (3, [1, 2, 4]),
                               "l3": (4, [1, 2, 3])}, 5)
    problem = verify_embedding(g, phi)
    assert isinstance(problem, Violation) and problem.kind == "subgraph"


def test_c04_oracle_equivalence(comparison, corpus):
    res, seconds = comparison
    assert len(corpus) > 1000
    assert not res.inconclusive
    assert res.size == len(corpus)
    assert [m for m in res.mismatches if m[1] == "sandwiched"] == []
    assert [m for m in res.mismatches if m[1] == "pm"] == []
    assert seconds <= 600, f"corpus comparison took {seconds:.0f}s"


def test_c05_implication_chain(comparison):
    res, _ = comparison
    assert res.chain_failures == []
    assert res.sandwiched <= res.pm <= res.rational


def test_c06_null_divisor_pipeline():
    rng = random.Random(20240601)
    for _ in range(500):
        t = null_divisor_trial(rng, max_length=10)
        assert t.null_generator_ok, t
        assert t.rr_chi == 1, t
        assert t.genus == 0, t
        assert t.euler == 2 - t.total_arrow_mult, t


def test_c07_d4_multilink():
    g = fixtures.graph("d4_multilink")
    assert g.arrows == (("l2", 2),)
    d = divisor_from_arrows(g)
    assert d == {"c": 2, "l1": 1, "l2": 2, "l3": 1}
    f = fiber_invariants(g, d)
    assert (f.euler, f.total_boundary, f.genus) == (0, 2, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_c08_xn_nearly_lefschetz(n):
    f = fixtures.factorization(f"x{n}")
    assert check_admissible(f) is None
    k = n + 2  # cycles a0 .. a(n+1)
    node = [1] + [-1] * n + [0]
    arms = []
    for j in range(1, n + 1):
        a = [0] * k
        a[j], a[j + 1] = 1, -1
        arms.append(a)
    classes = [HomologyClass(tuple(v), 0, f) for v in [node] + arms]
    assert all(in_kernel_lattice(f, x) for x in classes)
    assert match_plumbing(classes, fixtures.graph(f"x{n}"))


def test_c09_d4_c1_vanishes():
    f = fixtures.factorization("d4_sphere")
    classes = [HomologyClass((-1, -1, 0, 0), 1, f), HomologyClass((1, -1, 0, 0), 0, f),
               HomologyClass((0, 1, -1, 0), 0, f), HomologyClass((0, 0, 1, -1), 0, f)]
    assert all(in_kernel_lattice(f, x) for x in classes)
    assert [c1_evaluate(x) for x in classes] == [0, 0, 0, 0]


def test_c10_kernel_definite_and_genus_zero_shapes():
    rng = random.Random(7)
    for _ in range(1000):
        f = random_factorization(rng, max_holes=8, max_cycles=8)
        basis = h2_kernel(f)
        if basis:
            assert classify_definiteness(intersection_form(basis)).kind is Definiteness.NEGATIVE_DEFINITE
        for row in genus_zero_shapes_bruteforce(f, bound=2):
            a, w = row[:-1], row[-1]
            npos = int((a > 0).sum())
            assert set(a.tolist()) <= {-1, 0, 1}
            if f.page == DISK:
                assert (w, npos) == (0, 1), (f, row)
            else:
                assert (w, npos) in ((0, 1), (1, 0)), (f, row)
        rows = genus_zero_shapes_bruteforce(f, bound=2)
        brute = {(tuple(int(v) for v in r[:-1]), int(r[-1])) for r in rows}
        assert {(x.a, x.w) for x in classify_sphere_classes(f)} == brute


def test_c11_calculus_identities(corpus):
    rng = random.Random(11)
    # blow_up then blow_down is the identity
    for _ in range(200):
        seq = random_blowups(rng, rng.randint(1, 10))
        g = replay(seq.start, seq)
        locus = rng.choice([None, rng.choice(g.ids)] + ([tuple(rng.choice(sorted(g.edges, key=sorted)))]
                                                        if g.edges else []))
        assert blow_down(blow_up(g, locus, "new"), "new") == g
    # |det Q| under 1000 random blowups and blowdowns from a definite graph
    g = fixtures.graph("d4")
    det = abs(determinant(intersection_matrix(g)))
    for _ in range(1000):
        downs = [v for v in g.ids if g.framing(v) == -1 and _can(g, v)]
        if downs and (len(g) > 10 or rng.random() < 0.4):
            g = blow_down(g, rng.choice(downs))
        else:
            locus = rng.choice([None, rng.choice(g.ids)] + ([tuple(rng.choice(sorted(g.edges, key=sorted)))]
                                                            if g.edges else []))
            g = blow_up(g, locus)
        assert abs(determinant(intersection_matrix(g))) == det
    # Laufer's fundamental cycle does not depend on the tie-break order
    for h in corpus:
        base = fundamental_cycle(h)
        ids = list(h.ids)
        for _ in range(20):
            rng.shuffle(ids)
            t = fundamental_cycle(h, start=ids[0], order=ids)
            assert t.final == base.final and t.rational == base.rational


def _can(g, v):
    from pmlink.calculus import can_blow_down
    return can_blow_down(g, v)
