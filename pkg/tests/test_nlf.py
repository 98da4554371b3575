import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmlink import fixtures
from pmlink.corpus import random_factorization
from pmlink.errors import Inadmissible, InvalidGraph, MixedContexts
from pmlink.lattice import Definiteness, classify_definiteness
from pmlink.nlf import (DISK, SPHERE, Factorization, HomologyClass, adjunction_genus, all_kernel_classes,
                        c1_evaluate, check_admissible, classify_sphere_classes, h1_w0, h2_kernel,
                        in_kernel_lattice, integer_kernel, intersection_form, is_kernel_class,
                        lattice_coordinates, match_plumbing, matrices_congruent_by_permutation,
                        winding_parameter)
from pmlink.oracles import genus_zero_shapes_bruteforce


def xn_classes(n):
    """node: a0 - a1 - ... - an; arm: ak - a(k+1) for k = 1..n."""
    f = fixtures.factorization(f"x{n}")
    k = n + 2
    node = [1] + [-1] * n + [0]
    arms = []
    for j in range(1, n + 1):
        a = [0] * k
        a[j], a[j + 1] = 1, -1
        arms.append(a)
    return f, [HomologyClass(tuple(v), 0, f) for v in [node] + arms]


def d4_sphere_classes():
    f = fixtures.factorization("d4_sphere")
    vecs = [((-1, -1, 0, 0), 1), ((1, -1, 0, 0), 0), ((0, 1, -1, 0), 0), ((0, 0, 1, -1), 0)]
    return f, [HomologyClass(a, w, f) for a, w in vecs]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_xn_model(n):
    f, classes = xn_classes(n)
    assert check_admissible(f) is None
    for x in classes:
        assert is_kernel_class(f, x)
        assert in_kernel_lattice(f, x)
    assert match_plumbing(classes, fixtures.graph(f"x{n}"))
    # the listed classes span the whole kernel
    for b in h2_kernel(f):
        assert lattice_coordinates(classes, b) is not None


def test_d4_sphere_classes_have_trivial_c1():
    f, classes = d4_sphere_classes()
    assert check_admissible(f) is None
    for x in classes:
        assert is_kernel_class(f, x)
        assert c1_evaluate(x) == 0
        assert adjunction_genus(x) == 0
    assert match_plumbing(classes, fixtures.graph("d4"))


def test_h1_presentations():
    assert h1_w0(fixtures.factorization("x2")).relations == ()
    sphere = h1_w0(fixtures.factorization("d4_sphere"))
    assert sphere.relations == ((2,),)
    assert sphere.has_torsion()


def test_inadmissible_kinds():
    base = dict(page=DISK, orbits={"o": ["h1", "h2", "h3"]}, cycles={"a": ["h1"]})
    assert check_admissible(Factorization.build(**base, interchanges=[("h1", "h2")])).kind == "count"
    assert check_admissible(Factorization.build(
        **base, interchanges=[("h1", "h2"), ("h2", "h1")])).kind == "duplicate"
    two = Factorization.build(DISK, {"o": ["h1", "h2"], "p": ["h3"]}, {"a": ["h1"]},
                              [("h1", "h3")])
    assert check_admissible(two).kind == "cross-orbit"
    with pytest.raises(Inadmissible):
        h2_kernel(Factorization.build(**base))


def test_bad_factorizations():
    with pytest.raises(InvalidGraph):
        Factorization.build("torus", {"o": ["h1"]}, {})
    with pytest.raises(InvalidGraph):
        Factorization.build(DISK, {"o": ["h1"]}, {"a": ["h9"]})


def test_mixed_contexts():
    f, xs = xn_classes(2)
    g, ys = xn_classes(3)
    with pytest.raises(MixedContexts):
        intersection_form([xs[0], ys[0]])


def test_homology_arithmetic():
    x = HomologyClass((1, -1, 0), 0)
    y = HomologyClass((0, 1, -1), 0)
    assert (x + y).a == (1, 0, -1)
    assert (2 * x - y).a == (2, -3, 1)
    assert x.label(["p", "q", "r"]) == "p - q"


def test_adjunction_exclusions():
    assert adjunction_genus(HomologyClass((1, -1), 0)) == 0
    assert adjunction_genus(HomologyClass((-1, -1), 0)) is None
    assert adjunction_genus(HomologyClass((-1, -1), -1)) is None
    assert adjunction_genus(HomologyClass((2, -1), 0)) is None


def test_integer_kernel_small():
    assert integer_kernel([[2, 4]], 2) == [[2, -1]]
    assert integer_kernel([], 2) == [[1, 0], [0, 1]]


def test_congruence_by_permutation():
    m = [[-2, 1, 0], [1, -3, 1], [0, 1, -2]]
    p = [[-3, 1, 1], [1, -2, 0], [1, 0, -2]]
    assert matrices_congruent_by_permutation(m, p)
    assert not matrices_congruent_by_permutation(m, [[-2, 1, 1], [1, -3, 0], [1, 0, -2]])


@given(st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_random_factorizations_are_admissible(seed):
    f = random_factorization(random.Random(seed))
    assert check_admissible(f) is None


@given(st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_kernel_basis_is_kernel_and_definite(seed):
    f = random_factorization(random.Random(seed))
    basis = h2_kernel(f)
    for x in basis:
        assert is_kernel_class(f, x)
    if basis:
        rep = classify_definiteness(intersection_form(basis))
        assert rep.kind is Definiteness.NEGATIVE_DEFINITE


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_kernel_basis_spans_brute_force(seed):
    f = random_factorization(random.Random(seed), max_holes=4, max_cycles=4)
    basis = h2_kernel(f)
    for x in all_kernel_classes(f, bound=1):
        assert lattice_coordinates(basis, x) is not None


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_genus_zero_shapes(seed):
    f = random_factorization(random.Random(seed), max_holes=5, max_cycles=6)
    rows = genus_zero_shapes_bruteforce(f, bound=2)
    for row in rows:
        a, w = row[:-1], row[-1]
        pos = a[a > 0]
        assert set(np.unique(a)) <= {-1, 0, 1}
        if f.page == DISK:
            assert w == 0 and len(pos) == 1
        else:
            assert (w == 0 and len(pos) == 1) or (w == 1 and len(pos) == 0)
    listed = {(x.a, x.w) for x in classify_sphere_classes(f)}
    brute = {(tuple(int(v) for v in r[:-1]), int(r[-1])) for r in rows}
    assert listed == brute
