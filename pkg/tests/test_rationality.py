import random

import pytest
from hypothesis import given, settings, strategies as st

from pmlink import fixtures
from pmlink.errors import Disconnected, NotNegativeDefinite
from pmlink.graph import PlumbingGraph, pairing
from pmlink.rationality import check_rational, fundamental_cycle, lipman_cone_check


@pytest.mark.parametrize("name", ["a1", "a2", "a3", "a4", "a5", "a6", "d4", "d5", "d6", "e6", "e7", "e8"])
def test_ade_rational(name):
    g = fixtures.graph(name).without_arrows()
    t = fundamental_cycle(g)
    assert t.rational and t.violation is None
    assert all(p == 1 for _, p in t.steps)


@pytest.mark.parametrize("name,cycle", [
    ("d4", {"c": 2, "l1": 1, "l2": 1, "x1": 1}),
    ("a3", {"v1": 1, "v2": 1, "v3": 1}),
])
def test_known_fundamental_cycles(name, cycle):
    g = fixtures.graph(name)
    assert fundamental_cycle(g).final == cycle


def test_e8_fundamental_cycle_is_highest_root():
    g = fixtures.graph("e8")
    z = fundamental_cycle(g).final
    assert sorted(z.values()) == [2, 2, 3, 3, 4, 4, 5, 6]


def test_triangle_not_rational():
    g = fixtures.graph("triangle")
    t = fundamental_cycle(g)
    assert not t.rational
    v, p = t.steps[t.violation]
    assert p >= 2
    assert not check_rational(g)


def test_disconnected_and_indefinite():
    with pytest.raises(Disconnected):
        fundamental_cycle(PlumbingGraph.build({"a": -2, "b": -2}))
    with pytest.raises(NotNegativeDefinite):
        fundamental_cycle(PlumbingGraph.build({"a": -1, "b": -1}, [("a", "b")]))


def test_lipman_cone(d4):
    z = fundamental_cycle(d4).final
    assert lipman_cone_check(d4, z)
    assert not lipman_cone_check(d4, {v: 1 for v in d4.ids})
    assert lipman_cone_check(d4, {v: 2 * c for v, c in z.items()})


@st.composite
def nd_trees(draw):
    n = draw(st.integers(1, 7))
    fr = {f"v{i}": draw(st.integers(-5, -1)) for i in range(n)}
    edges = [(f"v{i}", f"v{draw(st.integers(0, i - 1))}") for i in range(1, n)]
    return PlumbingGraph.build(fr, edges)


def _nd(g):
    from pmlink.lattice import is_negative_definite
    return is_negative_definite(g)


@given(nd_trees().filter(_nd), st.integers(0, 10**6))
@settings(max_examples=120, deadline=None)
def test_fundamental_cycle_independent_of_order(g, seed):
    rng = random.Random(seed)
    base = fundamental_cycle(g)
    order = list(g.ids)
    rng.shuffle(order)
    other = fundamental_cycle(g, start=rng.choice(order), order=order)
    assert other.final == base.final
    assert other.rational == base.rational


@given(nd_trees().filter(_nd))
@settings(max_examples=120, deadline=None)
def test_fundamental_cycle_is_minimal_in_cone(g):
    z = fundamental_cycle(g).final
    assert lipman_cone_check(g, z)
    # lowering any coefficient leaves the cone
    for v in g.ids:
        w = dict(z)
        w[v] -= 1
        assert not lipman_cone_check(g, w)
