import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pmlink import fixtures
from pmlink.calculus import MoveSequence, ZERO_SEED, bu_e, bu_v
from pmlink.embeddings import decide_pm
from pmlink.errors import InconsistentArrows, MissingArrow, NonIntegral, NotCoprime, NotInLipmanCone
from pmlink.experiments import null_divisor_trial
from pmlink.graph import PlumbingGraph, tree_isomorphic
from pmlink.milnor import (HJChain, arrows_from_divisor, cap_binding_component, divisor_from_arrows,
                           fiber_invariants, hj_expansion, pm_null_divisor, riemann_roch_chi)


def test_d4_multilink_multiplicities():
    g = fixtures.graph("d4_multilink")
    assert divisor_from_arrows(g) == {"c": 2, "l1": 1, "l2": 2, "l3": 1}
    assert divisor_from_arrows(g) == fixtures.divisor("d4_multilink")


def test_d4_multilink_fibre():
    g = fixtures.graph("d4_multilink")
    f = fiber_invariants(g, fixtures.divisor("d4_multilink"))
    assert (f.euler, f.total_boundary, f.genus) == (0, 2, 0)
    assert f.boundary_components == ((("l2", 2), 2),)


def test_arrows_from_divisor_roundtrip():
    g = fixtures.graph("d4_multilink")
    a = arrows_from_divisor(g.without_arrows(), fixtures.divisor("d4_multilink"))
    assert a == {"c": 0, "l1": 0, "l2": 2, "l3": 0}


def test_divisor_outside_cone(d4):
    with pytest.raises(NotInLipmanCone):
        arrows_from_divisor(d4, {"c": 1, "l1": 1, "l2": 1, "x1": 1})


def test_inconsistent_arrows():
    g = fixtures.graph("d4_multilink")
    with pytest.raises(InconsistentArrows):
        fiber_invariants(g, fixtures.divisor("d4_multilink"), arrows=[("l1", 2)])


@pytest.mark.parametrize("name", ["x1", "x2", "x3", "x4"])
def test_non_integral_divisor(name):
    g = fixtures.graph(name)
    with pytest.raises(NonIntegral) as exc:
        divisor_from_arrows(g)
    assert exc.value.solution


def test_riemann_roch_fibre():
    g = PlumbingGraph.build({"e": -1, "a": -2, "b": -2}, [("e", "a"), ("e", "b")])
    assert riemann_roch_chi(g, {"e": 2, "a": 1, "b": 1}) == 1
    assert riemann_roch_chi(ZERO_SEED, {"s": 1}) == 1


def test_pm_null_divisor_multiplicities():
    seq = MoveSequence((bu_v("s"), bu_e("s", "n1"), bu_v("n2")), ZERO_SEED)
    full, keep, arrows = pm_null_divisor(seq, {"s", "n1", "n2"})
    assert full == {"s": 1, "n1": 1, "n2": 2, "n3": 2}
    assert keep == {"s": 1, "n1": 1, "n2": 2}
    assert arrows == [("n2", 2)]


@pytest.mark.parametrize("b,a,coeffs", [(2, 1, (2,)), (3, 2, (2, 2)), (7, 3, (3, 2, 2)), (5, 1, (5,)), (5, 4, (2, 2, 2, 2))])
def test_hj_known(b, a, coeffs):
    assert hj_expansion(b, a).coefficients == coeffs


def test_hj_errors():
    with pytest.raises(NotCoprime):
        hj_expansion(4, 2)
    with pytest.raises(ValueError):
        hj_expansion(0, 1)


@given(st.integers(1, 200), st.integers(1, 200))
def test_hj_value(b, a):
    from math import gcd
    if gcd(a, b) != 1:
        return
    ch = hj_expansion(b, a)
    if b >= a:
        assert ch.value() == Fraction(b, a)
    assert all(c >= 2 for c in ch.coefficients[1:]) or ch.coefficients == (1,)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_capping_cusp_gives_dn(n):
    g = fixtures.graph(f"cusp_d{n}")
    d = divisor_from_arrows(g)
    h = cap_binding_component(g, "l1", d["l1"])
    assert tree_isomorphic(h.without_arrows(), fixtures.graph(f"d{n}"))
    assert h.arrows_at("l1") == []
    assert decide_pm(h)[0] is True


def test_cap_missing_arrow(d4):
    with pytest.raises(MissingArrow):
        cap_binding_component(d4, "c", 1)


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_null_divisor_trial(seed):
    t = null_divisor_trial(random.Random(seed))
    assert t.null_generator_ok
    assert t.rr_chi == 1
    assert t.genus == 0
    assert t.euler == 2 - t.total_arrow_mult
