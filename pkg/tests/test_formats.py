import random

import pytest
from hypothesis import given, settings, strategies as st

from pmlink import fixtures
from pmlink.corpus import random_factorization, random_tree
from pmlink.errors import DanglingReference, DuplicateId, GraphSyntaxError, ParseError
from pmlink.formats import (format_divisor, format_factorization, format_graph, parse_divisor,
                            parse_factorization, parse_graph)


def test_parse_graph_with_comments():
    g = parse_graph("# a comment\n\nvertex a -2\nvertex b -3 # trailing\nedge a b\narrow b 2\n")
    assert g.framings == {"a": -2, "b": -3}
    assert g.arrows == (("b", 2),)


def test_genus_column():
    g = parse_graph("vertex a -1 2\n")
    assert g.genus("a") == 2
    assert format_graph(g) == "vertex a -1 2\n"


@pytest.mark.parametrize("text,exc,line,col", [
    ("vertex a -2\nvertex a -3\n", DuplicateId, 2, 8),
    ("vertex a -2\nedge a b\n", DanglingReference, 2, 8),
    ("vertex a x\n", GraphSyntaxError, 1, 10),
    ("vertx a -2\n", GraphSyntaxError, 1, 1),
    ("vertex a-b -2\n", GraphSyntaxError, 1, 8),
    ("vertex a -2\nedge a a\n", GraphSyntaxError, 2, 8),
    ("vertex a -2\narrow a 0\n", GraphSyntaxError, 2, 9),
    ("vertex a -2\nvertex b -2\nedge a b\nedge b a\n", DuplicateId, 4, 1),
])
def test_graph_errors_have_positions(text, exc, line, col):
    with pytest.raises(exc) as info:
        parse_graph(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_divisor_roundtrip():
    d = fixtures.divisor("d4_multilink")
    assert parse_divisor(format_divisor(d)) == d
    with pytest.raises(ParseError):
        parse_divisor("coef a 1\n")


def test_factorization_roundtrip_fixture():
    for name in fixtures.names("fact"):
        f = fixtures.factorization(name)
        assert parse_factorization(format_factorization(f)) == f


def test_factorization_errors():
    with pytest.raises(ParseError):
        parse_factorization("hole h1\norbit o h1\n")
    with pytest.raises(DanglingReference):
        parse_factorization("page disk\nhole h1\ncycle a h2\n")


def test_every_graph_fixture_roundtrips():
    for name in fixtures.names("graph"):
        text = fixtures.text(name, "graph")
        g = parse_graph(text)
        assert parse_graph(format_graph(g)) == g
        assert format_graph(parse_graph(format_graph(g))) == format_graph(g)


@given(st.integers(0, 10**6), st.integers(1, 9))
@settings(max_examples=100, deadline=None)
def test_graph_roundtrip_random(seed, n):
    rng = random.Random(seed)
    g = random_tree(rng, n, framings=range(-9, 3))
    if rng.random() < 0.5:
        g = g.with_arrows([(rng.choice(g.ids), rng.randint(1, 5))])
    text = format_graph(g)
    assert parse_graph(text) == g
    assert format_graph(parse_graph(text)) == text


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_factorization_roundtrip_random(seed):
    f = random_factorization(random.Random(seed))
    assert parse_factorization(format_factorization(f)) == f
