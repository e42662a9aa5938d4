import pytest
from hypothesis import given, settings, strategies as st

from ttkit.errors import GmSyntaxError, GraphError
from ttkit.gm import format_gm, parse_gm, parse_graph_spec
from ttkit.graph import (
    Circuit,
    Graph,
    Turn,
    cyclically_reduce,
    inv,
    reverse_word,
    tighten,
    turns_of,
)

ROSE2 = """
graph {
  vertices: v0
  edge a: v0 -> v0
  edge b: v0 -> v0
}
"""

THETA = """
graph {
  vertices: v0 v1
  edge x: v0 -> v1
  edge y: v0 -> v1
  edge z: v0 -> v1
}
"""

ALPHABET = ["a", "a'", "b", "b'", "c", "c'"]
R3 = Graph.rose("abc")


def naive_reduce(word):
    """Oracle: rescan for an adjacent cancelling pair until none is left."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i + 1] == inv(w[i]):
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


words = st.lists(st.sampled_from(ALPHABET), max_size=30).map(tuple)


def test_parse_rose():
    g = parse_graph_spec(ROSE2)
    assert g.vertices == ("v0",)
    assert len(g.oriented_edges()) == 4
    assert g.rank == 2


def test_parse_rose_three_petals():
    g = parse_graph_spec("graph { vertices: v0\n edge a: v0 -> v0\n edge b: v0 -> v0\n edge c: v0 -> v0 }")
    assert len(g.vertices) == 1 and len(g.oriented_edges()) == 6


def test_parse_theta():
    g = parse_graph_spec(THETA)
    assert g.rank == 2
    assert all(val == 3 for val in g.valence().values())


def test_syntax_error_has_position():
    with pytest.raises(GmSyntaxError) as exc:
        parse_graph_spec("graph {\n  vertices: v0\n  edge a v0 -> v0\n}")
    assert exc.value.line == 3 and exc.value.column == 10


def test_dangling_vertex():
    with pytest.raises(GmSyntaxError, match="unknown vertex"):
        parse_graph_spec("graph { vertices: v0\n edge a: v0 -> v1 }")


def test_valence_one_only_rejected_when_strict():
    text = "graph { vertices: v0 v1\n edge a: v0 -> v0\n edge b: v0 -> v1 }"
    assert parse_graph_spec(text).rank == 1
    with pytest.raises(GmSyntaxError, match="valence-one"):
        parse_graph_spec(text, strict=True)


def test_round_trip():
    for text in (ROSE2, THETA):
        g = parse_graph_spec(text)
        assert parse_graph_spec(format_gm(g)) == g


def test_round_trip_with_map():
    doc = parse_gm("map { a -> a b\n b -> b a b }\nmetric { a: 0.5 b: 1.25 }")
    again = parse_gm(format_gm(doc.graph, doc.map, doc.filtration, doc.metric))
    assert again.map == doc.map and again.metric == doc.metric
    assert again.filtration.strata[0].edges == ("a", "b")


def test_parse_word_forms():
    assert R3.parse_word("a b a' b'") == ("a", "b", "a'", "b'")
    assert R3.parse_word("aba'b'") == ("a", "b", "a'", "b'")
    assert R3.parse_word("b a^2 c'") == ("b", "a", "a", "c'")
    assert R3.parse_word("a^-2") == ("a'", "a'")


def test_tighten_examples():
    g = R3
    p = tighten(g, ("a", "b", "b'", "a'"))
    assert p.trivial and p.start == "v0"
    assert tighten(g, ("a", "b", "b'", "a'", "b'")).edges == ("b'",)
    assert tighten(g, ("a", "b", "c")).edges == ("a", "b", "c")


def test_tighten_rejects_non_composable():
    theta = parse_graph_spec(THETA)
    with pytest.raises(GraphError, match="non-composable"):
        tighten(theta, ("x", "y"))


def test_cyclically_reduce_examples():
    assert cyclically_reduce(R3, ("a", "b", "a'")).edges == ("b",)
    assert cyclically_reduce(R3, ("a", "b")).edges == ("a", "b")
    with pytest.raises(GraphError, match="trivial"):
        cyclically_reduce(R3, ("a", "a'"))


def test_circuit_canonical_forms():
    c = Circuit(("b", "a"))
    assert c == Circuit(("a", "b"))
    assert c.canonical() == ("a", "b")
    assert Circuit(("a", "b")) != Circuit(("b'", "a'"))
    assert Circuit(("a", "b")).canonical(unoriented=True) == Circuit(("b'", "a'")).canonical(unoriented=True)


def test_turns_of_examples():
    assert turns_of(("a", "b", "a'", "b'")) == [Turn.of("a'", "b"), Turn.of("b'", "a'"), Turn.of("a", "b'")]
    assert turns_of(Circuit(("a", "b"))) == [Turn.of("a'", "b"), Turn.of("b'", "a")]
    assert turns_of(("a",)) == []
    assert Turn.of("a", "a").degenerate


@settings(max_examples=200, deadline=None)
@given(words)
def test_tighten_matches_oracle_and_is_idempotent(w):
    p = tighten(R3, w, start="v0")
    assert p.edges == naive_reduce(w)
    assert tighten(R3, p.edges, start="v0") == p
    assert len(p) <= len(w)


@settings(max_examples=200, deadline=None)
@given(words)
def test_word_times_reverse_is_trivial(w):
    assert tighten(R3, w + reverse_word(w), start="v0").trivial


@settings(max_examples=200, deadline=None)
@given(words)
def test_reverse_commutes_with_tighten(w):
    assert reverse_word(tighten(R3, w, start="v0").edges) == tighten(R3, reverse_word(w), start="v0").edges


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_conjugation_invariance(r, w):
    if not naive_reduce(w):
        return
    inner = naive_reduce(w)
    # cyclic reduction of the oracle-reduced word by stripping inverse ends
    while len(inner) >= 2 and inner[0] == inv(inner[-1]):
        inner = inner[1:-1]
    expected = Circuit(inner)
    assert cyclically_reduce(R3, r + w + reverse_word(r)) == expected
