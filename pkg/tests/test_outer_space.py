import math

import pytest
from hypothesis import given, settings, strategies as st

from ttkit.errors import OuterSpaceError, OverflowGuardError
from ttkit.gm import parse_gm, parse_graph_spec
from ttkit.graph import Circuit, Graph, base
from ttkit.maps import identity_map, is_legal
from ttkit.outer_space import (
    MetricGraph,
    candidate_loops,
    epsilon_metric,
    lipschitz_interval,
    pf_metric,
    r_length,
    translation_length,
    translation_length_empirical,
    unit_metric,
)
from tests.conftest import walk

LAMBDA = (3 + math.sqrt(5)) / 2
LOG_LAMBDA = math.log(LAMBDA)

# Fixed edge a under an EG stratum {b, c}; used for per-class stretch bounds.
MIXED = "map { a -> a\n b -> c a\n c -> c b }\nfiltration { stratum H1: a\n stratum H2: b c }"


def canon(circuits):
    return {c.canonical(unoriented=True) for c in circuits}


def test_pf_metric_iwip(iwip):
    m = pf_metric(iwip.map, iwip.filtration, 1)
    assert m.lengths["a"] == pytest.approx(0.3819660113, abs=1e-9)
    assert m.lengths["b"] == pytest.approx(0.6180339887, abs=1e-9)
    for e in ("a", "b"):
        assert m.length(iwip.map.image(e)) / m.lengths[e] == pytest.approx(LAMBDA, rel=1e-12)


def test_pf_metric_needs_eg(g21):
    with pytest.raises(OuterSpaceError, match="not EG"):
        pf_metric(g21.map, g21.filtration, 1)


def test_r_length_examples(iwip):
    f, filt = iwip.map, iwip.filtration
    m = pf_metric(f, filt, 1)
    rl = r_length(m, filt, ("a", "b"), 1)
    assert rl.below == 0 and rl.top == pytest.approx(m.length(("a", "b")))
    assert r_length(m, filt, f.f_sharp(("a",)), 1).top == pytest.approx(LAMBDA * m.lengths["a"], rel=1e-12)
    sigma = Circuit(("b", "a"))
    ratio = r_length(m, filt, f.f_sharp(sigma), 1).top / r_length(m, filt, sigma, 1).top
    assert ratio == pytest.approx(LAMBDA, rel=1e-9)


def test_r_length_rejects_higher_edges(g21):
    m = unit_metric(g21.graph)
    with pytest.raises(OuterSpaceError, match="above stratum"):
        r_length(m, g21.filtration, ("b", "c"), 2)
    assert r_length(m, g21.filtration, ("b", "a", "a"), 2) .below == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 20), min_size=1, max_size=15))
def test_r_legal_paths_grow_by_lambda(iwip, ch):
    f, filt = iwip.map, iwip.filtration
    m = pf_metric(f, filt, 1)
    w = walk(f.domain, ch)
    if not is_legal(f, w)[0]:
        return
    before = r_length(m, filt, w, 1).top
    after = r_length(m, filt, f.f_sharp(w), 1).top
    assert after == pytest.approx(LAMBDA * before, rel=1e-9)


def test_epsilon_metric_g21(g21):
    em = epsilon_metric(g21.map, g21.filtration, 0.3)
    assert em.K == 3
    assert em.metric.lengths == pytest.approx({"a": 10.0, "b": 100.0, "c": 1000.0})
    table = {row["edge"]: row for row in em.table}
    assert table["a"]["stretch"] == pytest.approx(1.0)
    assert table["b"]["stretch"] == pytest.approx(1.2)
    assert table["b"]["stretch"] == pytest.approx(1 + 2 * 0.3 / 3)
    assert all(row["stretch"] <= row["bound"] + 1e-12 for row in em.table)


@pytest.mark.parametrize("eps", [1.0, 0.3, 0.05])
def test_epsilon_metric_per_class_bounds(eps):
    doc = parse_gm(MIXED)
    em = epsilon_metric(doc.map, doc.filtration, eps)
    lam = (1 + math.sqrt(5)) / 2
    for row in em.table:
        assert row["stretch"] <= row["bound"] + 1e-12
        if row["class"] == "EG":
            assert row["bound"] > lam
    rescaled = epsilon_metric(doc.map, doc.filtration, eps, rescale=True)
    assert rescaled.max_stretch <= max(lam, 1) + eps + 1e-12


def test_epsilon_metric_errors(g21):
    with pytest.raises(OuterSpaceError, match="positive"):
        epsilon_metric(g21.map, g21.filtration, 0)
    doc = parse_gm("map { a -> b\n b -> a }")
    with pytest.raises(OuterSpaceError, match="multi-edge NEG"):
        epsilon_metric(doc.map, doc.filtration, 0.1)


def test_candidates_rose2():
    cs = candidate_loops(Graph.rose("ab"))
    assert canon(cs.circuits()) == canon([Circuit(("a",)), Circuit(("b",)), Circuit(("a", "b")), Circuit(("a", "b'"))])


def test_candidates_theta():
    theta = parse_graph_spec("graph { vertices: v0 v1\n edge x: v0 -> v1\n edge y: v0 -> v1\n edge z: v0 -> v1 }")
    cs = candidate_loops(theta)
    assert canon(cs.circuits()) == canon([Circuit(("x", "y'")), Circuit(("y", "z'")), Circuit(("x", "z'"))])
    assert cs.by_kind("figure-eight") == [] and cs.by_kind("barbell") == []


def test_candidates_rose3():
    cs = candidate_loops(Graph.rose("abc"))
    assert len(cs.by_kind("embedded")) == 3
    assert len(cs.by_kind("figure-eight")) == 6


def test_candidates_barbell():
    g = Graph(["v0", "v1"], {"a": ("v0", "v0"), "b": ("v1", "v1"), "c": ("v0", "v1")})
    cs = candidate_loops(g)
    assert canon(cs.by_kind("barbell")) == canon([Circuit(("a", "c", "b", "c'")), Circuit(("a", "c", "b'", "c'"))])
    for c in cs.circuits():
        counts = {}
        for e in c:
            counts[base(e)] = counts.get(base(e), 0) + 1
        assert max(counts.values()) <= 2


def test_lipschitz_identity():
    g = Graph.rose("ab")
    li = lipschitz_interval(unit_metric(g), unit_metric(g), identity_map(g))
    assert (li.lower, li.upper) == (0.0, 0.0)


def test_lipschitz_unit_rose(iwip):
    u = unit_metric(iwip.graph)
    li = lipschitz_interval(u, u, iwip.map)
    assert li.lower == pytest.approx(math.log(3)) and li.upper == pytest.approx(math.log(3))
    table = {row["candidate"]: row["stretch"] for row in li.candidate_table}
    assert table == pytest.approx({"a": 2.0, "b": 3.0, "a b": 2.5, "a b'": 0.5})


def test_lipschitz_pf_rose(iwip):
    m = pf_metric(iwip.map, iwip.filtration, 1)
    lo, hi = lipschitz_interval(m, m, iwip.map)
    assert lo == pytest.approx(LOG_LAMBDA, abs=1e-9) and hi == pytest.approx(LOG_LAMBDA, abs=1e-9)


def test_lipschitz_is_not_symmetric():
    g = Graph.rose("ab")
    m1 = MetricGraph(g, {"a": 1.0, "b": 3.0})
    m2 = MetricGraph(g, {"a": 2.0, "b": 1.0})
    ident = identity_map(g)
    there = lipschitz_interval(m1, m2, ident)
    back = lipschitz_interval(m2, m1, ident)
    assert there.lower == pytest.approx(math.log(2)) and back.lower == pytest.approx(math.log(3))


MAPS = ["map { a -> a b\n b -> b a b }", "map { a -> a\n b -> b a a }", "map { a -> b\n b -> a }",
        "map { a -> a b a\n b -> a b }"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(MAPS), st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10),
       st.booleans())
def test_lipschitz_lower_never_exceeds_upper(text, a1, b1, a2, b2, normalize):
    f = parse_gm(text).map
    m1 = MetricGraph(f.domain, {"a": a1, "b": b1})
    m2 = MetricGraph(f.domain, {"a": a2, "b": b2})
    li = lipschitz_interval(m1, m2, f, normalize=normalize)
    assert li.lower <= li.upper + 1e-12


def test_translation_length_formula(iwip, g21):
    assert translation_length(iwip.map, iwip.filtration) == pytest.approx(0.9624236501, abs=1e-9)
    assert translation_length(g21.map, g21.filtration) == 0.0


def test_translation_length_empirical_sandwich(iwip):
    eps = 0.1
    rows = translation_length(iwip.map, iwip.filtration, mode="empirical", n=10, eps=eps)
    assert [r["n"] for r in rows] == list(range(1, 11))
    # single stratum: every candidate has r-length equal to its length, so C = 1
    for r in rows:
        assert r["lower_over_n"] >= LOG_LAMBDA - 1e-9
        assert r["lower_over_n"] <= LOG_LAMBDA + eps
        assert r["upper_step"] <= LOG_LAMBDA + eps


def test_translation_length_empirical_without_eg(g21):
    rows = translation_length_empirical(g21.map, g21.filtration, 5)
    assert all(r["lower_over_n"] >= 0 for r in rows)
    assert rows[-1]["lower_over_n"] < 0.5


def test_overflow_guard(iwip):
    with pytest.raises(OverflowGuardError):
        translation_length_empirical(iwip.map, iwip.filtration, 10, cap=100)
