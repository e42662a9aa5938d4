"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import math
import random
import time
from contextlib import contextmanager

import numpy as np
import sympy

from ttkit.ct import covering_circuit, csp_graph, inp_search, scc, verify_splitting, verify_splitting_report
from ttkit.graph import Circuit, cyclic_free_reduce
from ttkit.growth import distortion_certificate, genericity_check, omega_vector, tw_max, twist_growth
from ttkit.maps import check_rtt, gates, illegal_turns, transition_data
from ttkit.outer_space import translation_length, translation_length_empirical
from tests.conftest import brute_tw, load, random_pieces

LAMBDA = (3 + math.sqrt(5)) / 2
LOG_LAMBDA = math.log(LAMBDA)


@contextmanager
def criterion(capsys, number, title):
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        with capsys.disabled():
            print(f"\nCRITERION {number} FAIL: {title} ({type(exc).__name__}: {exc})")
        raise
    with capsys.disabled():
        extra = ", ".join(f"{k}={v}" for k, v in detail.items())
        print(f"\nCRITERION {number} PASS: {title}" + (f" ({extra})" if extra else ""))


def test_criterion_01_iwip_eigenvalue(capsys):
    with criterion(capsys, 1, "iwip transition matrix, lambda and tau formula") as d:
        start = time.perf_counter()
        doc = load("iwip.gm")
        td = transition_data(doc.map, doc.filtration)
        (s,) = td.strata
        tau = translation_length(doc.map, doc.filtration)
        elapsed = time.perf_counter() - start
        assert np.array_equal(np.asarray(s.matrix), np.array([[1, 1], [1, 2]]))
        assert abs(s.eigenvalue - LAMBDA) < 1e-9
        assert abs(tau - LOG_LAMBDA) < 1e-9 and abs(tau - 0.9624236501) < 1e-9
        assert elapsed < 1.0
        d.update(tau=f"{tau:.10f}", seconds=f"{elapsed:.3f}")


def test_criterion_02_empirical_translation_length(capsys):
    with criterion(capsys, 2, "empirical translation length sandwich") as d:
        start = time.perf_counter()
        doc = load("iwip.gm")
        rows = translation_length_empirical(doc.map, doc.filtration, 10, eps=0.1)
        elapsed = time.perf_counter() - start
        last = rows[-1]
        assert last["n"] == 10
        assert abs(last["lower_over_n"] - LOG_LAMBDA) <= 0.05
        assert last["upper_step"] <= LOG_LAMBDA + 0.1
        assert elapsed < 60
        d.update(lower_over_n=f"{last['lower_over_n']:.6f}", upper=f"{last['upper_step']:.6f}")


def test_criterion_03_gates_and_inps(capsys):
    with criterion(capsys, 3, "iwip gates and indivisible Nielsen paths") as d:
        doc = load("iwip.gm")
        gp = gates(doc.map)
        assert {frozenset(g) for g in gp.gates} == {frozenset({"a"}), frozenset({"b"}), frozenset({"a'", "b'"})}
        sigma = ("a", "b", "a'", "b'")
        assert len(illegal_turns(gp, sigma)) == 1
        bounded = inp_search(doc.map, "bounded", L=6)
        tree = inp_search(doc.map, "arrival_tree", filt=doc.filtration)
        assert bounded == [sigma] and tree == [sigma]
        d.update(inps=" ".join(sigma))


def test_criterion_04_csp_and_covering_circuit(capsys, iwip_ct):
    with criterion(capsys, 4, "iwip CSP digraph and covering circuit") as d:
        g = csp_graph(iwip_ct)
        assert len(g.vertices) == 6
        assert len(scc(g)) == 1
        assert all(g.succ[v] and g.in_degree(v) >= 1 for v in g.vertices)
        assert set(g.out_neighbours("b'")) == {"a", "a'", "b'", "INP:aba'b'"}
        cc = covering_circuit(iwip_ct, g)
        word = cc.circuit.edges
        assert cyclic_free_reduce(word) == word
        assert set(cc.splitting.labels()) == set(g.vertices)
        first = min(cc.splitting.starts)
        rotated = Circuit(word[first:] + word[:first])
        order = sorted(range(len(cc.splitting.terms)), key=lambda i: cc.splitting.starts[i])
        assert verify_splitting(iwip_ct.f, rotated, [cc.splitting.words()[i] for i in order])
        assert cc.refines
        d.update(circuit=" ".join(word))


def test_criterion_05_g21(capsys, g21, g21_ct):
    with criterion(capsys, 5, "g21 strata, omega, genericity and tau") as d:
        td = transition_data(g21.map, g21.filtration)
        assert td.kinds == ("Fixed", "NEG", "NEG")
        om = omega_vector(g21_ct)
        assert om.comp == {"b": 2, "c": 1, "ba*c'": 1}
        (verdict,) = genericity_check([om])
        assert verdict.to_json()["verdict"] == "generic"
        assert translation_length(g21.map, g21.filtration) == 0
        d.update(omega=om.comp)


def _cyclic_contains(circuit, piece):
    word = circuit.edges
    doubled = word + word
    return len(piece) <= len(word) and any(doubled[i:i + len(piece)] == piece for i in range(len(word)))


def test_criterion_06_twist_growth(capsys, g21_ct):
    with criterion(capsys, 6, "g21 twist growth along the covering-circuit orbit") as d:
        cc = covering_circuit(g21_ct, csp_graph(g21_ct))
        assert "b" in cc.splitting.labels()
        tg = twist_growth(g21_ct, cc.circuit, 10)
        tws = [r["tw"] for r in tg.rows]
        steps = [t for t in range(1, 11) if tws[t] - tws[t - 1] >= 2]
        assert steps and steps[0] <= 10
        sigma = cc.circuit
        for t in range(1, 11):
            sigma = g21_ct.f.f_sharp(sigma)
            assert _cyclic_contains(sigma, ("b",) + ("a",) * (2 * t))
        d.update(t0=steps[0], tw=tws)


def _random_cyclic_words(rng, count):
    letters = ["a", "b", "c", "a'", "b'", "c'"]
    words = []
    while len(words) < count:
        mode = rng.random()
        n = rng.randint(1, 50)
        if mode < 0.4:
            alphabet = letters[: rng.randint(1, 6)]
            word = [rng.choice(alphabet) for _ in range(n)]
        else:
            block = [rng.choice(letters[:3]) for _ in range(rng.randint(1, 6))]
            word = (block * (n // len(block) + 1))[:n]
            for _ in range(rng.randint(0, 3)):
                word[rng.randrange(n)] = rng.choice(letters)
        words.append(tuple(word))
    return words


def test_criterion_07_twist_oracle(capsys):
    with criterion(capsys, 7, "tw_max equals brute force on 1000 random cyclic words") as d:
        words = _random_cyclic_words(random.Random(7), 1000)
        start = time.perf_counter()
        mismatches = [w for w in words if tw_max(w, cyclic=True).value != brute_tw(w, cyclic=True)]
        elapsed = time.perf_counter() - start
        assert not mismatches, mismatches[:3]
        assert elapsed < 30
        d.update(mismatches=0, seconds=f"{elapsed:.2f}")


def test_criterion_08_splitting_soundness(capsys, iwip_ct, g21_ct):
    with criterion(capsys, 8, "splitting soundness on legal and forced-illegal junctures") as d:
        rng = random.Random(8)
        graphs = [(iwip_ct, csp_graph(iwip_ct)), (g21_ct, csp_graph(g21_ct))]
        legal = illegal = 0
        while legal < 500:
            ct, g = graphs[legal % 2]
            _, pieces = random_pieces(ct, g, rng, rng.randint(1, 6))
            path = tuple(x for p in pieces for x in p)
            rep = verify_splitting_report(ct.f, path, pieces, k_max=5)
            assert rep["legal"] and not any(rep["cancellation"])
            assert verify_splitting(ct.f, path, pieces)
            legal += 1
        while illegal < 500:
            ct, g = graphs[illegal % 2]
            n = rng.randint(2, 6)
            res = random_pieces(ct, g, rng, n, illegal_at=rng.randint(1, n - 1))
            if res is None:
                continue
            _, pieces = res
            path = tuple(x for p in pieces for x in p)
            assert verify_splitting(ct.f, path, pieces) is False
            illegal += 1
        d.update(legal=legal, illegal=illegal)


def test_criterion_09_certificate_linearity(capsys, g21_ct):
    with criterion(capsys, 9, "certificate bound_PG affine in t with slope 2/D2") as d:
        t, D2, K2 = sympy.symbols("t D2 K2")
        # max|comp| of psi = phi_{2,1}^t is |omega_b| * t = 2t
        expected = (2 * t - 2 * K2) / D2
        values = []
        for k in range(1, 21):
            cert = distortion_certificate([g21_ct], [k], D1=1.0, D2=1.0, K2=0.0)
            want = expected.subs({t: k, D2: 1, K2: 0})
            assert sympy.simplify(sympy.nsimplify(cert.bound_pg) - want) == 0
            values.append(cert.bound_pg)
        slopes = {b - a for a, b in zip(values, values[1:])}
        assert slopes == {2.0}
        assert sympy.diff(expected, t).subs(D2, 1) == 2
        d.update(slope=2)


def test_criterion_10_rtt_checker(capsys, iwip, g21):
    with criterion(capsys, 10, "RTT checker verdicts and witnesses") as d:
        for doc in (iwip, g21):
            rep = check_rtt(doc.map, doc.filtration)
            assert rep.passed
            assert all(v.witness for v in rep.verdicts)
        bad = load("rtt_violation.gm")
        rep = check_rtt(bad.map, bad.filtration)
        assert not rep.passed
        (fail,) = [v for v in rep.failures() if v.axiom == "RTT-i"]
        assert fail.witness["illegal_mixed_turn"] and fail.witness["edge"]
        assert all(v.witness for v in rep.verdicts)
        d.update(witness=fail.witness)
