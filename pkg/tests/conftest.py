import pytest

import ttkit
from ttkit.ct import build_ct_data
from ttkit.graph import inv
from ttkit.gm import load_gm, parse_gm


def load(name):
    return load_gm(ttkit.data_path(name))


@pytest.fixture(scope="session")
def iwip():
    return load("iwip.gm")


@pytest.fixture(scope="session")
def g21():
    return load("g21.gm")


@pytest.fixture(scope="session")
def iwip_ct(iwip):
    return build_ct_data(iwip.map, iwip.filtration)


@pytest.fixture(scope="session")
def g21_ct(g21):
    return build_ct_data(g21.map, g21.filtration)


def g_map(i, j):
    """Rose on a, b, c with a fixed, b -> b a^i, c -> c a^j (negative powers use a')."""
    def power(k):
        return " ".join(["a"] * k if k >= 0 else ["a'"] * (-k))

    return parse_gm(f"map {{ a -> a\n b -> b {power(i)}\n c -> c {power(j)} }}")


def walk(graph, choices, start=None):
    """Reduced word built from integer choices: never backtracks."""
    here = start if start is not None else graph.vertices[0]
    out = []
    for c in choices:
        opts = [e for e in graph.directions_at(here) if not out or e != inv(out[-1])]
        e = opts[c % len(opts)]
        out.append(e)
        here = graph.terminus(e)
    return tuple(out)


def random_pieces(ct, g, rng, n, illegal_at=None, kmax=3):
    """Instantiated CSP terms along a random walk; junctures are legal except at ``illegal_at``.

    Returns None if the walk cannot take an illegal step from the chosen term.
    """
    from ttkit.graph import Turn
    from ttkit.maps import turn_is_legal

    graph = ct.f.domain
    terms = g.terms

    def illegal_next(u):
        a = terms[u].edges[-1]
        return [v for v in g.vertices if graph.origin(terms[v].edges[0]) == graph.terminus(a)
                and not turn_is_legal(ct.gp, Turn.of(inv(a), terms[v].edges[0]))]

    u = rng.choice(g.vertices)
    labels = [u]
    for i in range(1, n):
        if i == illegal_at:
            opts = illegal_next(labels[-1])
            if not opts:
                return None
        else:
            opts = g.succ[labels[-1]]
        labels.append(rng.choice(opts))
    pieces = []
    for lab in labels:
        t = terms[lab]
        if t.is_family:
            fam = ct.family_by_label(lab)
            k = rng.randint(1, kmax) * fam.sign
            pieces.append(fam.instantiate(k))
        else:
            pieces.append(t.edges)
    return labels, pieces


def brute_tw(word, cyclic=True):
    """Twisting by exhaustive scan: every start, every period, capped at the word length."""
    n = len(word)
    text = list(word) * 3 if cyclic else list(word)
    best = 0
    for i in range(n):
        for m in range(1, n + 1):
            length = m
            while length < n and i + length < len(text) and text[i + length] == text[i + length - m]:
                length += 1
            if i + m > len(text):
                continue
            best = max(best, length // m)
    return best
