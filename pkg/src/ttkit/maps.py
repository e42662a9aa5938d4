"""Topological representatives and their train track structure.

Transition matrices follow the convention ``M[i, j]`` = number of times the
image of edge ``j`` crosses edge ``i`` (either orientation).  The PF
eigenvector used for metrics is then a *left* eigenvector, ``v M = lambda v``,
and ``sum_i v_i * M[i, j]`` is the eigen-length of ``f(E_j)``.  The transpose
convention would use right eigenvectors instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .digraph import tarjan_scc
from .errors import FiltrationError, GraphError, MapError, NotEGError
from .graph import (
    Circuit,
    EdgePath,
    Graph,
    Turn,
    Word,
    base,
    cyclic_free_reduce,
    format_word,
    free_reduce,
    inv,
    is_reversed,
    reverse_word,
    turns_of,
)

PF_TOL = 1e-12
PF_MAX_ITER = 100_000

ZERO, NEG, EG, FIXED = "Zero", "NEG", "EG", "Fixed"
KINDS = (ZERO, NEG, EG, FIXED)


class GraphMap:
    """A map between graphs sending vertices to vertices and edges to reduced paths."""

    def __init__(
        self,
        domain: Graph,
        images: dict,
        vertex_images: dict | None = None,
        codomain: Graph | None = None,
    ):
        self.domain = domain
        self.codomain = codomain if codomain is not None else domain
        self._images: dict = {}
        for e in domain.edges:
            if e not in images:
                raise MapError(f"no image given for edge {e}")
            word = tuple(images[e])
            try:
                self.codomain.check_composable(word)
            except GraphError as exc:
                raise MapError(f"image of {e}: {exc}") from None
            if free_reduce(word) != word:
                raise MapError(f"image of {e} is not reduced: {format_word(word)}")
            self._images[e] = word
        extra = set(images) - set(domain.edges)
        if extra:
            raise MapError(f"images given for unknown edges {sorted(extra)}")

        vimg = dict(vertex_images or {})
        for e, word in self._images.items():
            if not word:
                continue
            for v, w in ((domain.origin(e), self.codomain.origin(word[0])),
                         (domain.terminus(e), self.codomain.terminus(word[-1]))):
                if vimg.setdefault(v, w) != w:
                    raise MapError(f"inconsistent image of vertex {v} (edge {e})")
        for v in domain.vertices:
            if v not in vimg:
                raise MapError(f"image of vertex {v} undetermined")
        self.vertex_images = vimg

    # -- images ---------------------------------------------------------
    def image(self, e: str) -> Word:
        word = self._images[base(e)]
        return reverse_word(word) if is_reversed(e) else word

    @property
    def images(self) -> dict:
        return dict(self._images)

    def is_identity(self) -> bool:
        return self.codomain == self.domain and all(
            self._images[e] == (e,) for e in self.domain.edges
        )

    def max_image_length(self) -> int:
        return max((len(w) for w in self._images.values()), default=0)

    def apply(self, word: Sequence[str]) -> Word:
        """Untightened image of a word."""
        return tuple(x for e in word for x in self.image(e))

    def f_sharp(self, path, k: int = 1):
        """k-fold image with tightening after each application.

        Accepts an EdgePath, a Circuit, or a plain word (treated as a path).
        """
        if k < 0:
            raise MapError("iterate count must be nonnegative")
        if isinstance(path, Circuit):
            word = path.edges
            for _ in range(k):
                word = cyclic_free_reduce(self.apply(word))
                if not word:
                    raise MapError(f"circuit {path} has cyclically trivial image")
            return Circuit(word)
        if isinstance(path, EdgePath):
            word, s, t = path.edges, path.start, path.end
            for _ in range(k):
                word = free_reduce(self.apply(word))
                s, t = self.vertex_images[s], self.vertex_images[t]
            return EdgePath(word, s, t)
        word = tuple(path)
        for _ in range(k):
            word = free_reduce(self.apply(word))
        return word

    def compose(self, other: "GraphMap") -> "GraphMap":
        """``self o other`` (apply ``other`` first), images tightened."""
        if other.codomain != self.domain:
            raise MapError("cannot compose: codomain/domain mismatch")
        images = {e: free_reduce(self.apply(other.image(e))) for e in other.domain.edges}
        vimg = {v: self.vertex_images[other.vertex_images[v]] for v in other.domain.vertices}
        return GraphMap(other.domain, images, vimg, self.codomain)

    def power(self, n: int) -> "GraphMap":
        if n < 0:
            raise MapError("negative powers are not available")
        result = identity_map(self.domain)
        for _ in range(n):
            result = self.compose(result)
        return result

    def __eq__(self, other):
        return (
            isinstance(other, GraphMap)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self._images == other._images
        )

    def __repr__(self):
        body = ", ".join(f"{e}->{format_word(w)}" for e, w in self._images.items())
        return f"GraphMap({body})"


def identity_map(graph: Graph) -> GraphMap:
    return GraphMap(graph, {e: (e,) for e in graph.edges}, {v: v for v in graph.vertices})


# ---------------------------------------------------------------------------
# filtrations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    name: str
    edges: tuple
    declared: str | None = None


@dataclass(frozen=True)
class Filtration:
    strata: tuple

    def __post_init__(self):
        seen = set()
        for s in self.strata:
            for e in s.edges:
                if e in seen:
                    raise FiltrationError(f"edge {e} appears in two strata")
                seen.add(e)
            if s.declared is not None and s.declared not in KINDS:
                raise FiltrationError(f"unknown stratum class {s.declared!r}")

    def index_of(self, e: str) -> int:
        """1-based stratum index of an (oriented) edge."""
        b = base(e)
        for i, s in enumerate(self.strata, 1):
            if b in s.edges:
                return i
        raise FiltrationError(f"edge {e} is in no stratum")

    def stratum(self, key) -> Stratum:
        if isinstance(key, int):
            return self.strata[key - 1]
        for s in self.strata:
            if s.name == key:
                return s
        raise FiltrationError(f"no stratum named {key!r}")

    def position(self, key) -> int:
        if isinstance(key, int):
            return key
        for i, s in enumerate(self.strata, 1):
            if s.name == key:
                return i
        raise FiltrationError(f"no stratum named {key!r}")

    def edges_below(self, r: int) -> tuple:
        """Positive edges of G_r."""
        return tuple(e for s in self.strata[:r] for e in s.edges)

    def validate(self, f: GraphMap) -> None:
        edges = set(f.domain.edges)
        covered = {e for s in self.strata for e in s.edges}
        if covered != edges:
            missing = sorted(edges - covered)
            extra = sorted(covered - edges)
            raise FiltrationError(f"filtration does not match edges (missing {missing}, unknown {extra})")
        for r in range(1, len(self.strata) + 1):
            allowed = set(self.edges_below(r))
            for e in self.strata[r - 1].edges:
                for x in f.image(e):
                    if base(x) not in allowed:
                        raise FiltrationError(
                            f"G_{r} is not invariant: f({e}) crosses {x} from a higher stratum"
                        )


def auto_filtration(f: GraphMap) -> Filtration:
    """Filtration by SCCs of the edge-occurrence digraph, lowest first."""
    edges = f.domain.edges
    succ = {e: sorted({base(x) for x in f.image(e)}, key=edges.index) for e in edges}
    comps = tarjan_scc(edges, lambda e: succ[e])
    # Tarjan emits sinks first; sinks of "image crosses" are the lowest strata.
    strata = []
    for i, comp in enumerate(comps, 1):
        strata.append(Stratum(f"H{i}", tuple(sorted(comp, key=edges.index))))
    return Filtration(tuple(strata))


# ---------------------------------------------------------------------------
# derivative map, gates, legality
# ---------------------------------------------------------------------------

def derivative_map(f: GraphMap) -> dict:
    """Df: oriented edge -> first edge of its image."""
    df = {}
    for e in f.domain.oriented_edges():
        img = f.image(e)
        if not img:
            raise MapError(f"edge {base(e)} is collapsed; Df undefined")
        df[e] = img[0]
    return df


@dataclass(frozen=True)
class GatePartition:
    gates: tuple  # tuple of frozensets, ordered by vertex then least direction
    _lookup: dict = field(compare=False, repr=False)

    def gate_of(self, e: str) -> frozenset:
        return self._lookup[e]

    def same_gate(self, e1: str, e2: str) -> bool:
        return self._lookup[e1] is self._lookup[e2]

    def at(self, graph: Graph, v: str) -> list:
        return [g for g in self.gates if graph.origin(next(iter(g))) == v]

    def as_lists(self) -> list:
        from .graph import edge_key

        return [sorted(g, key=edge_key) for g in self.gates]


def gates(f: GraphMap) -> GatePartition:
    """Gates: directions at a vertex whose Df-orbits eventually coincide.

    Df is a self-map of a finite set of size N, so after N steps every orbit
    has entered its cycle; two orbits ever meet iff they agree at step N.
    """
    from .graph import edge_key

    if f.codomain != f.domain:
        raise MapError("gates need a self-map")
    df = derivative_map(f)
    directions = f.domain.oriented_edges()
    n = len(directions)
    final = {}
    for e in directions:
        x = e
        for _ in range(n):
            x = df[x]
        final[e] = x
    classes: dict = {}
    for e in directions:
        classes.setdefault((f.domain.origin(e), final[e]), []).append(e)
    vorder = {v: i for i, v in enumerate(f.domain.vertices)}
    groups = sorted(
        (frozenset(g) for g in classes.values()),
        key=lambda g: (vorder[f.domain.origin(next(iter(g)))], min(edge_key(x) for x in g)),
    )
    lookup = {e: g for g in groups for e in g}
    return GatePartition(tuple(groups), lookup)


def turn_is_legal(gp: GatePartition, turn: Turn) -> bool:
    return not turn.degenerate and not gp.same_gate(turn.first, turn.second)


def is_legal(f_or_gates, turn_or_path):
    """Legality of a turn (bool) or of a path/circuit: (all_legal, per-turn verdicts)."""
    gp = f_or_gates if isinstance(f_or_gates, GatePartition) else gates(f_or_gates)
    if isinstance(turn_or_path, Turn):
        return turn_is_legal(gp, turn_or_path)
    verdicts = [(t, turn_is_legal(gp, t)) for t in turns_of(turn_or_path)]
    return all(ok for _, ok in verdicts), verdicts


def illegal_turns(gp: GatePartition, path) -> list:
    """Indices ``i`` such that the turn between edges i and i+1 is illegal."""
    word = tuple(path)
    out = [i for i in range(len(word) - 1) if not turn_is_legal(gp, Turn.of(inv(word[i]), word[i + 1]))]
    if isinstance(path, Circuit) and not turn_is_legal(gp, Turn.of(inv(word[-1]), word[0])):
        out.append(len(word) - 1)
    return out


# ---------------------------------------------------------------------------
# transition matrices and PF eigendata
# ---------------------------------------------------------------------------

def is_irreducible(m: np.ndarray) -> bool:
    n = m.shape[0]
    if n == 0:
        return False
    if n == 1:
        return m[0, 0] > 0
    succ = lambda i: [j for j in range(n) if m[i, j] > 0]
    return len(tarjan_scc(range(n), succ)) == 1


def is_permutation(m: np.ndarray) -> bool:
    return (
        m.shape[0] == m.shape[1]
        and set(np.unique(m)) <= {0, 1}
        and bool(np.all(m.sum(axis=0) == 1))
        and bool(np.all(m.sum(axis=1) == 1))
    )


def perron_frobenius(m, tol: float = PF_TOL, max_iter: int = PF_MAX_ITER):
    """PF eigenvalue and left eigenvector (entries summing to 1) of an irreducible matrix.

    Power iteration on ``(M + I)^T`` from the all-ones vector; the shift makes
    periodic irreducible matrices primitive without moving eigenvectors.
    """
    m = np.asarray(m, dtype=float)
    if not is_irreducible(m):
        raise MapError("PF eigendata requested for a reducible matrix")
    a = (m + np.eye(m.shape[0])).T
    x = np.ones(m.shape[0]) / m.shape[0]
    for _ in range(max_iter):
        y = a @ x
        y /= y.sum()
        if np.max(np.abs(y - x)) <= tol:
            x = y
            break
        x = y
    else:
        raise MapError("power iteration did not converge")
    lam = float((x @ m).sum())
    return lam, x


def transition_matrix(f: GraphMap, edges: Sequence[str]) -> np.ndarray:
    idx = {e: i for i, e in enumerate(edges)}
    m = np.zeros((len(edges), len(edges)), dtype=np.int64)
    for j, e in enumerate(edges):
        for x in f.image(e):
            i = idx.get(base(x))
            if i is not None:
                m[i, j] += 1
    return m


def classify_matrix(m: np.ndarray, fixes_edge: bool = False):
    """(kind, eigenvalue, eigenvector) for a stratum's transition block."""
    m = np.asarray(m)
    if not m.any():
        return ZERO, 0.0, None
    if not is_irreducible(m):
        raise FiltrationError("stratum transition matrix is reducible")
    if is_permutation(m):
        kind = FIXED if (m.shape[0] == 1 and fixes_edge) else NEG
        return kind, 1.0, None
    lam, v = perron_frobenius(m)
    return EG, lam, v


@dataclass
class StratumData:
    index: int
    name: str
    edges: tuple
    matrix: np.ndarray
    kind: str
    eigenvalue: float
    eigenvector: dict | None  # edge -> v_i, only for EG

    @property
    def irreducible(self) -> bool:
        return self.kind != ZERO

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "index": self.index,
            "edges": list(self.edges),
            "class": self.kind,
            "matrix": self.matrix.tolist(),
        }
        if self.kind == EG:
            out["lambda"] = self.eigenvalue
            out["eigenvector"] = [self.eigenvector[e] for e in self.edges]
        return out


@dataclass
class TransitionData:
    strata: list

    def stratum(self, key) -> StratumData:
        for s in self.strata:
            if s.index == key or s.name == key:
                return s
        raise FiltrationError(f"no stratum {key!r}")

    def eg_strata(self) -> list:
        return [s for s in self.strata if s.kind == EG]

    def kind_of_edge(self, e: str) -> str:
        b = base(e)
        for s in self.strata:
            if b in s.edges:
                return s.kind
        raise FiltrationError(f"edge {e} is in no stratum")

    def index_of_edge(self, e: str) -> int:
        b = base(e)
        for s in self.strata:
            if b in s.edges:
                return s.index
        raise FiltrationError(f"edge {e} is in no stratum")

    @property
    def kinds(self) -> tuple:
        return tuple(s.kind for s in self.strata)


def transition_data(f: GraphMap, filt: Filtration) -> TransitionData:
    filt.validate(f)
    out = []
    for i, s in enumerate(filt.strata, 1):
        m = transition_matrix(f, s.edges)
        fixes = len(s.edges) == 1 and f.image(s.edges[0]) == (s.edges[0],)
        try:
            kind, lam, v = classify_matrix(m, fixes)
        except FiltrationError as exc:
            raise FiltrationError(f"stratum {s.name}: {exc}") from None
        if s.declared is not None and s.declared != kind:
            if not (s.declared == NEG and kind == FIXED):
                raise FiltrationError(
                    f"stratum {s.name} tagged {s.declared} but its matrix classifies as {kind}"
                )
        vec = None if v is None else {e: float(x) for e, x in zip(s.edges, v)}
        out.append(StratumData(i, s.name, s.edges, m, kind, lam, vec))
    return TransitionData(out)


# ---------------------------------------------------------------------------
# RTT axioms
# ---------------------------------------------------------------------------

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


@dataclass
class AxiomVerdict:
    stratum: str
    axiom: str
    status: str
    witness: dict
    note: str = ""

    def to_json(self) -> dict:
        return {
            "stratum": self.stratum,
            "axiom": self.axiom,
            "status": self.status,
            "witness": self.witness,
            "note": self.note,
        }


@dataclass
class RttReport:
    verdicts: list
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(v.status != FAIL for v in self.verdicts)

    def failures(self) -> list:
        return [v for v in self.verdicts if v.status == FAIL]

    def verdict(self, stratum, axiom) -> AxiomVerdict:
        for v in self.verdicts:
            if v.stratum == stratum and v.axiom == axiom:
                return v
        raise KeyError((stratum, axiom))

    def to_json(self) -> dict:
        return {"passed": self.passed, "note": self.note, "verdicts": [v.to_json() for v in self.verdicts]}


def _reduced_paths(graph: Graph, allowed: set, starts: Iterable[str], max_len: int):
    """Yield reduced words of length 1..max_len over allowed positive edges.

    The second value reports whether some path of length max_len could still be
    extended (i.e. the enumeration is not exhaustive).
    """
    dirs = [e for e in graph.oriented_edges() if base(e) in allowed]
    by_origin: dict = {}
    for e in dirs:
        by_origin.setdefault(graph.origin(e), []).append(e)
    truncated = False
    stack = [(e,) for v in starts for e in reversed(by_origin.get(v, []))]
    out = []
    while stack:
        w = stack.pop()
        out.append(w)
        nxt = [e for e in by_origin.get(graph.terminus(w[-1]), []) if e != inv(w[-1])]
        if len(w) >= max_len:
            truncated = truncated or bool(nxt)
            continue
        stack.extend((w + (e,)) for e in reversed(nxt))
    return out, truncated


def check_rtt(f: GraphMap, filt: Filtration, td: TransitionData | None = None, depth: int = 6) -> RttReport:
    """Per-EG-stratum verdicts for RTT-i, RTT-ii (to depth L) and RTT-iii.

    RTT-iii is checked through the generator-level sufficient condition: each
    f(E), E in H_r, is r-legal, and RTT-i holds.  Then the image of an r-legal
    path is a concatenation of r-legal pieces glued at turns that are images
    of legal turns (legal, since Df respects gates) or mixed turns (legal by
    RTT-i), provided lower-stratum pieces do not vanish, which is RTT-ii.
    """
    td = td or transition_data(f, filt)
    gp = gates(f)
    df = derivative_map(f)
    graph = f.domain
    verdicts = []
    egs = td.eg_strata()
    for s in egs:
        r = s.index
        hr = set(s.edges)
        lower = set(filt.edges_below(r - 1))
        hr_dirs = [e for e in graph.oriented_edges() if base(e) in hr]

        # RTT-i
        bad = [e for e in hr_dirs if base(df[e]) not in hr]
        mixed_illegal = []
        for v in graph.vertices:
            here = graph.directions_at(v)
            top = [e for e in here if base(e) in hr]
            low = [e for e in here if base(e) in lower]
            for e1, e2 in itertools.product(top, low):
                t = Turn.of(e1, e2)
                if not turn_is_legal(gp, t):
                    mixed_illegal.append(str(t))
        if bad or mixed_illegal:
            witness = {}
            if bad:
                witness["edge"] = bad[0]
                witness["Df"] = df[bad[0]]
            if mixed_illegal:
                witness["illegal_mixed_turn"] = mixed_illegal[0]
            verdicts.append(AxiomVerdict(s.name, "RTT-i", FAIL, witness,
                                         "Df leaves the stratum or a mixed turn is illegal"))
        else:
            verdicts.append(AxiomVerdict(s.name, "RTT-i", PASS,
                                         {"Df": {e: df[e] for e in hr_dirs}},
                                         "Df preserves H_r directions; all mixed turns legal"))

        # RTT-ii
        touch = sorted(
            {graph.origin(e) for e in hr_dirs} & {graph.origin(e) for e in graph.oriented_edges() if base(e) in lower},
            key=graph.vertices.index,
        )
        if not lower or not touch:
            verdicts.append(AxiomVerdict(s.name, "RTT-ii", PASS, {"connecting_paths": 0},
                                         "vacuous: no connecting paths"))
        else:
            paths, truncated = _reduced_paths(graph, lower, touch, depth)
            tset = set(touch)
            failure = None
            checked = 0
            for w in paths:
                if graph.terminus(w[-1]) not in tset:
                    continue
                checked += 1
                img = f.f_sharp(w)
                ends_ok = img and f.domain.origin(img[0]) in tset and f.domain.terminus(img[-1]) in tset
                if not img or not ends_ok:
                    failure = w
                    break
            if failure is not None:
                verdicts.append(AxiomVerdict(s.name, "RTT-ii", FAIL,
                                             {"path": format_word(failure),
                                              "image": format_word(f.f_sharp(failure))},
                                             "connecting path maps to a non-connecting path"))
            elif truncated:
                verdicts.append(AxiomVerdict(s.name, "RTT-ii", UNKNOWN, {"connecting_paths": checked},
                                             f"verified to depth {depth}"))
            else:
                verdicts.append(AxiomVerdict(s.name, "RTT-ii", PASS, {"connecting_paths": checked},
                                             "exhaustive enumeration"))

        # RTT-iii
        offending = None
        for e in s.edges:
            img = f.image(e)
            for i in range(len(img) - 1):
                a, b = img[i], img[i + 1]
                if base(a) in hr and base(b) in hr:
                    t = Turn.of(inv(a), b)
                    if not turn_is_legal(gp, t):
                        offending = (e, str(t))
                        break
            if offending:
                break
        if offending:
            verdicts.append(AxiomVerdict(s.name, "RTT-iii", FAIL,
                                         {"edge": offending[0], "image": format_word(f.image(offending[0])),
                                          "illegal_turn": offending[1]},
                                         "edge image is not r-legal"))
        else:
            audit = {e: [str(t) for t in turns_of(f.image(e))] for e in s.edges}
            verdicts.append(AxiomVerdict(s.name, "RTT-iii", PASS, {"image_turns": audit},
                                         "sufficient condition: every f(E) in H_r is r-legal"))
    note = "" if egs else "no EG strata: axioms hold vacuously"
    return RttReport(verdicts, note)


# ---------------------------------------------------------------------------
# orientation of the attracting lamination
# ---------------------------------------------------------------------------

@dataclass
class LaminationOrientation:
    stratum: str
    orientable: bool
    orientation: dict | None  # positive edge -> +1/-1
    conflict: dict | None
    arrival: dict  # vertex -> list of gates (sorted lists)
    departure: dict
    verdict: str

    @property
    def unique_arrival(self) -> bool:
        return self.orientable and all(len(g) == 1 for g in self.arrival.values())

    def forward_edges(self) -> list:
        return [e if s > 0 else inv(e) for e, s in self.orientation.items()]

    def to_json(self) -> dict:
        return {
            "stratum": self.stratum,
            "orientable": self.orientable,
            "orientation": self.orientation,
            "conflict": self.conflict,
            "arrival_gates": self.arrival,
            "departure_gates": self.departure,
            "verdict": self.verdict,
        }


def lamination_orientation(f: GraphMap, filt: Filtration, r, td: TransitionData | None = None) -> LaminationOrientation:
    """Decide orientability of the lamination of EG stratum ``r`` by 2-colouring.

    An orientation is a sign per H_r edge such that each f(E) crosses H_r edges
    only forwards relative to E's sign.
    """
    from .graph import edge_key

    td = td or transition_data(f, filt)
    s = td.stratum(r) if not isinstance(r, int) else td.strata[r - 1]
    if s.kind != EG:
        raise NotEGError(f"stratum {s.name} is not EG")
    hr = set(s.edges)
    # constraint: sign(x) == parity * sign(e)
    constraints: dict = {e: [] for e in s.edges}
    for e in s.edges:
        for x in f.image(e):
            if base(x) in hr:
                parity = -1 if is_reversed(x) else 1
                constraints[e].append((base(x), parity))
                constraints[base(x)].append((e, parity))
    sign = {s.edges[0]: 1}
    stack = [s.edges[0]]
    conflict = None
    while stack and conflict is None:
        e = stack.pop()
        for x, parity in constraints[e]:
            want = sign[e] * parity
            if x not in sign:
                sign[x] = want
                stack.append(x)
            elif sign[x] != want:
                conflict = {"edge": e, "crosses": x, "parity": parity}
                break
    gp = gates(f)
    graph = f.domain
    if conflict is not None:
        return LaminationOrientation(s.name, False, None, conflict, {}, {}, "non-orientable")
    orientation = {e: sign[e] for e in s.edges}
    forward = [e if orientation[e] > 0 else inv(e) for e in s.edges]
    arrival: dict = {}
    departure: dict = {}
    for v in graph.vertices:
        dep = {gp.gate_of(e) for e in forward if graph.origin(e) == v}
        arr = {gp.gate_of(inv(e)) for e in forward if graph.terminus(e) == v}
        if dep or arr:
            departure[v] = sorted((sorted(g, key=edge_key) for g in dep), key=lambda g: edge_key(g[0]))
            arrival[v] = sorted((sorted(g, key=edge_key) for g in arr), key=lambda g: edge_key(g[0]))
    unique = all(len(g) == 1 for g in arrival.values())
    verdict = "unique arrival gates" if unique else "two arrival gates"
    return LaminationOrientation(s.name, True, orientation, None, arrival, departure, verdict)
