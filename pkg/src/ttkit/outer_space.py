"""Metric graphs, candidate loops, Lipschitz bounds and translation lengths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._parallel import pmap
from .errors import OuterSpaceError, OverflowGuardError
from .graph import Circuit, Graph, base, format_word, inv, reverse_word
from .maps import EG, Filtration, GraphMap, TransitionData, transition_data

PATH_CAP = 10_000_000


class MetricGraph:
    """A graph with positive edge lengths (shared by both orientations)."""

    def __init__(self, graph: Graph, lengths: dict):
        self.graph = graph
        self.lengths = {}
        for e in graph.edges:
            if e not in lengths:
                raise OuterSpaceError(f"no length for edge {e}")
            v = float(lengths[e])
            if not v > 0 or math.isinf(v):
                raise OuterSpaceError(f"edge {e} has non-positive or infinite length {v}")
            self.lengths[e] = v

    def length(self, word) -> float:
        return sum(self.lengths[base(e)] for e in word)

    def volume(self) -> float:
        return sum(self.lengths.values())

    def scaled(self, c: float) -> "MetricGraph":
        return MetricGraph(self.graph, {e: c * v for e, v in self.lengths.items()})

    def normalized(self) -> "MetricGraph":
        return self.scaled(1.0 / self.volume())

    def __repr__(self):
        return f"MetricGraph({self.lengths})"


def unit_metric(graph: Graph) -> MetricGraph:
    return MetricGraph(graph, {e: 1.0 for e in graph.edges})


def _eg_stratum(td: TransitionData, r):
    s = td.strata[r - 1] if isinstance(r, int) else td.stratum(r)
    if s.kind != EG:
        raise OuterSpaceError(f"stratum {s.name} is not EG")
    return s


def pf_metric(f: GraphMap, filt: Filtration, r, td: TransitionData | None = None) -> MetricGraph:
    """Eigen-lengths on H_r, length 1 elsewhere."""
    td = td or transition_data(f, filt)
    s = _eg_stratum(td, r)
    lengths = {e: 1.0 for e in f.domain.edges}
    lengths.update(s.eigenvector)
    return MetricGraph(f.domain, lengths)


@dataclass(frozen=True)
class RLength:
    top: float
    below: float

    @property
    def total(self) -> float:
        return self.top + self.below


def r_length(metric: MetricGraph, filt: Filtration, sigma, r) -> RLength:
    """Split the length of a path in G_r into its H_r part and its G_{r-1} part."""
    r = filt.position(r)
    top = set(filt.stratum(r).edges)
    lower = set(filt.edges_below(r - 1))
    t = b = 0.0
    for e in sigma:
        x = base(e)
        if x in top:
            t += metric.lengths[x]
        elif x in lower:
            b += metric.lengths[x]
        else:
            raise OuterSpaceError(f"path crosses {e}, which is above stratum {r}")
    return RLength(t, b)


@dataclass
class EpsilonMetric:
    metric: MetricGraph
    eps: float
    eps_used: float
    K: int
    table: list = field(default_factory=list)  # rows: edge, class, stretch, bound

    @property
    def max_stretch(self) -> float:
        return max(row["stretch"] for row in self.table)


def epsilon_metric(f: GraphMap, filt: Filtration, eps: float, rescale: bool = False,
                   td: TransitionData | None = None) -> EpsilonMetric:
    """Lengths (K/eps)^r on non-EG strata and (K/eps)^r * v_i on EG strata.

    With ``rescale`` the construction uses eps * min(1, min v_i) so that every
    edge stretches by at most max(lambda_r, 1) + eps.
    """
    if not eps > 0:
        raise OuterSpaceError("epsilon must be positive")
    td = td or transition_data(f, filt)
    for s in td.strata:
        if s.kind not in (EG, "Zero") and len(s.edges) > 1:
            raise OuterSpaceError(f"stratum {s.name} is a multi-edge NEG stratum")
    eps_used = eps
    if rescale:
        vmin = min((min(s.eigenvector.values()) for s in td.eg_strata()), default=1.0)
        eps_used = eps * min(1.0, vmin)
    K = max(1, f.max_image_length())
    scale = K / eps_used
    lengths = {}
    for s in td.strata:
        for e in s.edges:
            w = s.eigenvector[e] if s.kind == EG else 1.0
            lengths[e] = scale ** s.index * w
    m = MetricGraph(f.domain, lengths)
    table = []
    for s in td.strata:
        for e in s.edges:
            stretch = m.length(f.image(e)) / m.lengths[e]
            if s.kind == EG:
                bound = s.eigenvalue + eps_used / s.eigenvector[e]
            elif s.kind == "Zero":
                bound = eps_used
            else:
                bound = 1.0 + eps_used
            table.append({"edge": e, "class": s.kind, "stretch": stretch, "bound": bound})
    return EpsilonMetric(m, eps, eps_used, K, table)


# ---------------------------------------------------------------------------
# candidate loops
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    circuit: Circuit
    kind: str  # "embedded", "figure-eight", "barbell"


@dataclass
class CandidateSet:
    candidates: list

    def __iter__(self):
        return iter(self.candidates)

    def __len__(self):
        return len(self.candidates)

    def circuits(self) -> list:
        return [c.circuit for c in self.candidates]

    def by_kind(self, kind: str) -> list:
        return [c.circuit for c in self.candidates if c.kind == kind]


def _simple_cycles(graph: Graph) -> list:
    """Embedded loops as (word, vertex list); one orientation per cycle up to rotation."""
    order = {v: i for i, v in enumerate(graph.vertices)}
    found = {}
    for s in graph.vertices:
        stack = [((), (s,))]
        while stack:
            word, verts = stack.pop()
            here = verts[-1]
            for e in graph.directions_at(here):
                if word and e == inv(word[-1]):
                    continue
                if base(e) in {base(x) for x in word}:
                    continue
                t = graph.terminus(e)
                if t == s:
                    w = word + (e,)
                    key = Circuit(w).canonical(unoriented=True)
                    found.setdefault(key, (w, verts))
                elif t not in verts and order[t] > order[s]:
                    stack.append((word + (e,), verts + (t,)))
    return [found[k] for k in sorted(found, key=lambda k: [(base(e), e.endswith("'")) for e in k])]


def _rotate_to(graph: Graph, word, v):
    for i, e in enumerate(word):
        if graph.origin(e) == v:
            return word[i:] + word[:i]
    raise OuterSpaceError("vertex not on cycle")


def _arcs(graph: Graph, start, targets: set, forbidden: set):
    """Embedded arcs from ``start`` to a vertex in ``targets``, internally avoiding ``forbidden``."""
    out = []
    stack = [((), (start,))]
    while stack:
        word, verts = stack.pop()
        for e in graph.directions_at(verts[-1]):
            if word and e == inv(word[-1]):
                continue
            t = graph.terminus(e)
            if t in targets:
                out.append((word + (e,), t))
            elif t not in verts and t not in forbidden:
                stack.append((word + (e,), verts + (t,)))
    return out


def candidate_loops(m) -> CandidateSet:
    """Embedded loops, figure-eights and barbells, up to rotation and reversal."""
    graph = m.graph if isinstance(m, MetricGraph) else m
    cycles = _simple_cycles(graph)
    seen = set()
    out = []

    def add(word, kind):
        c = Circuit(word)
        key = c.canonical(unoriented=True)
        if key in seen:
            return
        counts: dict = {}
        for e in word:
            counts[base(e)] = counts.get(base(e), 0) + 1
        if max(counts.values()) > 2:
            raise OuterSpaceError(f"candidate {format_word(word)} crosses an edge more than twice")
        seen.add(key)
        out.append(Candidate(Circuit(key), kind))

    for w, _ in cycles:
        add(w, "embedded")
    for (w1, v1), (w2, v2) in ((cycles[i], cycles[j]) for i in range(len(cycles)) for j in range(i + 1, len(cycles))):
        shared = set(v1) & set(v2)
        if {base(e) for e in w1} & {base(e) for e in w2}:
            continue
        if len(shared) == 1:
            (v,) = shared
            r1 = _rotate_to(graph, w1, v)
            for second in (w2, reverse_word(w2)):
                add(r1 + _rotate_to(graph, second, v), "figure-eight")
        elif not shared:
            forbidden = set(v1) | set(v2)
            for u in v1:
                for arc, t in _arcs(graph, u, set(v2), forbidden):
                    for first in (w1, reverse_word(w1)):
                        for second in (w2, reverse_word(w2)):
                            add(_rotate_to(graph, first, u) + arc + _rotate_to(graph, second, t)
                                + reverse_word(arc), "barbell")
    return CandidateSet(out)


# ---------------------------------------------------------------------------
# Lipschitz bounds
# ---------------------------------------------------------------------------

@dataclass
class LipschitzInterval:
    lower: float
    upper: float
    lower_witness: Circuit | None
    upper_witness: str | None
    candidate_table: list
    edge_table: list

    def __iter__(self):
        return iter((self.lower, self.upper))

    @property
    def exact(self) -> bool:
        return abs(self.upper - self.lower) <= 1e-9


def lipschitz_interval(m1: MetricGraph, m2: MetricGraph, h: GraphMap, normalize: bool = False) -> LipschitzInterval:
    """Lower bound from candidate stretches, upper bound from edge stretches (both as logs)."""
    if h.domain != m1.graph or h.codomain != m2.graph:
        raise OuterSpaceError("map does not go between the two metric graphs")
    if normalize:
        m1, m2 = m1.normalized(), m2.normalized()
    cands = candidate_loops(m1).circuits()

    def stretch(c):
        return m2.length(h.f_sharp(c)) / m1.length(c)

    cstretch = pmap(stretch, cands)
    ctable = [{"candidate": str(c), "stretch": s} for c, s in zip(cands, cstretch)]
    best = max(range(len(cands)), key=lambda i: (cstretch[i], -i))
    etable = [{"edge": e, "stretch": m2.length(h.image(e)) / m1.lengths[e]} for e in m1.graph.edges]
    ebest = max(etable, key=lambda row: row["stretch"])
    lower = math.log(cstretch[best])
    upper = math.log(ebest["stretch"])
    return LipschitzInterval(lower, upper, cands[best], ebest["edge"], ctable, etable)


# ---------------------------------------------------------------------------
# translation length
# ---------------------------------------------------------------------------

def translation_length_formula(f: GraphMap, filt: Filtration, td: TransitionData | None = None) -> float:
    td = td or transition_data(f, filt)
    return max([0.0] + [math.log(s.eigenvalue) for s in td.eg_strata()])


def basepoint_metric(f: GraphMap, filt: Filtration, td: TransitionData | None = None) -> MetricGraph:
    """PF metric of the EG stratum with the largest eigenvalue, or the unit metric."""
    td = td or transition_data(f, filt)
    egs = td.eg_strata()
    if not egs:
        return unit_metric(f.domain)
    top = max(egs, key=lambda s: (s.eigenvalue, -s.index))
    return pf_metric(f, filt, top.index, td)


def translation_length_empirical(f: GraphMap, filt: Filtration, n: int, eps: float = 0.1,
                                 td: TransitionData | None = None, cap: int = PATH_CAP) -> list:
    """Rows ``{n, lower_over_n, upper_step}`` for n = 1..N from the basepoint metric."""
    if n < 1:
        raise OuterSpaceError("n must be at least 1")
    td = td or transition_data(f, filt)
    x = basepoint_metric(f, filt, td)
    em = epsilon_metric(f, filt, eps, rescale=True, td=td)
    upper_step = math.log(em.max_stretch) if em.max_stretch > 0 else float("-inf")
    cands = candidate_loops(x).circuits()
    base_len = [x.length(c) for c in cands]
    current = list(cands)
    rows = []
    for k in range(1, n + 1):
        current = pmap(lambda c: f.f_sharp(c), current)
        longest = max(len(c) for c in current)
        if longest > cap:
            raise OverflowGuardError(f"iterate {k} produced a circuit of {longest} edges (cap {cap})")
        ratio = max(x.length(c) / b for c, b in zip(current, base_len))
        rows.append({"n": k, "lower_over_n": math.log(ratio) / k, "upper_step": upper_step})
    return rows


def translation_length(f: GraphMap, filt: Filtration, mode: str = "formula", n: int = 10, eps: float = 0.1,
                       cap: int = PATH_CAP):
    if mode == "formula":
        return translation_length_formula(f, filt)
    if mode == "empirical":
        return translation_length_empirical(f, filt, n, eps, cap=cap)
    raise OuterSpaceError(f"unknown mode {mode!r}")
