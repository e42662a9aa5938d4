"""CT-level structure: linear edges, Nielsen paths, complete splittings and the CSP digraph.

Splitting terms are single edges of irreducible strata, indivisible Nielsen
paths of EG height, NEG Nielsen families ``E w^k E'``, exceptional families
``E_i w^k E_j'`` and maximal taken paths in zero strata.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .digraph import shortest_path, tarjan_scc
from .errors import (
    AmbiguousParse,
    CtError,
    InpSearchError,
    LinearEdgeConflict,
    NotCompletelySplit,
    NotStronglyConnected,
)
from .graph import Circuit, Turn, base, cyclic_free_reduce, free_reduce, inv, reverse_word, word_key
from .maps import (
    EG,
    NEG,
    ZERO,
    Filtration,
    GatePartition,
    GraphMap,
    TransitionData,
    check_rtt,
    gates,
    illegal_turns,
    lamination_orientation,
    transition_data,
    turn_is_legal,
)

DEFAULT_INP_BUDGET = 6
DEFAULT_ZERO_DEPTH = 8
DEFAULT_TREE_HEIGHT = 4
ZERO_HARVEST_CAP = 200_000


def _compact(word) -> str:
    return "".join(word)


def _axis_text(w) -> str:
    return _compact(w) if len(w) == 1 else f"({_compact(w)})"


def _power(w, k: int) -> tuple:
    return tuple(w) * k if k >= 0 else reverse_word(w) * (-k)


def _primitive_root(u: tuple):
    """(w, d) with u = w^d and w not a proper power."""
    n = len(u)
    for p in range(1, n + 1):
        if n % p == 0 and u[:p] * (n // p) == u:
            return u[:p], n // p
    return u, 1


# ---------------------------------------------------------------------------
# inventory types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearEdge:
    edge: str
    axis: tuple  # closed Nielsen path, canonical orientation
    exponent: int

    @property
    def label(self) -> str:
        return self.edge


@dataclass(frozen=True)
class Family:
    """Template ``first . axis^k . last`` for NEG, exceptional and quasi-exceptional paths."""

    kind: str  # "neg", "exc", "qe"
    first: str
    axis: tuple
    last: str
    omega: int = 0
    sign: int = 1  # exponent sign for which a QE path splits into edges

    @property
    def label(self) -> str:
        prefix = {"neg": "NEG", "exc": "EXC", "qe": "QE"}[self.kind]
        return f"{prefix}:{self.first}.{_axis_text(self.axis)}^*.{self.last}"

    @property
    def omega_label(self) -> str:
        return f"{self.first}{_axis_text(self.axis)}*{self.last}"

    def reversed(self) -> "Family":
        return Family(self.kind, inv(self.last), reverse_word(self.axis), inv(self.first), -self.omega, self.sign)

    def instantiate(self, k: int) -> tuple:
        return (self.first,) + _power(self.axis, k) + (self.last,)

    def allows(self, k: int) -> bool:
        return k != 0 if self.kind == "neg" else True


@dataclass(frozen=True)
class Term:
    kind: str  # edge, inp, zero, neg, exc, qe
    label: str
    edges: tuple
    exponent: int | None = None

    @property
    def is_family(self) -> bool:
        return self.kind in ("neg", "exc", "qe")

    def __str__(self):
        return self.label if self.exponent is None else f"{self.label}[{self.exponent}]"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "label": self.label, "edges": list(self.edges)}
        if self.exponent is not None:
            out["exponent"] = self.exponent
        return out


@dataclass
class CtData:
    f: GraphMap
    filt: Filtration
    td: TransitionData
    gp: GatePartition
    linear_edges: list
    inps: list
    neg_families: list
    exceptional_families: list  # canonical orientation (i < j)
    qe_families: list
    zero_paths: list
    zero_depth: int
    inverse: bool = False
    notes: list = field(default_factory=list)

    def linear(self, e: str) -> LinearEdge | None:
        for le in self.linear_edges:
            if le.edge == e:
                return le
        return None

    def edge_terms(self) -> list:
        out = []
        for s in self.td.strata:
            if s.kind == ZERO:
                continue
            for e in s.edges:
                out.append(Term("edge", e, (e,)))
                out.append(Term("edge", inv(e), (inv(e),)))
        return out

    def templates(self, qe: bool = False) -> list:
        out = list(self.neg_families)
        for fam in self.exceptional_families:
            out.extend([fam, fam.reversed()])
        if qe:
            for fam in self.qe_families:
                out.extend([fam, fam.reversed()])
        return out

    def fixed_terms(self) -> list:
        out = []
        for rho in self.inps:
            out.append(Term("inp", "INP:" + _compact(rho), tuple(rho)))
            out.append(Term("inp", "INP:" + _compact(reverse_word(rho)), reverse_word(rho)))
        for z in self.zero_paths:
            out.append(Term("zero", "ZERO:" + _compact(z), tuple(z)))
            out.append(Term("zero", "ZERO:" + _compact(reverse_word(z)), reverse_word(z)))
        return out

    def vertex_terms(self, qe: bool = False) -> list:
        """One representative term per CSP vertex (families instantiated at |k| = 1)."""
        terms = self.edge_terms() + self.fixed_terms()
        for fam in self.templates(qe):
            terms.append(Term(fam.kind, fam.label, fam.instantiate(fam.sign), fam.sign))
        return terms

    def family_by_label(self, label: str) -> Family:
        for fam in self.templates(qe=True):
            if fam.label == label:
                return fam
        raise CtError(f"no family labelled {label}")

    def to_json(self) -> dict:
        return {
            "linear_edges": [
                {"edge": le.edge, "axis": list(le.axis), "exponent": le.exponent} for le in self.linear_edges
            ],
            "inps": [list(r) for r in self.inps],
            "neg_families": [fam.label for fam in self.neg_families],
            "exceptional_families": [fam.label for fam in self.exceptional_families],
            "qe_families": [fam.label for fam in self.qe_families],
            "zero_paths": [list(z) for z in self.zero_paths],
            "zero_paths_complete_to_depth": self.zero_depth,
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# Nielsen paths
# ---------------------------------------------------------------------------

def _is_nielsen(f: GraphMap, word) -> bool:
    return f.f_sharp(tuple(word)) == tuple(word)


def _height(filt: Filtration, word) -> int:
    return max(filt.index_of(e) for e in word)


def _canonical_path(word) -> tuple:
    word = tuple(word)
    return min(word, reverse_word(word), key=word_key)


def _is_inp(f: GraphMap, gp: GatePartition, word) -> bool:
    if len(illegal_turns(gp, word)) != 1 or not _is_nielsen(f, word):
        return False
    return not any(_is_nielsen(f, word[:i]) for i in range(1, len(word)))


def _eg_height_filter(filt: Filtration, td: TransitionData, found) -> list:
    return [w for w in found if td.strata[_height(filt, w) - 1].kind == EG]


def inp_search_bounded(f: GraphMap, L: int, gp: GatePartition | None = None) -> list:
    """All indivisible Nielsen paths of length <= L with one illegal turn, one orientation each."""
    if L < 1:
        raise InpSearchError("search bound must be at least 1")
    gp = gp or gates(f)
    graph = f.domain
    found = set()
    stack = [((e,), 0) for e in reversed(graph.oriented_edges())]
    while stack:
        word, n_illegal = stack.pop()
        if n_illegal == 1 and _is_inp(f, gp, word):
            found.add(_canonical_path(word))
        if len(word) >= L:
            continue
        last = word[-1]
        for e in reversed(graph.directions_at(graph.terminus(last))):
            if e == inv(last):
                continue
            bad = not turn_is_legal(gp, Turn.of(inv(last), e))
            if n_illegal + bad <= 1:
                stack.append((word + (e,), n_illegal + bad))
    return sorted(found, key=word_key)


def _inps_in(f: GraphMap, gp: GatePartition, word, max_len: int) -> set:
    """INPs occurring as subpaths of ``word`` around each of its illegal turns."""
    out = set()
    bad = illegal_turns(gp, word)
    for idx, i in enumerate(bad):
        lo = bad[idx - 1] + 1 if idx > 0 else 0
        hi = bad[idx + 1] + 1 if idx + 1 < len(bad) else len(word)
        for s in range(max(lo, i + 2 - max_len), i + 1):
            for t in range(i + 2, min(hi, s + max_len) + 1):
                sub = word[s:t]
                if _is_inp(f, gp, sub):
                    out.add(_canonical_path(sub))
    return out


def inp_search_arrival_tree(f: GraphMap, filt: Filtration, h: int = DEFAULT_TREE_HEIGHT,
                            r=None, td: TransitionData | None = None, iterations: int = 8,
                            max_len: int = 64) -> list:
    """Nielsen paths found from pairs of equal-height rays leaving a fixed vertex.

    Rays leave each vertex through its unique arrival gate for the (orientable)
    lamination of EG stratum ``r`` (default: the top EG stratum).  Two distinct
    rays with the same edge-count vector end at a common point; the connecting
    path is iterated under f_# and the INPs in the result are collected.
    """
    td = td or transition_data(f, filt)
    gp = gates(f)
    egs = td.eg_strata()
    if not egs:
        raise InpSearchError("no EG stratum: use the bounded strategy")
    s = egs[-1] if r is None else (td.strata[r - 1] if isinstance(r, int) else td.stratum(r))
    lo = lamination_orientation(f, filt, s.index, td)
    if not lo.orientable or not lo.unique_arrival:
        raise InpSearchError(f"stratum {s.name}: {lo.verdict}; use the bounded strategy")
    graph = f.domain
    fixed = [v for v in graph.vertices if f.vertex_images[v] == v]
    if not fixed:
        raise InpSearchError("no fixed vertex for the arrival tree")
    v0 = fixed[0]
    backward = [inv(e) for e in lo.forward_edges()]
    step = {}
    for v in graph.vertices:
        step[v] = [e for e in backward if graph.origin(e) == v]

    found = set()
    level = [((), v0)]
    for height in range(1, h + 1):
        nxt = []
        for word, v in level:
            for e in step[v]:
                nxt.append((word + (e,), graph.terminus(e)))
        level = nxt
        groups: dict = {}
        for word, v in level:
            counts = tuple(sorted((base(e), word.count(e)) for e in set(word)))
            groups.setdefault((v, counts), []).append(word)
        for key in sorted(groups, key=str):
            rays = sorted(groups[key], key=word_key)
            for p, q in itertools.combinations(rays, 2):
                tau = free_reduce(reverse_word(p) + q)
                if not tau:
                    continue
                for _ in range(iterations):
                    found |= _inps_in(f, gp, tau, max_len)
                    if found:
                        break
                    tau = f.f_sharp(tau)
                    if len(tau) > 100_000:
                        break
        if found:
            break
    if not found:
        raise InpSearchError(f"no Nielsen path found up to height {h}")
    return sorted(_eg_height_filter(filt, td, found), key=word_key)


def inp_search(f: GraphMap, strategy: str = "bounded", L: int = DEFAULT_INP_BUDGET,
               h: int = DEFAULT_TREE_HEIGHT, filt: Filtration | None = None) -> list:
    if strategy == "bounded":
        return inp_search_bounded(f, L)
    if strategy == "arrival_tree":
        if filt is None:
            raise InpSearchError("arrival-tree search needs a filtration")
        return inp_search_arrival_tree(f, filt, h)
    raise InpSearchError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# building CT data
# ---------------------------------------------------------------------------

def _linear_edges(f: GraphMap, td: TransitionData, notes: list) -> list:
    out = []
    for s in td.strata:
        if s.kind != NEG or len(s.edges) != 1:
            continue
        e = s.edges[0]
        img = f.image(e)
        if not img or img[0] != e or len(img) == 1:
            notes.append(f"NEG edge {e} is not of the form E.u; treated as non-linear")
            continue
        u = img[1:]
        w, d = _primitive_root(u)
        if f.domain.origin(w[0]) != f.domain.terminus(w[-1]):
            raise CtError(f"suffix of f({e}) is not a closed path")
        if not _is_nielsen(f, w):
            notes.append(f"suffix of f({e}) is not a Nielsen path; {e} treated as non-linear")
            continue
        if d > 1 and cyclic_free_reduce(w) != w:
            raise CtError(f"axis of {e} is not cyclically reduced")
        if word_key(reverse_word(w)) < word_key(w):
            w, d = reverse_word(w), -d
        out.append(LinearEdge(e, tuple(w), d))
    return out


def _families(linear: list):
    negs, excs, qes = [], [], []
    for le in linear:
        negs.append(Family("neg", le.edge, le.axis, inv(le.edge)))
    for a, b in itertools.combinations(linear, 2):
        if a.axis != b.axis:
            continue
        if a.exponent == b.exponent:
            raise LinearEdgeConflict(
                f"linear edges {a.edge} and {b.edge} share axis {_compact(a.axis)} and exponent {a.exponent}"
            )
        kind = "exc" if (a.exponent > 0) == (b.exponent > 0) else "qe"
        sign = 1 if a.exponent > 0 else -1
        fam = Family(kind, a.edge, a.axis, inv(b.edge), a.exponent - b.exponent, sign if kind == "qe" else 1)
        (excs if kind == "exc" else qes).append(fam)
    return negs, excs, qes


def _harvest_zero_paths(f: GraphMap, td: TransitionData, depth: int) -> list:
    zero_edges = {e for s in td.strata if s.kind == ZERO for e in s.edges}
    if not zero_edges:
        return []
    found = set()
    for s in td.strata:
        if s.kind == ZERO:
            continue
        for e in s.edges:
            word = (e,)
            for _ in range(depth):
                word = f.f_sharp(word)
                if len(word) > ZERO_HARVEST_CAP:
                    break
                run = []
                for x in word + ("",):
                    if x and base(x) in zero_edges:
                        run.append(x)
                    elif run:
                        found.add(_canonical_path(run))
                        run = []
    return sorted(found, key=word_key)


def build_ct_data(f: GraphMap, filt: Filtration, inp_budget: int = DEFAULT_INP_BUDGET,
                  zero_depth: int = DEFAULT_ZERO_DEPTH, inverse: bool = False,
                  td: TransitionData | None = None) -> CtData:
    td = td or transition_data(f, filt)
    report = check_rtt(f, filt, td)
    if not report.passed:
        v = report.failures()[0]
        raise CtError(f"not a relative train track: {v.axiom} fails on {v.stratum} ({v.witness})")
    gp = gates(f)
    notes = []
    linear = _linear_edges(f, td, notes)
    negs, excs, qes = _families(linear)
    inps = _eg_height_filter(filt, td, inp_search_bounded(f, inp_budget, gp))
    per_stratum: dict = {}
    for rho in inps:
        per_stratum.setdefault(_height(filt, rho), []).append(rho)
    for r, rhos in per_stratum.items():
        if len(rhos) > 1:
            raise CtError(f"stratum {td.strata[r - 1].name} carries {len(rhos)} INPs")
    zeros = _harvest_zero_paths(f, td, zero_depth)
    return CtData(f, filt, td, gp, linear, inps, negs, excs, qes, zeros, zero_depth, inverse, notes)


# ---------------------------------------------------------------------------
# complete splittings
# ---------------------------------------------------------------------------

@dataclass
class Splitting:
    terms: list  # Term objects in order
    starts: list  # start index of each term in the input word
    cyclic: bool = False

    def labels(self) -> list:
        return [t.label for t in self.terms]

    def words(self) -> list:
        return [t.edges for t in self.terms]

    @property
    def cuts(self) -> set:
        return set(self.starts)

    def to_json(self) -> list:
        return [dict(t.to_json(), start=s) for t, s in zip(self.terms, self.starts)]


def _match_family(fam: Family, word, p: int):
    n = len(word)
    if word[p] != fam.first:
        return None
    m = len(fam.axis)
    for piece, sign in ((fam.axis, 1), (reverse_word(fam.axis), -1)):
        q, k = p + 1, 0
        while q + m <= n and tuple(word[q:q + m]) == piece:
            q += m
            k += 1
        if q < n and word[q] == fam.last and (k > 0 or sign > 0):
            kk = sign * k
            if fam.allows(kk):
                return q + 1, Term(fam.kind, fam.label, tuple(word[p:q + 1]), kk)
    return None


def _candidates(ct: CtData, word, qe: bool):
    """Per-position lists of (end, Term), longest first."""
    n = len(word)
    irreducible = {e for s in ct.td.strata if s.kind != ZERO for e in s.edges}
    fixed = ct.fixed_terms()
    templates = ct.templates(qe)
    out = []
    for p in range(n):
        cands = []
        if base(word[p]) in irreducible:
            cands.append((p + 1, Term("edge", word[p], (word[p],))))
        for t in fixed:
            q = p + len(t.edges)
            if q <= n and tuple(word[p:q]) == t.edges:
                cands.append((q, t))
        for fam in templates:
            hit = _match_family(fam, word, p)
            if hit:
                cands.append(hit)
        cands.sort(key=lambda c: (-c[0], not c[1].is_family))
        out.append(cands)
    return out


def _parse_linear(ct: CtData, word, allowed_cut, qe: bool):
    """Backward DP over legal cut positions.  Returns (terms, starts, parse_count<=2) or max reach."""
    n = len(word)
    cands = _candidates(ct, word, qe)
    count = [0] * (n + 1)
    choice = [None] * (n + 1)
    count[n] = 1
    for p in range(n - 1, -1, -1):
        for q, term in cands[p]:
            if q < n and not allowed_cut[q]:
                continue
            if count[q]:
                if choice[p] is None:
                    choice[p] = (q, term)
                count[p] = min(2, count[p] + count[q])
    if not count[0]:
        reach = {0}
        frontier = [0]
        while frontier:
            p = frontier.pop()
            for q, _ in cands[p] if p < n else []:
                if (q == n or allowed_cut[q]) and q not in reach:
                    reach.add(q)
                    frontier.append(q)
        return None, max(reach)
    terms, starts, p = [], [], 0
    while p < n:
        q, term = choice[p]
        terms.append(term)
        starts.append(p)
        p = q
    return (terms, starts, count[0]), None


def _check_ambiguity(terms, n_parses, where):
    if n_parses > 1 and not any(t.is_family for t in terms):
        raise AmbiguousParse(f"{where} has more than one complete splitting")


def complete_split(ct: CtData, path, qe: bool = False) -> Splitting:
    """Parse a path or circuit into splitting terms with legal junctures.

    With ``qe`` the result is the QE coarsening: runs ``E_i . w^k . E_j'`` for a
    quasi-exceptional pair are merged into one term.
    """
    gp = ct.gp
    if isinstance(path, Circuit):
        split = _split_circuit(ct, path)
    else:
        word = tuple(path)
        if not word:
            return Splitting([], [])
        allowed = [False] + [turn_is_legal(gp, Turn.of(inv(word[i - 1]), word[i])) for i in range(1, len(word))]
        res, reach = _parse_linear(ct, word, allowed, qe=False)
        if res is None:
            raise NotCompletelySplit(f"path is not completely split; parsing stops at position {reach}", reach)
        terms, starts, n_parses = res
        _check_ambiguity(terms, n_parses, "path")
        split = Splitting(terms, starts)
    return qe_coarsen(ct, split) if qe else split


def _split_circuit(ct: CtData, circ: Circuit) -> Splitting:
    word = circ.edges
    n = len(word)
    legal = [turn_is_legal(ct.gp, Turn.of(inv(word[i - 1]), word[i])) for i in range(n)]
    best_reach = 0
    for c in range(n):
        if not legal[c]:
            continue
        rot = word[c:] + word[:c]
        allowed = [False] + [legal[(c + i) % n] for i in range(1, n)]
        res, reach = _parse_linear(ct, rot, allowed, qe=False)
        if res is None:
            best_reach = max(best_reach, (c + reach) % n if reach < n else c)
            continue
        terms, starts, n_parses = res
        _check_ambiguity(terms, n_parses, "circuit")
        return Splitting(terms, [(c + s) % n for s in starts], cyclic=True)
    if not any(legal):
        raise NotCompletelySplit("circuit takes no legal turn", 0)
    raise NotCompletelySplit(f"circuit is not completely split; parsing stops at position {best_reach}", best_reach)


def qe_coarsen(ct: CtData, split: Splitting) -> Splitting:
    if not ct.qe_families:
        return split
    fams = []
    for fam in ct.qe_families:
        fams.extend([fam, fam.reversed()])
    terms, starts = list(split.terms), list(split.starts)
    n = len(terms)
    out_terms, out_starts = [], []
    i = 0
    while i < n:
        merged = None
        t = terms[i]
        if t.kind == "edge":
            for fam in fams:
                if t.edges[0] != fam.first:
                    continue
                mid = ()
                for j in range(i + 1, n):
                    u = terms[j]
                    if u.kind == "edge" and u.edges[0] == fam.last:
                        m = len(fam.axis)
                        k, rem = divmod(len(mid), m)
                        if rem == 0 and mid == tuple(fam.axis) * k:
                            merged = (j, Term("qe", fam.label, t.edges + mid + u.edges, k))
                        elif rem == 0 and mid == reverse_word(fam.axis) * k:
                            merged = (j, Term("qe", fam.label, t.edges + mid + u.edges, -k))
                        break
                    mid += u.edges
                if merged:
                    break
        if merged:
            j, term = merged
            out_terms.append(term)
            out_starts.append(starts[i])
            i = j + 1
        else:
            out_terms.append(t)
            out_starts.append(starts[i])
            i += 1
    return Splitting(out_terms, out_starts, split.cyclic)


def verify_splitting_report(f: GraphMap, path, decomposition, k_max: int = 5, gp: GatePartition | None = None) -> dict:
    """Juncture legality plus direct expansion of f^k_# for k <= k_max."""
    gp = gp or gates(f)
    pieces = [tuple(p) for p in decomposition]
    cyclic = isinstance(path, Circuit)
    word = tuple(path)
    if tuple(x for p in pieces for x in p) != word or any(not p for p in pieces):
        raise CtError("decomposition does not concatenate to the path")
    junctures = [(pieces[i][-1], pieces[i + 1][0]) for i in range(len(pieces) - 1)]
    if cyclic and len(pieces) > 1:
        junctures.append((pieces[-1][-1], pieces[0][0]))
    verdicts = [turn_is_legal(gp, Turn.of(inv(a), b)) for a, b in junctures]
    cancellation = []
    current = pieces
    for k in range(1, k_max + 1):
        current = [f.f_sharp(p) for p in current]
        glued = tuple(x for p in current for x in p)
        tight = cyclic_free_reduce(glued) if cyclic else free_reduce(glued)
        cancellation.append(len(glued) - len(tight))
    return {"legal": all(verdicts), "juncture_legal": verdicts, "cancellation": cancellation}


def verify_splitting(f: GraphMap, path, decomposition, k_max: int = 5, gp: GatePartition | None = None) -> bool:
    rep = verify_splitting_report(f, path, decomposition, k_max, gp)
    if rep["legal"] and any(rep["cancellation"]):
        raise CtError("legal junctures cancelled under iteration; gate data is inconsistent")
    return rep["legal"]


# ---------------------------------------------------------------------------
# CSP digraph
# ---------------------------------------------------------------------------

@dataclass
class CspGraph:
    vertices: list  # sorted labels
    terms: dict  # label -> representative Term
    succ: dict  # label -> sorted list of labels
    mode: str = "full"

    def edges(self) -> list:
        return [(u, v) for u in self.vertices for v in self.succ[u]]

    def out_neighbours(self, label) -> list:
        return list(self.succ[label])

    def in_degree(self, label) -> int:
        return sum(label in self.succ[u] for u in self.vertices)

    def to_json(self) -> dict:
        return {"mode": self.mode, "vertices": self.vertices, "edges": [list(e) for e in self.edges()]}


def _joins(ct: CtData, s: Term, t: Term) -> bool:
    graph = ct.f.domain
    a, b = s.edges[-1], t.edges[0]
    return graph.terminus(a) == graph.origin(b) and turn_is_legal(ct.gp, Turn.of(inv(a), b))


def csp_graph(ct: CtData, coarsening: str = "full") -> CspGraph:
    if coarsening not in ("full", "qe"):
        raise CtError(f"unknown coarsening {coarsening!r}")
    terms = {t.label: t for t in ct.vertex_terms(qe=coarsening == "qe")}
    labels = sorted(terms)
    succ = {u: [v for v in labels if _joins(ct, terms[u], terms[v])] for u in labels}
    g = CspGraph(labels, terms, succ, coarsening)
    for u in labels:
        if not succ[u] or not g.in_degree(u):
            raise CtError(f"CSP vertex {u} has no {'outgoing' if not succ[u] else 'incoming'} edge")
    return g


@dataclass
class SccResult:
    components: list  # sorted label lists, numbered by least label
    condensation: list  # (i, j) component edges

    def __len__(self):
        return len(self.components)

    def index_of(self, label) -> int:
        for i, comp in enumerate(self.components):
            if label in comp:
                return i
        raise KeyError(label)


def scc(g: CspGraph) -> SccResult:
    comps = tarjan_scc(g.vertices, lambda v: g.succ[v])
    comps = sorted((sorted(c) for c in comps), key=lambda c: c[0])
    where = {v: i for i, c in enumerate(comps) for v in c}
    cond = sorted({(where[u], where[v]) for u, v in g.edges() if where[u] != where[v]})
    return SccResult(comps, cond)


@dataclass
class CoveringCircuit:
    circuit: Circuit
    walk: list  # CSP labels in order
    terms: list  # instantiated Terms
    splitting: Splitting
    image_splitting: Splitting
    refines: bool

    def to_json(self) -> dict:
        return {
            "circuit": " ".join(self.circuit.edges),
            "terms": [t.to_json() for t in self.terms],
            "walk": self.walk,
            "image": " ".join(self.image_splitting_word()),
            "image_refines": self.refines,
        }

    def image_splitting_word(self) -> tuple:
        return tuple(x for t in self.image_splitting.terms for x in t.edges)


def covering_circuit(ct: CtData, g: CspGraph, exponent: int = 1, exponent_floor: int | None = None) -> CoveringCircuit:
    """A closed walk through every CSP vertex, instantiated as a completely split circuit."""
    if not g.vertices:
        raise NotStronglyConnected("empty CSP graph", [])
    comps = scc(g)
    if len(comps) > 1:
        raise NotStronglyConnected(
            f"CSP graph has {len(comps)} strongly connected components", comps.components
        )
    succ = lambda v: g.succ[v]
    start = g.vertices[0]
    walk = [start]
    visited = {start}
    for v in g.vertices:
        if v in visited:
            continue
        seg = shortest_path(walk[-1], v, succ)
        walk.extend(seg[1:])
        visited.update(seg)
    seg = shortest_path(walk[-1], start, succ)
    walk.extend(seg[1:-1])

    k = exponent if exponent_floor is None else max(exponent, exponent_floor)
    terms = []
    for label in walk:
        t = g.terms[label]
        if t.is_family:
            fam = ct.family_by_label(label)
            terms.append(Term(fam.kind, label, fam.instantiate(fam.sign * k), fam.sign * k))
        else:
            terms.append(t)
    word = tuple(x for t in terms for x in t.edges)
    if cyclic_free_reduce(word) != word:
        raise CtError("instantiated covering walk cancels; CT data is inconsistent")
    circ = Circuit(word)
    qe = g.mode == "qe"
    split = complete_split(ct, circ, qe=qe)
    if qe:
        if not set(g.vertices) <= set(split.labels()):
            raise CtError("re-parsed covering circuit misses some CSP labels")
    else:
        n_terms = len(terms)
        starts = [sum(len(t.edges) for t in terms[:i]) for i in range(n_terms)]
        if set(split.starts) != set(starts) or sorted(split.labels()) != sorted(t.label for t in terms):
            raise CtError("re-parsed covering circuit differs from its defining terms")
    image_split, refines = _image_refinement(ct, circ, split)
    return CoveringCircuit(circ, walk, terms, split, image_split, refines)


def _image_refinement(ct: CtData, circ: Circuit, split: Splitting):
    """Split f_#(circ) and check that images of the original cuts are cuts of the new splitting."""
    f = ct.f
    word = circ.edges
    order = sorted(range(len(split.starts)), key=lambda i: split.starts[i])
    starts = [split.starts[i] for i in order]
    # rotate so that the first cut sits at index 0; pieces are then contiguous
    c0 = starts[0]
    rot = word[c0:] + word[:c0]
    rel = [s - c0 for s in starts] + [len(word)]
    pieces = [rot[rel[i]:rel[i + 1]] for i in range(len(rel) - 1)]
    images = [f.f_sharp(p) for p in pieces]
    glued = tuple(x for p in images for x in p)
    if cyclic_free_reduce(glued) != glued:
        return complete_split(ct, f.f_sharp(circ)), False
    image_cuts = set()
    pos = 0
    for p in images:
        image_cuts.add(pos)
        pos += len(p)
    new = complete_split(ct, Circuit(glued))
    return new, image_cuts <= new.cuts


def export_dot(g: CspGraph) -> str:
    lines = ["digraph csp {"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for u, v in g.edges():
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
