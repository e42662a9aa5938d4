"""Finite graphs with oriented edges, reduced edge paths, circuits and turns.

Oriented edges are plain strings.  An edge ``a`` has reversal ``a'``; the
reversal of ``a'`` is ``a``.  Words are tuples of oriented edge strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GraphError

EDGE_RE = re.compile(r"[a-z][a-z0-9_]*")
VERTEX_RE = re.compile(r"v[a-z0-9_]*")

Word = tuple


def inv(e: str) -> str:
    return e[:-1] if e.endswith("'") else e + "'"


def base(e: str) -> str:
    return e[:-1] if e.endswith("'") else e


def is_reversed(e: str) -> bool:
    return e.endswith("'")


def edge_key(e: str):
    """Fixed total order on oriented edges: a < a' < b < b' < ..."""
    return (base(e), is_reversed(e))


def word_key(word: Sequence[str]):
    return tuple(edge_key(e) for e in word)


def reverse_word(word: Sequence[str]) -> Word:
    return tuple(inv(e) for e in reversed(word))


def format_word(word: Sequence[str]) -> str:
    return " ".join(word)


def free_reduce(word: Iterable[str]) -> Word:
    """Cancel adjacent ``e e'`` pairs with a stack (no composability check)."""
    out: list[str] = []
    for e in word:
        if out and out[-1] == inv(e):
            out.pop()
        else:
            out.append(e)
    return tuple(out)


def cyclic_free_reduce(word: Iterable[str]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == inv(w[j - 1]):
        i += 1
        j -= 1
    return w[i:j]


def least_rotation(word: Sequence[str]) -> Word:
    w = tuple(word)
    if not w:
        return w
    return min((w[i:] + w[:i] for i in range(len(w))), key=word_key)


@dataclass(frozen=True)
class Turn:
    """Unordered pair of directions sharing an initial vertex."""

    first: str
    second: str

    @classmethod
    def of(cls, e1: str, e2: str) -> "Turn":
        if edge_key(e2) < edge_key(e1):
            e1, e2 = e2, e1
        return cls(e1, e2)

    @property
    def degenerate(self) -> bool:
        return self.first == self.second

    def __str__(self):
        return "{%s,%s}" % (self.first, self.second)


@dataclass(frozen=True)
class EdgePath:
    """A reduced edge path.  Trivial paths keep their basepoint."""

    edges: Word
    start: str
    end: str

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __getitem__(self, i):
        return self.edges[i]

    @property
    def trivial(self) -> bool:
        return not self.edges

    def reverse(self) -> "EdgePath":
        return EdgePath(reverse_word(self.edges), self.end, self.start)

    def __str__(self):
        return format_word(self.edges) if self.edges else f"<trivial at {self.start}>"


class Circuit:
    """A cyclically reduced cyclic edge word.

    The stored rotation is kept as given (term sequences index into it);
    equality and hashing use the least rotation, so rotations compare equal.
    Reversal is a different circuit unless ``canonical(unoriented=True)`` is
    used for comparison.
    """

    __slots__ = ("edges",)

    def __init__(self, edges: Iterable[str]):
        edges = tuple(edges)
        if not edges:
            raise GraphError("a circuit must be nonempty")
        self.edges = edges

    def canonical(self, unoriented: bool = False) -> Word:
        rot = least_rotation(self.edges)
        if unoriented:
            other = least_rotation(reverse_word(self.edges))
            rot = min(rot, other, key=word_key)
        return rot

    def rotated(self, i: int) -> "Circuit":
        i %= len(self.edges)
        return Circuit(self.edges[i:] + self.edges[:i])

    def reverse(self) -> "Circuit":
        return Circuit(reverse_word(self.edges))

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"Circuit({format_word(self.edges)!r})"

    def __str__(self):
        return format_word(self.edges)


class Graph:
    """A finite graph.  ``ends`` maps each positive edge name to (initial, terminal)."""

    def __init__(self, vertices: Iterable[str], ends: dict, strict: bool = False):
        self.vertices = tuple(vertices)
        self.edges = tuple(ends)
        self._ends = dict(ends)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        for e, (a, b) in self._ends.items():
            if e.endswith("'") or not EDGE_RE.fullmatch(e):
                raise GraphError(f"bad edge id {e!r}")
            if a not in vset or b not in vset:
                raise GraphError(f"edge {e} references unknown vertex")
        valence = self.valence()
        for v in self.vertices:
            if valence[v] == 0:
                raise GraphError(f"isolated vertex {v}")
            if strict and valence[v] == 1:
                raise GraphError(f"valence-one vertex {v}")

    @classmethod
    def rose(cls, names: Iterable[str], vertex: str = "v0") -> "Graph":
        return cls([vertex], {e: (vertex, vertex) for e in names})

    def origin(self, e: str) -> str:
        try:
            a, b = self._ends[base(e)]
        except KeyError:
            raise GraphError(f"unknown edge {e!r}") from None
        return b if is_reversed(e) else a

    def terminus(self, e: str) -> str:
        return self.origin(inv(e))

    def has_edge(self, e: str) -> bool:
        return base(e) in self._ends

    def oriented_edges(self) -> Word:
        return tuple(x for e in self.edges for x in (e, inv(e)))

    def directions_at(self, v: str) -> Word:
        return tuple(e for e in self.oriented_edges() if self.origin(e) == v)

    def valence(self) -> dict:
        val = {v: 0 for v in self.vertices}
        for e, (a, b) in self._ends.items():
            val[a] += 1
            val[b] += 1
        return val

    def components(self) -> list:
        """Connected components as (vertex tuple, edge tuple), ordered by first vertex."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self._ends.values():
            parent[find(a)] = find(b)
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        out = []
        for vs in groups.values():
            vset = set(vs)
            es = tuple(e for e in self.edges if self._ends[e][0] in vset)
            out.append((tuple(vs), es))
        return out

    @property
    def rank(self) -> int:
        return len(self.edges) - len(self.vertices) + len(self.components())

    def is_circle(self, component) -> bool:
        vs, es = component
        return len(vs) == len(es) and all(self.valence()[v] == 2 for v in vs)

    def check_composable(self, word: Sequence[str]) -> None:
        for e in word:
            if not self.has_edge(e):
                raise GraphError(f"unknown edge {e!r}")
        for i in range(len(word) - 1):
            if self.terminus(word[i]) != self.origin(word[i + 1]):
                raise GraphError(
                    f"non-composable word at position {i}: {word[i]} then {word[i + 1]}"
                )

    def path(self, word: Sequence[str], start: str | None = None) -> EdgePath:
        """Wrap an already reduced word as an EdgePath (checked)."""
        word = tuple(word)
        self.check_composable(word)
        if free_reduce(word) != word:
            raise GraphError(f"word is not reduced: {format_word(word)}")
        if not word:
            if start is None:
                raise GraphError("trivial path needs a basepoint")
            return EdgePath((), start, start)
        return EdgePath(word, self.origin(word[0]), self.terminus(word[-1]))

    def parse_word(self, text: str) -> Word:
        """Tokenize an edge word such as ``"a b a' b'"``, ``"aba'b'"`` or ``"b a^2 c'"``."""
        names = sorted(self.edges, key=len, reverse=True)
        out: list[str] = []
        for chunk in re.split(r"[\s.·]+", text.strip()):
            pos = 0
            while pos < len(chunk):
                for name in names:
                    if chunk.startswith(name, pos):
                        break
                else:
                    raise GraphError(f"cannot tokenize {chunk!r} at offset {pos}")
                pos += len(name)
                e = name
                if chunk.startswith("'", pos):
                    e = inv(e)
                    pos += 1
                m = re.match(r"\^(-?\d+)", chunk[pos:])
                power = 1
                if m:
                    power = int(m.group(1))
                    pos += m.end()
                if power < 0:
                    e, power = inv(e), -power
                out.extend([e] * power)
        return tuple(out)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.vertices == other.vertices
            and self._ends == other._ends
        )

    def __hash__(self):
        return hash((self.vertices, tuple(sorted(self._ends.items()))))

    def __repr__(self):
        return f"Graph(vertices={self.vertices}, edges={self.edges})"


def tighten(graph: Graph, walk: Sequence[str], start: str | None = None) -> EdgePath:
    """Reduce a composable walk to the unique reduced path rel endpoints."""
    walk = tuple(walk)
    graph.check_composable(walk)
    if not walk:
        if start is None:
            raise GraphError("empty walk needs a basepoint")
        return EdgePath((), start, start)
    s, t = graph.origin(walk[0]), graph.terminus(walk[-1])
    return EdgePath(free_reduce(walk), s, t)


def cyclically_reduce(graph: Graph, walk: Sequence[str]) -> Circuit:
    """Cyclically reduce a closed walk; returns the least rotation."""
    walk = tuple(walk)
    if not walk:
        raise GraphError("empty cyclic word")
    graph.check_composable(walk)
    if graph.terminus(walk[-1]) != graph.origin(walk[0]):
        raise GraphError("cyclic word is not closed")
    w = cyclic_free_reduce(walk)
    if not w:
        raise GraphError("cyclic word reduces to a trivial loop")
    return Circuit(least_rotation(w))


def turns_of(path) -> list:
    """Turns taken by a path (or circuit, including the wraparound turn)."""
    word = tuple(path)
    turns = [Turn.of(inv(word[i]), word[i + 1]) for i in range(len(word) - 1)]
    if isinstance(path, Circuit):
        turns.append(Turn.of(inv(word[-1]), word[0]))
    return turns
