"""Reader and writer for the line-oriented ``.gm`` input format.

Example::

    graph {
      vertices: v0
      edge a: v0 -> v0
      edge b: v0 -> v0
    }
    map {
      a -> a b
      b -> b a b
    }
    filtration {
      stratum H1 [EG]: a b
    }
    metric { a: 0.5 b: 1.25 }

Without a ``graph`` block the graph is the rose at ``v0`` on the map's edges.
Without a ``filtration`` block one is computed from the map.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import GmSyntaxError, GraphError, MapError
from .graph import Graph, format_word
from .maps import Filtration, GraphMap, Stratum, auto_filtration

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow>->)
  | (?P<punct>[{}:\[\]])
  | (?P<number>-?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)
  | (?P<word>[A-Za-z][A-Za-z0-9_]*'?(?:\^-?\d+)?)
    """,
    re.VERBOSE,
)

_VERTEX_KEY = re.compile(r"v\d*")


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise GmSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind if kind != "punct" else m.group(), m.group(), line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        return GmSyntaxError(msg, tok.line, tok.column)

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}")
        return self.next()

    def parse(self) -> dict:
        blocks: dict = {}
        while self.peek().kind != "eof":
            t = self.expect("word")
            if t.text in blocks:
                raise self.error(f"duplicate block {t.text!r}", t)
            handler = getattr(self, f"_block_{t.text}", None)
            if handler is None:
                raise self.error(f"unknown block {t.text!r}", t)
            self.expect("{")
            blocks[t.text] = (handler(), t)
            self.expect("}")
        return blocks

    def _block_graph(self):
        vertices, edges = None, []
        while self.peek().kind != "}":
            t = self.expect("word")
            if t.text == "vertices":
                self.expect(":")
                vertices = []
                while self.peek().kind == "word" and not (self.peek(1).kind == ":" or self.peek().text == "edge"):
                    vertices.append(self.next())
            elif t.text == "edge":
                name = self.expect("word")
                self.expect(":")
                a = self.expect("word")
                self.expect("arrow")
                b = self.expect("word")
                edges.append((name, a, b))
            else:
                raise self.error(f"expected 'vertices' or 'edge', found {t.text!r}", t)
        return vertices, edges

    def _block_map(self):
        entries = []
        while self.peek().kind != "}":
            key = self.expect("word")
            self.expect("arrow")
            image = []
            while self.peek().kind == "word" and self.peek(1).kind != "arrow":
                image.append(self.next())
            entries.append((key, image))
        return entries

    def _block_filtration(self):
        strata = []
        while self.peek().kind != "}":
            t = self.expect("word")
            if t.text != "stratum":
                raise self.error(f"expected 'stratum', found {t.text!r}", t)
            name = self.expect("word")
            tag = None
            if self.peek().kind == "[":
                self.next()
                tag = self.expect("word")
                self.expect("]")
            self.expect(":")
            edges = []
            while self.peek().kind == "word" and self.peek().text != "stratum":
                edges.append(self.next())
            strata.append((name, tag, edges))
        return strata

    def _block_metric(self):
        lengths = []
        while self.peek().kind != "}":
            name = self.expect("word")
            self.expect(":")
            value = self.expect("number")
            lengths.append((name, value))
        return lengths


@dataclass
class GmDocument:
    graph: Graph
    map: GraphMap | None = None
    filtration: Filtration | None = None
    metric: dict | None = None
    filtration_declared: bool = False


def _graph_from_block(block, strict: bool) -> Graph:
    (vertices, edges), tok = block
    if vertices is None:
        raise GmSyntaxError("graph block has no 'vertices' line", tok.line, tok.column)
    vids = [v.text for v in vertices]
    vset = set(vids)
    ends = {}
    for name, a, b in edges:
        for v in (a, b):
            if v.text not in vset:
                raise GmSyntaxError(f"edge {name.text} references unknown vertex {v.text}", v.line, v.column)
        if name.text in ends:
            raise GmSyntaxError(f"duplicate edge {name.text}", name.line, name.column)
        ends[name.text] = (a.text, b.text)
    try:
        return Graph(vids, ends, strict=strict)
    except GraphError as exc:
        raise GmSyntaxError(str(exc), tok.line, tok.column) from None


def parse_graph_spec(text: str, strict: bool = False) -> Graph:
    """Parse a ``graph { ... }`` block (other blocks are ignored)."""
    blocks = _Parser(text).parse()
    if "graph" in blocks:
        return _graph_from_block(blocks["graph"], strict)
    if "map" in blocks:
        return parse_gm(text, strict=strict).graph
    raise GmSyntaxError("no graph block", 1, 1)


def parse_gm(text: str, strict: bool = False) -> GmDocument:
    blocks = _Parser(text).parse()
    map_entries = blocks["map"][0] if "map" in blocks else None

    if "graph" in blocks:
        graph = _graph_from_block(blocks["graph"], strict)
        vertex_set = set(graph.vertices)
    elif map_entries is not None:
        names = [k.text for k, _ in map_entries if not _VERTEX_KEY.fullmatch(k.text)]
        graph = Graph.rose(names)
        vertex_set = {"v0"}
    else:
        raise GmSyntaxError("input has neither a graph nor a map block", 1, 1)

    gmap = None
    if map_entries is not None:
        images, vimages = {}, {}
        for key, image in map_entries:
            if key.text in vertex_set:
                if len(image) != 1 or image[0].text not in vertex_set:
                    raise GmSyntaxError(f"vertex {key.text} must map to a single vertex", key.line, key.column)
                vimages[key.text] = image[0].text
                continue
            if not graph.has_edge(key.text) or key.text.endswith("'"):
                raise GmSyntaxError(f"unknown edge {key.text}", key.line, key.column)
            if key.text in images:
                raise GmSyntaxError(f"duplicate image for {key.text}", key.line, key.column)
            try:
                images[key.text] = graph.parse_word(" ".join(t.text for t in image))
            except GraphError as exc:
                anchor = image[0] if image else key
                raise GmSyntaxError(str(exc), anchor.line, anchor.column) from None
        try:
            gmap = GraphMap(graph, images, vimages or None)
        except MapError as exc:
            tok = blocks["map"][1]
            raise GmSyntaxError(str(exc), tok.line, tok.column) from None

    filt, declared = None, False
    if "filtration" in blocks:
        strata = []
        for name, tag, edges in blocks["filtration"][0]:
            for e in edges:
                if not graph.has_edge(e.text) or e.text.endswith("'"):
                    raise GmSyntaxError(f"unknown edge {e.text}", e.line, e.column)
            strata.append(Stratum(name.text, tuple(e.text for e in edges), tag.text if tag else None))
        filt = Filtration(tuple(strata))
        declared = True
    elif gmap is not None:
        filt = auto_filtration(gmap)

    metric = None
    if "metric" in blocks:
        metric = {}
        for name, value in blocks["metric"][0]:
            if not graph.has_edge(name.text) or name.text.endswith("'"):
                raise GmSyntaxError(f"unknown edge {name.text}", name.line, name.column)
            v = float(value.text)
            if v <= 0:
                raise GmSyntaxError(f"edge length must be positive, got {value.text}", value.line, value.column)
            metric[name.text] = v
    return GmDocument(graph, gmap, filt, metric, declared)


def load_gm(path, strict: bool = False) -> GmDocument:
    text = Path(path).read_text(encoding="utf-8")
    return parse_gm(text, strict=strict)


def format_gm(graph: Graph, gmap: GraphMap | None = None, filt: Filtration | None = None,
              metric: dict | None = None) -> str:
    lines = ["graph {", "  vertices: " + " ".join(graph.vertices)]
    for e in graph.edges:
        lines.append(f"  edge {e}: {graph.origin(e)} -> {graph.terminus(e)}")
    lines.append("}")
    if gmap is not None:
        lines.append("map {")
        for e in graph.edges:
            lines.append(f"  {e} -> {format_word(gmap.image(e))}".rstrip())
        for v in graph.vertices:
            lines.append(f"  {v} -> {gmap.vertex_images[v]}")
        lines.append("}")
    if filt is not None:
        lines.append("filtration {")
        for s in filt.strata:
            tag = f" [{s.declared}]" if s.declared else ""
            lines.append(f"  stratum {s.name}{tag}: {' '.join(s.edges)}")
        lines.append("}")
    if metric:
        lines.append("metric {")
        for e in graph.edges:
            if e in metric:
                lines.append(f"  {e}: {metric[e]!r}")
        lines.append("}")
    return "\n".join(lines) + "\n"
