"""Group-expression language and graph-of-groups documents.

Grammar (whitespace is insignificant)::

    expr   := factor ('*' factor)*
    factor := 'Z' ['^' uint] | 'Z/' uint | '1' | '(' atom ('x' atom)* ')'
    atom   := 'Z' ['^' uint] | 'Z/' uint

``*`` is free product and ``x`` direct product.  Moduli must be at least 2:
``Z/1`` and ``Z/0`` are rejected (write ``1`` for the trivial group), while
``Z^0`` is accepted as trivial.  Error positions are 0-based character
offsets into the input.
"""

import json
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .core import AbelianFactor, canonical_torsion, normalize, normalize_counts
from .errors import ParseError, SpecError

_TOKEN = re.compile(r"\s*(?:(\d+)|(\S))")


def _tokenize(text):
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), m.start(1)))
        else:
            ch = m.group(2)
            if ch not in "Z^/*x()":
                raise ParseError(f"unexpected character {ch!r}", m.start(2))
            tokens.append((ch, ch, m.start(2)))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind, what=None):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {what or repr(kind)}, found {found}", tok[2])
        self.i += 1
        return tok

    def uint(self):
        return int(self.take("num", "an unsigned integer")[1])

    def expr(self):
        factors = [self.factor()]
        while self.peek()[0] == "*":
            self.i += 1
            factors.append(self.factor())
        self.take("end", "'*' or end of input")
        return factors

    def factor(self):
        kind, text, pos = self.peek()
        if kind == "num":
            if text != "1":
                raise ParseError(f"only the literal 1 may stand alone, found {text!r}", pos)
            self.i += 1
            return AbelianFactor()
        if kind == "(":
            self.i += 1
            parts = [self.atom()]
            while self.peek()[0] == "x":
                self.i += 1
                parts.append(self.atom())
            self.take(")", "'x' or ')'")
            return _combine(parts)
        return _combine([self.atom()])

    def atom(self):
        self.take("Z", "'Z'")
        kind = self.peek()[0]
        if kind == "^":
            self.i += 1
            return ("free", self.uint())
        if kind == "/":
            self.i += 1
            pos = self.peek()[2]
            n = self.uint()
            if n < 2:
                raise ParseError(f"modulus must be >= 2, got {n}", pos)
            return ("cyclic", n)
        return ("free", 1)


@lru_cache(maxsize=None)
def _combine_cached(parts):
    rank = sum(n for k, n in parts if k == "free")
    orders = [n for k, n in parts if k == "cyclic"]
    return AbelianFactor(rank, tuple(canonical_torsion(orders)))


def _combine(parts):
    return _combine_cached(tuple(parts))


def parse_group(text):
    """Parse a free-product expression into a normalized Presentation.

    >>> str(parse_group("(Z x Z/2 x Z/3) * Z"))
    '(Z x Z/6) * Z'
    """
    try:
        pieces = Counter(text.split("*"))
        return normalize_counts((_piece(x), k) for x, k in pieces.items())
    except ParseError:
        return normalize(_Parser(text).expr())  # raises with the position in ``text``


@lru_cache(maxsize=4096)
def _piece(text):
    """One ``*``-separated factor; cached since long products repeat factors."""
    p = _Parser(text)
    f = p.factor()
    p.take("end", "'*' or end of input")
    return f


def parse_factor(text):
    """Parse a single abelian group, e.g. ``"Z^2 x Z/2"`` or ``"(Z x Z/4)"``.

    Used for graph-of-groups vertex and edge groups, where the enclosing
    parentheses of a direct product are optional.
    """
    p = _Parser(text)
    if p.peek()[0] in ("num", "("):
        f = p.factor()
    else:
        parts = [p.atom()]
        while p.peek()[0] == "x":
            p.i += 1
            parts.append(p.atom())
        f = _combine(parts)
    p.take("end", "end of input")
    return f


def format_factor(f):
    atoms = []
    if f.rank == 1:
        atoms.append("Z")
    elif f.rank > 1:
        atoms.append(f"Z^{f.rank}")
    atoms.extend(f"Z/{d}" for d in f.torsion)
    if not atoms:
        return "1"
    if len(atoms) == 1:
        return atoms[0]
    return "(" + " x ".join(atoms) + ")"


def format_group(P):
    if not len(P):
        return "1"
    return " * ".join(" * ".join([format_factor(f)] * k) for f, k in P.runs)


@dataclass(frozen=True)
class GogVertex:
    id: str
    group: AbelianFactor


@dataclass(frozen=True)
class GogEdge:
    id: str
    ends: tuple
    group: AbelianFactor


@dataclass(frozen=True)
class GraphOfGroupsSpec:
    vertices: tuple
    edges: tuple

    def vertex(self, vid):
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)


def _require(cond, message):
    if not cond:
        raise SpecError(message)


def _group_field(obj, where):
    _require(isinstance(obj, dict) and isinstance(obj.get("group"), str),
             f"{where}: missing string field 'group'")
    try:
        return parse_factor(obj["group"])
    except ParseError as exc:
        raise SpecError(f"{where}: {exc}") from exc


def parse_gog(document):
    """Validate a graph-of-groups document (JSON text or an already-loaded dict)."""
    from .gog import embeddable  # avoids an import cycle

    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed JSON: {exc}") from exc
    _require(isinstance(document, dict), "document must be a JSON object")
    raw_vertices = document.get("vertices")
    raw_edges = document.get("edges", [])
    _require(isinstance(raw_vertices, list) and raw_vertices, "'vertices' must be a non-empty list")
    _require(isinstance(raw_edges, list), "'edges' must be a list")

    vertices = []
    seen = set()
    for k, rv in enumerate(raw_vertices):
        _require(isinstance(rv, dict) and isinstance(rv.get("id"), str), f"vertex {k}: missing string 'id'")
        _require(rv["id"] not in seen, f"duplicate vertex id {rv['id']!r}")
        seen.add(rv["id"])
        vertices.append(GogVertex(rv["id"], _group_field(rv, f"vertex {rv['id']!r}")))
    by_id = {v.id: v for v in vertices}

    edges = []
    seen_e = set()
    for k, re_ in enumerate(raw_edges):
        _require(isinstance(re_, dict) and isinstance(re_.get("id"), str), f"edge {k}: missing string 'id'")
        eid = re_["id"]
        _require(eid not in seen_e, f"duplicate edge id {eid!r}")
        seen_e.add(eid)
        ends = re_.get("ends")
        _require(isinstance(ends, list) and len(ends) == 2 and all(isinstance(x, str) for x in ends),
                 f"edge {eid!r}: 'ends' must be a list of two vertex ids")
        for x in ends:
            _require(x in by_id, f"edge {eid!r}: unknown vertex id {x!r}")
        group = _group_field(re_, f"edge {eid!r}")
        _require(group.rank == 0, f"edge {eid!r}: edge group must be finite")
        for x in ends:
            target = by_id[x].group.torsion
            _require(embeddable(group.torsion, target),
                     f"edge {eid!r}: edge group {group} does not embed in the torsion of vertex {x!r}")
        edges.append(GogEdge(eid, tuple(ends), group))

    # connectivity of the underlying graph
    adj = {v.id: set() for v in vertices}
    for e in edges:
        u, w = e.ends
        adj[u].add(w)
        adj[w].add(u)
    stack = [vertices[0].id]
    reached = {stack[0]}
    while stack:
        for w in adj[stack.pop()]:
            if w not in reached:
                reached.add(w)
                stack.append(w)
    _require(len(reached) == len(vertices), "underlying graph is disconnected")
    return GraphOfGroupsSpec(tuple(vertices), tuple(edges))


def gog_to_json(spec):
    return {
        "vertices": [{"id": v.id, "group": format_factor(v.group)} for v in spec.vertices],
        "edges": [{"id": e.id, "ends": list(e.ends), "group": format_factor(e.group)} for e in spec.edges],
    }
