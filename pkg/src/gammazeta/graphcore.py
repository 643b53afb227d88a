"""Finite undirected multigraphs, the ``gamma-graph v1`` text format, and
the non-backtracking arc system built on top of them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import errors

HEADER = "gamma-graph v1"
RUN_HEADER_PREFIX = "gamma-zeta-lab "

Point = tuple[float, float, float]


@dataclass(frozen=True)
class Vertex:
    id: str
    coords: Point | None = None


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    polyline: tuple[Point, ...] | None = None

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


def _as_point(p: Iterable[float]) -> Point:
    x, y, z = (float(c) for c in p)
    return (x, y, z)


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph; vertex and edge order is insertion order.

    Self-loops and parallel edges are allowed.  Coordinates are optional
    but all-or-nothing over the vertex set.
    """

    vertices: tuple[Vertex, ...] = ()
    edges: tuple[Edge, ...] = ()
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        index: dict[str, int] = {}
        for i, vx in enumerate(self.vertices):
            if vx.id in index:
                raise ValueError(f"duplicate vertex id {vx.id!r}")
            index[vx.id] = i
        seen: set[str] = set()
        for e in self.edges:
            if e.id in seen:
                raise ValueError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            for end in (e.u, e.v):
                if end not in index:
                    raise errors.ReferenceError(
                        f"edge {e.id!r} refers to undeclared vertex {end!r}")
        with_coords = sum(vx.coords is not None for vx in self.vertices)
        if 0 < with_coords < len(self.vertices):
            raise ValueError("embedding is all-or-nothing: some vertices lack coordinates")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_edges(cls, pairs: Iterable[tuple[str, str]],
                   vertex_ids: Sequence[str] | None = None) -> "Multigraph":
        """Convenience constructor: edges named e0, e1, ... in order."""
        pairs = list(pairs)
        if vertex_ids is None:
            vertex_ids = []
            for u, v in pairs:
                for w in (u, v):
                    if w not in vertex_ids:
                        vertex_ids.append(w)
        verts = tuple(Vertex(str(w)) for w in vertex_ids)
        edges = tuple(Edge(f"e{i}", str(u), str(v)) for i, (u, v) in enumerate(pairs))
        return cls(verts, edges)

    @property
    def embedded(self) -> bool:
        return bool(self.vertices) and self.vertices[0].coords is not None

    def vertex_index(self, vid: str) -> int:
        return self._index[vid]

    def vertex(self, vid: str) -> Vertex:
        return self.vertices[self._index[vid]]

    def degrees(self) -> dict[str, int]:
        deg = {vx.id: 0 for vx in self.vertices}
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    def require_embedding(self) -> None:
        if not self.embedded:
            raise errors.MissingEmbedding("operation needs vertex coordinates")


# --------------------------------------------------------------------------
# text format


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_point(p: Point) -> str:
    return " ".join(_fmt(c) for c in p)


def serialize_graph(g: Multigraph) -> str:
    lines = [HEADER]
    for vx in g.vertices:
        if vx.coords is None:
            lines.append(f"vertex {vx.id}")
        else:
            lines.append(f"vertex {vx.id} {_fmt_point(vx.coords)}")
    for e in g.edges:
        line = f"edge {e.id} {e.u} {e.v}"
        if e.polyline:
            line += " poly " + " ; ".join(_fmt_point(p) for p in e.polyline)
        lines.append(line)
    return "\n".join(lines) + "\n"


def _parse_floats(tokens: Sequence[str], lineno: int) -> Point:
    if len(tokens) != 3:
        raise errors.ParseError(f"expected 3 coordinates, got {len(tokens)}", lineno)
    try:
        return _as_point(float(t) for t in tokens)
    except ValueError:
        raise errors.ParseError(f"bad number in {' '.join(tokens)!r}", lineno) from None


def parse_graph(text: str) -> Multigraph:
    lines = text.splitlines()
    body = [(i + 1, ln.strip()) for i, ln in enumerate(lines)]
    body = [(n, ln) for n, ln in body if ln and not ln.startswith("#")]
    if body and body[0][1].startswith(RUN_HEADER_PREFIX):
        body = body[1:]
    if not body or body[0][1] != HEADER:
        raise errors.ParseError(f"missing {HEADER!r} header", body[0][0] if body else 1)

    verts: list[Vertex] = []
    edges: list[Edge] = []
    vids: set[str] = set()
    eids: set[str] = set()
    for lineno, ln in body[1:]:
        tok = ln.split()
        kind = tok[0]
        if kind == "vertex":
            if len(tok) not in (2, 5):
                raise errors.ParseError("vertex line needs an id and optionally 3 coordinates", lineno)
            if tok[1] in vids:
                raise errors.ParseError(f"duplicate vertex id {tok[1]!r}", lineno)
            vids.add(tok[1])
            coords = _parse_floats(tok[2:], lineno) if len(tok) == 5 else None
            verts.append(Vertex(tok[1], coords))
        elif kind == "edge":
            if len(tok) < 4:
                raise errors.ParseError("edge line needs an id and two endpoints", lineno)
            eid, u, v = tok[1:4]
            if eid in eids:
                raise errors.ParseError(f"duplicate edge id {eid!r}", lineno)
            eids.add(eid)
            for end in (u, v):
                if end not in vids:
                    raise errors.ReferenceError(
                        f"line {lineno}: edge {eid!r} refers to undeclared vertex {end!r}")
            poly = None
            rest = tok[4:]
            if rest:
                if rest[0] != "poly" or len(rest) == 1:
                    raise errors.ParseError("expected 'poly' followed by points", lineno)
                chunks = " ".join(rest[1:]).split(";")
                poly = tuple(_parse_floats(c.split(), lineno) for c in chunks)
            edges.append(Edge(eid, u, v, poly))
        else:
            raise errors.ParseError(f"unknown record {kind!r}", lineno)
    try:
        return Multigraph(tuple(verts), tuple(edges))
    except ValueError as exc:
        raise errors.ParseError(str(exc)) from None


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    min_degree: int
    md2: bool
    n_vertices: int
    n_edges: int

    @property
    def cycle_rank(self) -> int:
        return self.n_edges - self.n_vertices + 1


def validate(g: Multigraph) -> ValidationReport:
    n = len(g.vertices)
    deg = g.degrees()
    adj: dict[str, list[str]] = {vx.id: [] for vx in g.vertices}
    for e in g.edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    connected = False
    if n:
        start = g.vertices[0].id
        seen = {start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for x in adj[w]:
                if x not in seen:
                    seen.add(x)
                    queue.append(x)
        connected = len(seen) == n
    min_degree = min(deg.values()) if deg else 0
    return ValidationReport(connected, min_degree, n > 0 and min_degree >= 2, n, len(g.edges))


# --------------------------------------------------------------------------
# arc doubling


@dataclass(frozen=True)
class ArcSystem:
    """Directed arcs of a multigraph.

    Arc ``2i`` runs along edge ``i`` from ``u`` to ``v``; arc ``2i + 1`` is
    its reversal, so ``inverse(a) == a ^ 1``.  ``succ[a]`` lists the arcs
    that may follow ``a`` without backtracking.
    """

    tails: tuple[int, ...]
    heads: tuple[int, ...]
    succ: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tails)

    @staticmethod
    def inverse(a: int) -> int:
        return a ^ 1

    def matrix(self) -> list[list[int]]:
        """Non-backtracking adjacency ``T[a][b] = 1`` iff ``b`` may follow ``a``."""
        m = len(self)
        rows = [[0] * m for _ in range(m)]
        for a, nxt in enumerate(self.succ):
            for b in nxt:
                rows[a][b] = 1
        return rows


def build_arc_system(g: Multigraph) -> ArcSystem:
    tails: list[int] = []
    heads: list[int] = []
    labels: list[str] = []
    for e in g.edges:
        iu, iv = g.vertex_index(e.u), g.vertex_index(e.v)
        tails += [iu, iv]
        heads += [iv, iu]
        labels += [f"{e.id}+", f"{e.id}-"]
    out_of: list[list[int]] = [[] for _ in g.vertices]
    for a, t in enumerate(tails):
        out_of[t].append(a)
    succ = tuple(tuple(b for b in out_of[heads[a]] if b != a ^ 1) for a in range(len(tails)))
    return ArcSystem(tuple(tails), tuple(heads), succ, tuple(labels))
