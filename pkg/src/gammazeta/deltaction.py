"""Slice / twist / re-glue surgery on embedded multigraphs.

The graph is cut by the mid-plane ``x_j = 1/2``.  Everything strictly on
the high side is rotated by a right angle about the plane's normal through
the cube centre, and the loose ends left on the plane are glued back onto
the fixed side.  The surgery is only defined when every loose end finds a
partner; there is no best-effort gluing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import errors
from .graphcore import Edge, Multigraph, Vertex
from .zeta import zeta_reciprocal

CENTER = np.array([0.5, 0.5, 0.5])
EPS_GLUE = 1e-5

_COS = {0: 1, 90: 0, 180: -1, 270: 0}
_SIN = {0: 0, 90: 1, 180: 0, 270: -1}


@dataclass(frozen=True)
class DeltaSpec:
    plane: int                  # 1..3
    angle: int = 90             # degrees
    eps_glue: float = EPS_GLUE

    def __post_init__(self) -> None:
        if self.plane not in (1, 2, 3):
            raise ValueError("plane must be 1, 2 or 3")
        if self.angle not in _COS:
            raise ValueError("angle must be one of 0, 90, 180, 270")
        if not self.eps_glue > 0:
            raise ValueError("eps_glue must be positive")

    def rotation(self) -> np.ndarray:
        """Exact right-angle rotation about the plane normal."""
        j = self.plane - 1
        a, b = (j + 1) % 3, (j + 2) % 3
        c, s = _COS[self.angle], _SIN[self.angle]
        r = np.eye(3)
        r[a, a], r[a, b] = c, -s
        r[b, a], r[b, b] = s, c
        return r


@dataclass(frozen=True)
class GluingReport:
    cut_points: int
    matched: int
    max_mismatch: float


@dataclass
class _Piece:
    edge: int
    side: int                          # +1 rotated, -1 / 0 fixed
    points: list                       # interior points, in path order
    ends: list = field(default_factory=list)   # two end records


# end records: ("V", vertex_id, edge, which) for a terminal end, where
# which is 0 at the edge's tail and 1 at its head; ("C", cut_id, side)
# for a loose end at a plane crossing.


def _side(value: float, eps: float) -> int:
    if value > eps:
        return 1
    if value < -eps:
        return -1
    return 0


def _split_edge(n: int, e: Edge, g: Multigraph, j: int, eps: float,
                cuts: list[np.ndarray]) -> list[_Piece]:
    pu = np.asarray(g.vertex(e.u).coords)
    pv = np.asarray(g.vertex(e.v).coords)
    inner = [np.asarray(p) for p in (e.polyline or ())]
    path = [pu] + inner + [pv]
    sides = [_side(p[j] - 0.5, eps) for p in path]
    last = len(path) - 1

    if all(s == 0 for s in sides):
        piece = _Piece(n, 0, inner)
        piece.ends = [("V", e.u, n, 0), ("V", e.v, n, 1)]
        return [piece]

    # interior points lying on the plane must be clean transverse crossings
    for k in range(1, last):
        if sides[k] == 0:
            before, after = sides[k - 1], sides[k + 1]
            if before == 0 or after == 0 or before == after:
                raise errors.NonTransverse(f"edge {e.id} runs along or touches the plane")
    if (sides[0] == 0 and sides[1] == 0) or (sides[last] == 0 and sides[last - 1] == 0):
        raise errors.NonTransverse(f"edge {e.id} leaves its endpoint inside the plane")

    pieces: list[_Piece] = []
    cur = _Piece(n, sides[0] if sides[0] else sides[1], [])
    cur.ends.append(("V", e.u, n, 0))
    for k in range(1, last + 1):
        s_prev, s_here = sides[k - 1], sides[k]
        p = path[k]
        if k < last and s_here == 0:
            # crossing exactly at a polyline point; the point stays on the fixed side
            cid = len(cuts)
            cuts.append(p)
            nxt = _Piece(n, sides[k + 1], [])
            if cur.side < 0:
                cur.points.append(p)
            else:
                nxt.points.append(p)
            cur.ends.append(("C", cid, cur.side))
            nxt.ends.append(("C", cid, nxt.side))
            pieces.append(cur)
            cur = nxt
            continue
        if s_prev and s_here and s_prev != s_here:
            q = path[k - 1] + (0.5 - path[k - 1][j]) / (p[j] - path[k - 1][j]) * (p - path[k - 1])
            cid = len(cuts)
            cuts.append(q)
            nxt = _Piece(n, s_here, [])
            cur.ends.append(("C", cid, cur.side))
            nxt.ends.append(("C", cid, nxt.side))
            pieces.append(cur)
            cur = nxt
        if k < last:
            cur.points.append(p)
    cur.ends.append(("V", e.v, n, 1))
    pieces.append(cur)
    return pieces


def _match(targets: np.ndarray, pool: np.ndarray, eps: float, what: str) -> tuple[list[int], float]:
    out: list[int] = []
    used: set[int] = set()
    worst = 0.0
    for t in targets:
        d = np.linalg.norm(pool - t, axis=1) if len(pool) else np.array([])
        cand = [int(i) for i in np.argsort(d) if d[i] <= eps and int(i) not in used]
        if not cand:
            near = float(d.min()) if len(d) else float("inf")
            raise errors.GluingMismatch(
                f"{what} at {np.round(t, 6).tolist()} has no partner within {eps:g} (nearest {near:.3g})")
        used.add(cand[0])
        out.append(cand[0])
        worst = max(worst, float(d[cand[0]]))
    return out, worst


def apply_delta(g: Multigraph, spec: DeltaSpec) -> tuple[Multigraph, GluingReport]:
    g.require_embedding()
    j = spec.plane - 1
    eps = spec.eps_glue
    rot = spec.rotation()

    def turn(p) -> np.ndarray:
        if spec.angle == 0:
            # skip the arithmetic so a trivial twist reproduces coordinates bit for bit
            return np.asarray(p, dtype=float)
        return CENTER + rot @ (np.asarray(p) - CENTER)

    vside = {v.id: _side(v.coords[j] - 0.5, eps) for v in g.vertices}
    cuts: list[np.ndarray] = []
    pieces: list[_Piece] = []
    for n, e in enumerate(g.edges):
        pieces.extend(_split_edge(n, e, g, j, eps, cuts))

    # re-glue: crossings
    upper_cut = {}
    lower_cut = {}
    for pi, piece in enumerate(pieces):
        for k, end in enumerate(piece.ends):
            if end[0] == "C":
                (upper_cut if end[2] > 0 else lower_cut)[end[1]] = (pi, k)
    up_ids = sorted(upper_cut)
    low_ids = sorted(lower_cut)
    partner, worst_c = _match(np.array([turn(cuts[c]) for c in up_ids]).reshape(-1, 3),
                              np.array([cuts[c] for c in low_ids]).reshape(-1, 3), eps,
                              "cut end")
    glue = {}
    for c, idx in zip(up_ids, partner):
        a, b = upper_cut[c], lower_cut[low_ids[idx]]
        glue[a] = b
        glue[b] = a

    # re-glue: rotated ends resting on on-plane vertices
    on_plane = [v.id for v in g.vertices if vside[v.id] == 0]
    plane_pos = np.array([g.vertex(v).coords for v in on_plane]).reshape(-1, 3)
    moved_ends = [(pi, k) for pi, piece in enumerate(pieces) if piece.side > 0
                  for k, end in enumerate(piece.ends) if end[0] == "V" and vside[end[1]] == 0]
    worst_v = 0.0
    if moved_ends:
        targets = np.array([turn(g.vertex(pieces[pi].ends[k][1]).coords) for pi, k in moved_ends])
        # several ends may land on one vertex, so match against vertices with reuse
        for (pi, k), t in zip(moved_ends, targets):
            d = np.linalg.norm(plane_pos - t, axis=1)
            i = int(np.argmin(d)) if len(d) else -1
            if i < 0 or d[i] > eps:
                raise errors.GluingMismatch(
                    f"rotated end at {np.round(t, 6).tolist()} meets no vertex on the plane")
            old = pieces[pi].ends[k]
            pieces[pi].ends[k] = ("V", on_plane[i], old[2], old[3])
            worst_v = max(worst_v, float(d[i]))
    n_cut = len(up_ids) + len(moved_ends)
    report = GluingReport(n_cut, n_cut, max(worst_c, worst_v))

    for piece in pieces:
        if piece.side > 0:
            piece.points = [turn(p) for p in piece.points]

    chains = _chains(pieces, glue)
    edges = _name_chains(chains, pieces, g)
    verts = tuple(Vertex(v.id, tuple(float(c) for c in turn(v.coords)) if vside[v.id] > 0
                         else v.coords) for v in g.vertices)
    return Multigraph(verts, tuple(edges)), report


def _chains(pieces: list[_Piece], glue: dict) -> list[list[tuple[int, int]]]:
    """Walk pieces from terminal ends; each chain is [(piece, entry end), ...]."""
    used = [False] * len(pieces)
    chains = []
    for pi, piece in enumerate(pieces):
        for k, end in enumerate(piece.ends):
            if end[0] != "V" or used[pi]:
                continue
            chain = []
            cur, entry = pi, k
            while True:
                used[cur] = True
                chain.append((cur, entry))
                exit_ = 1 - entry
                if pieces[cur].ends[exit_][0] == "V":
                    break
                cur, entry = glue[(cur, exit_)]
            chains.append(chain)
    if not all(used):
        raise errors.GluingMismatch("re-gluing closes a loop that passes through no vertex")
    return chains


def _name_chains(chains: list, pieces: list[_Piece], g: Multigraph) -> list[Edge]:
    """Give every chain the id of one original edge, deterministically.

    Each original edge owns two terminal ends and each chain has two, so the
    ends pair chains with edges along cycles; walking each cycle from its
    first edge's tail hands every chain exactly one id.
    """
    owner = {}   # (edge, which) -> (chain index, position 0 = start / 1 = end)
    for ci, chain in enumerate(chains):
        first_piece, first_entry = chain[0]
        last_piece, last_entry = chain[-1]
        start = pieces[first_piece].ends[first_entry]
        stop = pieces[last_piece].ends[1 - last_entry]
        owner[(start[2], start[3])] = (ci, 0)
        owner[(stop[2], stop[3])] = (ci, 1)

    assigned: dict[int, tuple[int, int]] = {}   # chain -> (edge, which end of chain is its tail)
    for n in range(len(g.edges)):
        if any(edge == n for edge, _ in assigned.values()):
            continue
        edge_n, which = n, 0
        while True:
            ci, pos = owner[(edge_n, which)]
            if ci in assigned:
                break
            assigned[ci] = (edge_n, pos if which == 0 else 1 - pos)
            other = 1 - pos
            # the chain's other terminal belongs to some edge; continue from that edge's other end
            key = next(k for k, v in owner.items() if v == (ci, other))
            edge_n, which = key[0], 1 - key[1]

    out = []
    for ci, chain in enumerate(chains):
        edge_n, tail_pos = assigned[ci]
        pts: list = []
        for pi, entry in chain:
            seq = pieces[pi].points if entry == 0 else pieces[pi].points[::-1]
            pts.extend(seq)
        first_piece, first_entry = chain[0]
        last_piece, last_entry = chain[-1]
        u = pieces[first_piece].ends[first_entry][1]
        v = pieces[last_piece].ends[1 - last_entry][1]
        if tail_pos == 1:
            u, v, pts = v, u, pts[::-1]
        poly = tuple(tuple(float(c) for c in p) for p in pts) or None
        out.append((edge_n, Edge(g.edges[edge_n].id, u, v, poly)))
    out.sort(key=lambda t: t[0])
    return [e for _, e in out]


# --------------------------------------------------------------------------


def structurally_equal(g: Multigraph, h: Multigraph, tol: float = 1e-9) -> bool:
    """Same vertex ids and positions; same edges up to id and direction."""
    if [v.id for v in g.vertices] != [v.id for v in h.vertices]:
        return False
    for a, b in zip(g.vertices, h.vertices):
        if (a.coords is None) != (b.coords is None):
            return False
        if a.coords is not None and np.max(np.abs(np.subtract(a.coords, b.coords))) > tol:
            return False
    if len(g.edges) != len(h.edges):
        return False
    pool = list(h.edges)
    for e in g.edges:
        for i, f in enumerate(pool):
            if _edge_close(e, f, tol):
                pool.pop(i)
                break
        else:
            return False
    return True


def _edge_close(e: Edge, f: Edge, tol: float) -> bool:
    pe = np.asarray(e.polyline or np.zeros((0, 3)))
    for u, v, pf in ((f.u, f.v, f.polyline), (f.v, f.u, (f.polyline or ())[::-1])):
        if (e.u, e.v) != (u, v):
            continue
        pf = np.asarray(pf or np.zeros((0, 3)))
        if pe.shape == pf.shape and (pe.size == 0 or np.max(np.abs(pe - pf)) <= tol):
            return True
    return False


@dataclass(frozen=True)
class InvarianceReport:
    equal: bool
    first_difference: int | None
    poly_a: tuple[int, ...]
    poly_b: tuple[int, ...]

    def lines(self) -> list[str]:
        out = [f"equal {str(self.equal).lower()}"]
        if self.first_difference is not None:
            out.append(f"first_difference {self.first_difference}")
        out.append("poly_a " + " ".join(map(str, self.poly_a)))
        out.append("poly_b " + " ".join(map(str, self.poly_b)))
        return out


def check_zeta_invariance(g: Multigraph, g2: Multigraph) -> InvarianceReport:
    pa = zeta_reciprocal(g).poly
    pb = zeta_reciprocal(g2).poly
    n = max(len(pa), len(pb))
    a = list(pa) + [0] * (n - len(pa))
    b = list(pb) + [0] * (n - len(pb))
    first = next((k for k in range(n) if a[k] != b[k]), None)
    return InvarianceReport(first is None, first, pa, pb)
