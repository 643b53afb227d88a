"""Interface leaves in the unit cube, their mid-plane sections, and the
Gamma multigraph assembled from those sections.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import errors
from .contour import densify, trace_zero_set
from .graphcore import Edge, Multigraph, Vertex, build_arc_system
from .leafgeom import LeafProfile, profile_curve
from .zeta import CycleClass

EPS_CLOSE = 1e-6
EPS_VERTEX = 1e-5
DEFAULT_GRID = 512

# the four main diagonals as (start corner, opposite corner)
DIAGONALS = (
    ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0)),
    ((1.0, 0.0, 0.0), (0.0, 1.0, 1.0)),
    ((0.0, 1.0, 0.0), (1.0, 0.0, 1.0)),
    ((0.0, 0.0, 1.0), (1.0, 1.0, 0.0)),
)


def orthonormal_frame(direction: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Gram-Schmidt of ``direction`` against the standard basis; first
    basis vector that is not parallel wins."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    for k in range(3):
        e = np.zeros(3)
        e[k] = 1.0
        w = e - np.dot(e, d) * d
        n = np.linalg.norm(w)
        if n > 1e-8:
            e1 = w / n
            return e1, np.cross(d, e1)
    raise ValueError("degenerate direction")


@dataclass(frozen=True)
class LeafSurface:
    """Surface of revolution about a straight axis.

    ``sample(x, theta) = origin + x d + r(x) (cos(theta) e1 + sin(theta) e2)``
    for ``x`` in [0, length].
    """

    label: str
    origin: np.ndarray
    direction: np.ndarray
    length: float
    radius: Callable[[np.ndarray], np.ndarray]
    e1: np.ndarray
    e2: np.ndarray
    profile: LeafProfile | None = None

    def _radius(self, x: np.ndarray) -> np.ndarray:
        flat = np.asarray(x, dtype=float).ravel()
        uniq, inv = np.unique(flat, return_inverse=True)
        return np.asarray(self.radius(uniq))[inv].reshape(np.shape(x))

    def coord(self, j: int, x, theta):
        """Coordinate ``j`` (0-based) of the sampled point."""
        x = np.asarray(x, dtype=float)
        theta = np.asarray(theta, dtype=float)
        r = self._radius(x)
        return (self.origin[j] + x * self.direction[j]
                + r * (np.cos(theta) * self.e1[j] + np.sin(theta) * self.e2[j]))

    def sample(self, x, theta) -> np.ndarray:
        return np.stack([self.coord(j, x, theta) for j in range(3)], axis=-1)

    @property
    def end(self) -> np.ndarray:
        return self.origin + self.length * self.direction


def build_leaf_surface(b: float, diagonal: int, profile: LeafProfile | None = None,
                       samples: int = 256) -> LeafSurface:
    if not 0 <= diagonal < 4:
        raise ValueError("diagonal index must be in 0..3")
    prof = profile if profile is not None else profile_curve(b, samples)
    start, stop = (np.asarray(c) for c in DIAGONALS[diagonal])
    d = (stop - start) / np.linalg.norm(stop - start)
    e1, e2 = orthonormal_frame(d)
    return LeafSurface(f"L{diagonal}", start, d, prof.arc_length, prof.xi_at, e1, e2, prof)


def sphere_surface(axis: int, center: Sequence[float] = (0.5, 0.5, 0.5),
                   radius: float = 1.0) -> LeafSurface:
    """Test surface: a semicircle of the given radius revolved about a
    coordinate axis through ``center``."""
    d = np.zeros(3)
    d[axis] = 1.0
    c = np.asarray(center, dtype=float)
    e1, e2 = orthonormal_frame(d)

    def semicircle(x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(np.maximum(radius * radius - (x - radius) ** 2, 0.0))

    return LeafSurface(f"S{axis}", c - radius * d, d, 2.0 * radius, semicircle, e1, e2)


@dataclass(frozen=True)
class EmbeddedCurve:
    plane: int                  # 1..3: the curve lies in x_plane = offset
    points: np.ndarray          # closed: first row repeated as last
    leaf_id: str
    offset: float = 0.5

    def closure_gap(self) -> float:
        return float(np.linalg.norm(self.points[0] - self.points[-1]))

    def plane_deviation(self) -> float:
        return float(np.max(np.abs(self.points[:, self.plane - 1] - self.offset)))


def extract_plane_curves(s: LeafSurface, plane: int, eps: float = 1e-12,
                         grid: int = DEFAULT_GRID, offset: float = 0.5,
                         refine: int = 2, eps_close: float = EPS_CLOSE) -> list[EmbeddedCurve]:
    """Sections of ``s`` by the plane ``x_plane = offset`` as closed polylines.

    Traced by marching squares over (x, theta) with theta periodic; crossings
    are bisected to ``|f| <= eps`` and ``refine`` rounds of projected
    midpoints are inserted.
    """
    if plane not in (1, 2, 3):
        raise ValueError("plane index must be 1, 2 or 3")
    j = plane - 1

    def f(x, t):
        return s.coord(j, x, t) - offset

    loops = trace_zero_set(f, (0.0, s.length), grid, grid, eps)
    out = []
    for loop in loops:
        if refine:
            loop = densify(f, loop, refine, eps)
        pts = s.sample(loop[:, 0], loop[:, 1])
        pts = np.vstack([pts, pts[:1]])
        curve = EmbeddedCurve(plane, pts, s.label, offset)
        if curve.plane_deviation() > eps_close:
            raise errors.OpenContour(
                f"section of {s.label} strays {curve.plane_deviation():.2e} from its plane")
        out.append(curve)
    out.sort(key=lambda c: tuple(np.round(c.points[:-1].mean(axis=0), 9)))
    return out


# --------------------------------------------------------------------------
# assembly


def _segment_closest(p0, p1, q0, q1):
    """Closest points between segment batches; returns (s, t, dist)."""
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    a = np.einsum("ij,ij->i", d1, d1)
    e = np.einsum("ij,ij->i", d2, d2)
    f = np.einsum("ij,ij->i", d2, r)
    c = np.einsum("ij,ij->i", d1, r)
    b = np.einsum("ij,ij->i", d1, d2)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-300, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        t = (b * s + f) / e
        s = np.where(t < 0, np.clip(-c / a, 0.0, 1.0), s)
        s = np.where(t > 1, np.clip((b - c) / a, 0.0, 1.0), s)
        t = np.clip(t, 0.0, 1.0)
    cp = p0 + s[:, None] * d1
    cq = q0 + t[:, None] * d2
    return s, t, np.linalg.norm(cp - cq, axis=1)


def _point_polyline_distance(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Distance from each point to a closed polyline (rows; last == first)."""
    seg0, seg1 = poly[:-1], poly[1:]
    tree = cKDTree(seg0)
    reach = float(np.max(np.linalg.norm(seg1 - seg0, axis=1)))
    out = np.empty(len(points))
    for n, p in enumerate(points):
        idx = tree.query_ball_point(p, reach + 1e-9)
        if not idx:
            out[n] = tree.query(p)[0]
            continue
        idx = np.asarray(idx)
        a, bb = seg0[idx], seg1[idx]
        d = bb - a
        t = np.clip(np.einsum("ij,ij->i", p - a, d) / np.maximum(np.einsum("ij,ij->i", d, d), 1e-300), 0, 1)
        out[n] = float(np.min(np.linalg.norm(a + t[:, None] * d - p, axis=1)))
    return out


def _canonical_curve(c: EmbeddedCurve) -> EmbeddedCurve:
    pts = c.points[:-1]
    keys = [tuple(np.round(p, 9)) for p in pts]
    k0 = min(range(len(pts)), key=keys.__getitem__)
    pts = np.roll(pts, -k0, axis=0)
    if len(pts) > 2 and tuple(np.round(pts[-1], 9)) < tuple(np.round(pts[1], 9)):
        pts = np.vstack([pts[:1], pts[1:][::-1]])
    return EmbeddedCurve(c.plane, np.vstack([pts, pts[:1]]), c.leaf_id, c.offset)


def _curve_key(c: EmbeddedCurve) -> tuple:
    return (c.plane, tuple(np.round(c.points[:-1].mean(axis=0), 7)), tuple(np.round(c.points[0], 7)))


def merge_coincident(curves: Sequence[EmbeddedCurve],
                     eps_vertex: float = EPS_VERTEX) -> list[EmbeddedCurve]:
    """Collapse curves that trace the same closed loop (within ``eps_vertex``)
    into one; the merged curve lists every contributing leaf.

    A partial overlap longer than ``10 eps_vertex`` is not transverse and
    raises :class:`DegenerateIntersection`.
    """
    kept: list[EmbeddedCurve] = []
    for c in curves:
        for n, k in enumerate(kept):
            near = _point_polyline_distance(c.points[:-1], k.points) <= eps_vertex
            if near.all():
                back = _point_polyline_distance(k.points[:-1], c.points) <= eps_vertex
                if back.all():
                    leaves = "+".join(sorted(set(k.leaf_id.split("+")) | set(c.leaf_id.split("+"))))
                    kept[n] = EmbeddedCurve(k.plane, k.points, leaves, k.offset)
                    break
            if near.any():
                _check_overlap(c.points, near, eps_vertex, c.leaf_id, k.leaf_id)
        else:
            kept.append(c)
    return kept


def _check_overlap(points: np.ndarray, near: np.ndarray, eps: float, a: str, b: str) -> None:
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    run = 0.0
    for n in range(len(near)):
        if near[n] and near[(n + 1) % len(near)]:
            run += seg[n % len(seg)]
            if run > 10 * eps:
                raise errors.DegenerateIntersection(
                    f"curves {a} and {b} overlap along a stretch of length > {10 * eps:g}")
        else:
            run = 0.0


def _crossings(a: np.ndarray, b: np.ndarray, tol: float):
    """(param on a, param on b, point) for every segment pair within ``tol``."""
    a0, a1 = a[:-1], a[1:]
    b0, b1 = b[:-1], b[1:]
    reach = 0.5 * (np.max(np.linalg.norm(a1 - a0, axis=1)) + np.max(np.linalg.norm(b1 - b0, axis=1)))
    ta = cKDTree(0.5 * (a0 + a1))
    tb = cKDTree(0.5 * (b0 + b1))
    pairs = ta.query_ball_tree(tb, reach + tol)
    ia = np.array([i for i, js in enumerate(pairs) for _ in js], dtype=int)
    ib = np.array([j for js in pairs for j in js], dtype=int)
    if not len(ia):
        return []
    s, t, dist = _segment_closest(a0[ia], a1[ia], b0[ib], b1[ib])
    hit = dist <= tol
    out = []
    for i, j, ss, tt in zip(ia[hit], ib[hit], s[hit], t[hit]):
        pa = a0[i] + ss * (a1[i] - a0[i])
        pb = b0[j] + tt * (b1[j] - b0[j])
        out.append((i + ss, j + tt, 0.5 * (pa + pb)))
    return out


def _round_key(p: np.ndarray, eps: float) -> tuple:
    return tuple(int(v) for v in np.round(np.asarray(p) / eps))


def assemble_gamma(curves: Sequence[EmbeddedCurve],
                   eps_vertex: float = EPS_VERTEX) -> Multigraph:
    """Turn closed embedded curves into an embedded multigraph.

    Crossing points become vertices (merged within ``eps_vertex``), the arcs
    of each curve between consecutive crossings become edges, and a curve
    that meets no other becomes a self-loop at its least point.
    """
    for c in curves:
        if c.closure_gap() > EPS_CLOSE:
            raise errors.OpenContour(f"curve {c.leaf_id} is not closed")
    work = sorted((_canonical_curve(c) for c in curves), key=_curve_key)
    work = merge_coincident(work, eps_vertex)

    hits: list[tuple[int, float, np.ndarray]] = []   # (curve, param, point)
    for (ia, ca), (ib, cb) in itertools.combinations(enumerate(work), 2):
        for pa, pb, pt in _crossings(ca.points, cb.points, eps_vertex):
            hits.append((ia, pa, pt))
            hits.append((ib, pb, pt))

    # cluster crossing points
    cluster = list(range(len(hits)))

    def find(i: int) -> int:
        while cluster[i] != i:
            cluster[i] = cluster[cluster[i]]
            i = cluster[i]
        return i

    if hits:
        pts = np.array([h[2] for h in hits])
        for i, j in cKDTree(pts).query_pairs(eps_vertex):
            ri, rj = find(i), find(j)
            if ri != rj:
                cluster[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for n in range(len(hits)):
        groups.setdefault(find(n), []).append(n)
    centres = {root: np.mean([hits[n][2] for n in members], axis=0)
               for root, members in groups.items()}

    # isolated curves get a vertex at their (canonical) first point
    splits: dict[int, list[tuple[float, object]]] = {i: [] for i in range(len(work))}
    for n, (ci, param, _pt) in enumerate(hits):
        splits[ci].append((param, find(n)))
    for ci, c in enumerate(work):
        if not splits[ci]:
            key = ("iso", ci)
            centres[key] = c.points[0]
            splits[ci].append((0.0, key))

    order = sorted(centres, key=lambda k: _round_key(centres[k], eps_vertex))
    vid = {k: f"v{n}" for n, k in enumerate(order)}
    vertices = [Vertex(vid[k], tuple(float(v) for v in centres[k])) for k in order]

    raw_edges: list[tuple[str, str, np.ndarray]] = []
    for ci, c in enumerate(work):
        nseg = len(c.points) - 1
        cuts = _collapse(sorted(splits[ci], key=lambda t: t[0]), nseg)
        for n, (p_from, k_from) in enumerate(cuts):
            p_to, k_to = cuts[(n + 1) % len(cuts)]
            if p_to <= p_from:
                p_to += nseg
            inner = [c.points[m % nseg] for m in range(math.floor(p_from) + 1, math.ceil(p_to))
                     if m - p_from > 1e-9 and p_to - m > 1e-9]
            inner = [p for p in inner
                     if np.linalg.norm(p - centres[k_from]) > eps_vertex
                     and np.linalg.norm(p - centres[k_to]) > eps_vertex]
            raw_edges.append((vid[k_from], vid[k_to], np.array(inner).reshape(-1, 3)))
    return _canonical_graph(vertices, raw_edges, eps_vertex)


def _collapse(cuts: list[tuple[float, object]], nseg: int) -> list[tuple[float, object]]:
    """Drop repeated detections of one vertex on adjacent segments."""
    out: list[tuple[float, object]] = []
    for p, k in cuts:
        if out and out[-1][1] == k and p - out[-1][0] <= 2.0:
            continue
        out.append((p, k))
    if len(out) > 1 and out[0][1] == out[-1][1] and out[0][0] + nseg - out[-1][0] <= 2.0:
        out.pop()
    return out


def _canonical_graph(vertices: list[Vertex], raw: list[tuple[str, str, np.ndarray]],
                     eps: float) -> Multigraph:
    index = {v.id: n for n, v in enumerate(vertices)}
    oriented = []
    for u, v, inner in raw:
        if index[u] > index[v]:
            u, v, inner = v, u, inner[::-1]
        elif u == v and len(inner) > 1 and _round_key(inner[-1], eps) < _round_key(inner[0], eps):
            inner = inner[::-1]
        mid = inner[len(inner) // 2] if len(inner) else np.zeros(3)
        oriented.append(((index[u], index[v], _round_key(mid, eps)), u, v, inner))
    oriented.sort(key=lambda t: t[0])
    edges = [Edge(f"e{n}", u, v, tuple(tuple(float(c) for c in p) for p in inner) or None)
             for n, (_key, u, v, inner) in enumerate(oriented)]
    return Multigraph(tuple(vertices), tuple(edges))


def build_gamma(b: float, grid: int = DEFAULT_GRID, eps_vertex: float = EPS_VERTEX,
                refine: int = 2) -> tuple[Multigraph, list[EmbeddedCurve]]:
    """The full pipeline: four leaves, three mid-planes, one multigraph."""
    prof = profile_curve(b)
    curves: list[EmbeddedCurve] = []
    for diag in range(4):
        leaf = build_leaf_surface(b, diag, prof)
        for plane in (1, 2, 3):
            curves.extend(extract_plane_curves(leaf, plane, grid=grid, refine=refine))
    return assemble_gamma(curves, eps_vertex), curves


def distinct_loops(curves: Sequence[EmbeddedCurve], eps_vertex: float = EPS_VERTEX) -> int:
    """Number of loops left after coincident sections are merged."""
    work = sorted((_canonical_curve(c) for c in curves), key=_curve_key)
    return len(merge_coincident(work, eps_vertex))


def format_curves(curves: Sequence[EmbeddedCurve]) -> str:
    """``curves v1`` text."""
    lines = ["curves v1"]
    for c in curves:
        lines.append(f"curve {c.leaf_id} x{c.plane}")
        lines += [f"pt {p[0]:.17g} {p[1]:.17g} {p[2]:.17g}" for p in c.points]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# the octahedral realisation on a sphere

_AXIS_NAMES = ("x", "y", "z")


def _vertex_name(axis: int, sign: int) -> str:
    return ("p" if sign > 0 else "n") + _AXIS_NAMES[axis]


def _slerp(p: np.ndarray, q: np.ndarray, t: np.ndarray) -> np.ndarray:
    omega = math.acos(float(np.clip(np.dot(p, q), -1.0, 1.0)))
    so = math.sin(omega)
    return (np.sin((1 - t) * omega)[:, None] * p + np.sin(t * omega)[:, None] * q) / so


def octant_faces() -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """The 8 octant triangles of the unit sphere, each counter-clockwise
    seen from outside."""
    faces = []
    for sx, sy, sz in itertools.product((1, -1), repeat=3):
        tri = [np.array([sx, 0.0, 0.0]), np.array([0.0, sy, 0.0]), np.array([0.0, 0.0, sz])]
        if sx * sy * sz < 0:
            tri = [tri[0], tri[2], tri[1]]
        faces.append(tuple(tri))
    return faces


def octant_graph(center: Sequence[float] = (0.0, 0.0, 0.0), radius: float = 1.0,
                 interior: int = 15) -> tuple[Multigraph, list[CycleClass]]:
    """Three orthogonal great circles: the octahedron graph with quarter-circle
    edges, plus its 8 triangular face loops as cycle classes."""
    c = np.asarray(center, dtype=float)
    verts = []
    for axis in range(3):
        for sign in (1, -1):
            p = np.zeros(3)
            p[axis] = sign
            verts.append((_vertex_name(axis, sign), p))
    pos = dict(verts)
    t = np.linspace(0.0, 1.0, interior + 2)[1:-1]
    edges = []
    for (na, pa), (nb, pb) in itertools.combinations(verts, 2):
        if abs(np.dot(pa, pb)) > 0.5:
            continue
        arc = c + radius * _slerp(pa, pb, t)
        edges.append(Edge(f"{na}-{nb}", na, nb, tuple(tuple(float(v) for v in p) for p in arc)))
    g = Multigraph(tuple(Vertex(n, tuple(float(v) for v in c + radius * p)) for n, p in verts),
                   tuple(edges))

    def arc_of(u: str, v: str) -> int:
        for i, e in enumerate(g.edges):
            if (e.u, e.v) == (u, v):
                return 2 * i
            if (e.u, e.v) == (v, u):
                return 2 * i + 1
        raise KeyError((u, v))

    names = {tuple(p): n for n, p in verts}
    loops = []
    for tri in octant_faces():
        ns = [names[tuple(p)] for p in tri]
        walk = [arc_of(ns[k], ns[(k + 1) % 3]) for k in range(3)]
        k0 = walk.index(min(walk))
        loops.append(CycleClass(3, tuple(walk[k0:] + walk[:k0])))
    loops.sort()
    # sanity: every face walk is closed and non-backtracking
    arcs = build_arc_system(g)
    for cc in loops:
        for k in range(3):
            assert cc.rep[(k + 1) % 3] in arcs.succ[cc.rep[k]]
    return g, loops
