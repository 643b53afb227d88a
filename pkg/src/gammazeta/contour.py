"""Marching squares on a rectangle whose second axis is periodic.

Used to trace zero sets of ``f(x, theta)`` over the parameter domain of a
surface of revolution.  Crossing points on grid edges are refined by
bisection on the true function, not by linear interpolation.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import errors

Field = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _bisect(f: Field, p0: np.ndarray, p1: np.ndarray, eps: float,
            max_iter: int = 200) -> np.ndarray:
    """Refine sign changes of ``f`` on segments p0 -> p1 (rows are (x, theta))."""
    lo = np.zeros(len(p0))
    hi = np.ones(len(p0))
    f0 = f(p0[:, 0], p0[:, 1])
    d = p1 - p0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        pm = p0 + mid[:, None] * d
        fm = f(pm[:, 0], pm[:, 1])
        done = np.abs(fm) <= eps
        if np.all(done):
            break
        same = np.sign(fm) == np.sign(f0)
        lo = np.where(same & ~done, mid, lo)
        hi = np.where(~same & ~done, mid, hi)
        if np.all(hi - lo < 1e-17):
            break
    t = 0.5 * (lo + hi)
    pts = p0 + t[:, None] * d
    return pts


def trace_zero_set(f: Field, x_range: tuple[float, float], nx: int, ntheta: int,
                   eps: float = 1e-12) -> list[np.ndarray]:
    """Closed contours of ``f = 0`` as arrays of (x, theta) rows.

    ``theta`` is periodic on [0, 2 pi).  A contour that reaches either end
    of the x range raises :class:`OpenContour`.  Returned loops do not
    repeat their first point; theta values are unwrapped along the loop.
    """
    xs = np.linspace(x_range[0], x_range[1], nx)
    ts = np.linspace(0.0, 2.0 * np.pi, ntheta, endpoint=False)
    X, T = np.meshgrid(xs, ts, indexing="ij")
    vals = f(X, T)
    pos = vals > 0

    # crossing ids: horizontal edges (i, k)-(i+1, k) -> ('h', i, k);
    # vertical edges (i, k)-(i, k+1) -> ('v', i, k)
    h_cross = pos[:-1, :] != pos[1:, :]
    v_cross = pos != np.roll(pos, -1, axis=1)

    links: dict[tuple, list[tuple]] = {}

    def link(a: tuple, b: tuple) -> None:
        links.setdefault(a, []).append(b)
        links.setdefault(b, []).append(a)

    busy = (h_cross | np.roll(h_cross, -1, axis=1) | v_cross[:-1, :] | v_cross[1:, :])
    for i, k in zip(*np.nonzero(busy)):
        i, k = int(i), int(k)
        k1 = (k + 1) % ntheta
        edges = []
        if h_cross[i, k]:
            edges.append(("h", i, k))
        if v_cross[i + 1, k]:
            edges.append(("v", i + 1, k))
        if h_cross[i, k1]:
            edges.append(("h", i, k1))
        if v_cross[i, k]:
            edges.append(("v", i, k))
        if len(edges) == 2:
            link(edges[0], edges[1])
        elif len(edges) == 4:
            centre = 0.25 * (vals[i, k] + vals[i + 1, k] + vals[i + 1, k1] + vals[i, k1])
            # corners in order: (i,k), (i+1,k), (i+1,k1), (i,k1); edges as listed
            # join around the corner whose sign differs from the centre
            if (centre > 0) == pos[i, k]:
                link(edges[0], edges[1])
                link(edges[2], edges[3])
            else:
                link(edges[0], edges[3])
                link(edges[1], edges[2])

    for node, nbrs in links.items():
        if len(nbrs) != 2:
            raise errors.OpenContour(f"contour ends at grid edge {node}; refine the grid")
        if node[0] == "v" and node[1] in (0, nx - 1):
            raise errors.OpenContour("contour reaches the end of the x range")

    loops: list[list[tuple]] = []
    seen: set[tuple] = set()
    for start in sorted(links):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        prev, cur = start, links[start][0]
        while cur != start:
            loop.append(cur)
            seen.add(cur)
            a, b = links[cur]
            prev, cur = cur, (b if a == prev else a)
        loops.append(loop)

    out = []
    for loop in loops:
        p0 = np.empty((len(loop), 2))
        p1 = np.empty((len(loop), 2))
        for n, (kind, i, k) in enumerate(loop):
            if kind == "h":
                p0[n] = (xs[i], ts[k])
                p1[n] = (xs[i + 1], ts[k])
            else:
                p0[n] = (xs[i], ts[k])
                p1[n] = (xs[i], ts[k] + (ts[1] - ts[0]))
        pts = _bisect(f, p0, p1, eps)
        pts[:, 1] = np.unwrap(pts[:, 1])
        out.append(pts)
    return out


def densify(f: Field, loop: np.ndarray, levels: int, eps: float = 1e-12,
            h: float = 1e-7) -> np.ndarray:
    """Insert midpoints between consecutive loop points, each projected back
    onto the zero set by Newton steps along the gradient in parameter space.
    """
    pts = loop
    for _ in range(levels):
        step = np.roll(pts, -1, axis=0) - pts
        step[:, 1] = (step[:, 1] + np.pi) % (2 * np.pi) - np.pi
        mid = pts + 0.5 * step
        for _step in range(30):
            x, t = mid[:, 0], mid[:, 1]
            val = f(x, t)
            if np.all(np.abs(val) <= eps):
                break
            gx = (f(x + h, t) - f(x - h, t)) / (2 * h)
            gt = (f(x, t + h) - f(x, t - h)) / (2 * h)
            g2 = gx * gx + gt * gt
            g2 = np.where(g2 > 0, g2, 1.0)
            mid = mid - (val / g2)[:, None] * np.column_stack([gx, gt])
        merged = np.empty((2 * len(pts), 2))
        merged[0::2] = pts
        merged[1::2] = mid
        pts = merged
    return pts
