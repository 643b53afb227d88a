"""Ihara zeta function of a finite multigraph, computed three ways.

* :func:`zeta_series` counts closed non-backtracking tail-less walks and
  exponentiates ``sum N_n u^n / n``.
* :func:`zeta_euler_truncated` expands the Euler product over the primitive
  classes produced by :func:`enumerate_cycles`.
* :func:`zeta_reciprocal` returns ``det(I - uT)`` exactly, ``T`` being the
  non-backtracking arc operator, whose reciprocal series is ``Z(u)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath

from . import errors
from .graphcore import ArcSystem, Multigraph, build_arc_system, validate
from .polyalg import (matrix_poly_det, poly_mul, poly_pow, series_exp_log_counts,
                      series_reciprocal, squarefree_factors, trim)

DEFAULT_CAP = 10**6


@dataclass(frozen=True, order=True)
class CycleClass:
    """Rotation class of a closed non-backtracking tail-less walk.

    ``rep`` is the lexicographically least rotation, as arc indices of the
    graph's :class:`ArcSystem`.  Orientation is not quotiented out.
    """

    length: int
    rep: tuple[int, ...]
    primitive: bool = True


@dataclass(frozen=True)
class ZetaSeries:
    max_length: int
    counts: tuple[int, ...]   # counts[n - 1] = N_n
    coeffs: tuple[int, ...]   # Z(u) = sum coeffs[k] u^k + O(u^{L+1})


@dataclass(frozen=True)
class ZetaReciprocal:
    poly: tuple[int, ...]     # det(I - uT), ascending degree
    cycle_rank: int

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def series(self, n: int) -> list[int]:
        """Z(u) through degree n, from the exact reciprocal."""
        return series_reciprocal(self.poly, n)


def _require_md2(g: Multigraph) -> None:
    rep = validate(g)
    if not rep.connected:
        raise errors.NotMd2("graph is not connected")
    if not rep.md2:
        raise errors.NotMd2(f"minimum degree is {rep.min_degree}")


def _is_min_primitive(path: Sequence[int]) -> bool:
    """True iff ``path`` is strictly less than each of its proper rotations."""
    n = len(path)
    p = tuple(path)
    for i in range(1, n):
        if p[i] == p[0] and p[i:] + p[:i] <= p:
            return False
    return True


def enumerate_cycles(g: Multigraph, max_length: int, cap: int = DEFAULT_CAP,
                     arcs: ArcSystem | None = None) -> list[CycleClass]:
    """Every primitive cycle class of length <= ``max_length`` exactly once.

    A walk is only extended with arcs whose index is >= its first arc, so a
    class is found only from the rotations beginning with its least arc;
    the rotation test then keeps one representative.
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    arcs = arcs or build_arc_system(g)
    succ = arcs.succ
    found: list[CycleClass] = []
    for s in range(len(arcs)):
        closers = {a for a in range(len(arcs)) if s in succ[a]}
        path = [s]
        stack = [iter(b for b in succ[s] if b >= s)]
        if s in closers and _is_min_primitive(path):
            found.append(CycleClass(1, (s,)))
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                path.pop()
                continue
            path.append(nxt)
            if nxt in closers and _is_min_primitive(path):
                found.append(CycleClass(len(path), tuple(path)))
                if len(found) > cap:
                    raise errors.CombinatorialBlowup(
                        f"more than {cap} primitive classes of length <= {max_length}")
            if len(path) < max_length:
                stack.append(iter(b for b in succ[nxt] if b >= s))
            else:
                path.pop()
    found.sort()
    return found


def walk_counts(arcs: ArcSystem, max_length: int) -> list[int]:
    """N_1..N_L: closed non-backtracking tail-less walks with marked start.

    Dynamic programme over walks from each start arc; independent of any
    matrix power.
    """
    m = len(arcs)
    pred: list[list[int]] = [[] for _ in range(m)]
    for a, nxt in enumerate(arcs.succ):
        for b in nxt:
            pred[b].append(a)
    counts = [0] * max_length
    for s in range(m):
        closers = pred[s]
        ways = {s: 1}
        for n in range(1, max_length + 1):
            counts[n - 1] += sum(ways.get(a, 0) for a in closers)
            if n == max_length:
                break
            step: dict[int, int] = {}
            for a, w in ways.items():
                for b in arcs.succ[a]:
                    step[b] = step.get(b, 0) + w
            ways = step
    return counts


def trace_counts(arcs: ArcSystem, max_length: int) -> list[int]:
    """trace(T^n) for n = 1..L with exact integer matrix powers."""
    t = arcs.matrix()
    m = len(t)
    rows = [[b for b in range(m) if t[a][b]] for a in range(m)]
    power = [row[:] for row in t]
    out = []
    for n in range(1, max_length + 1):
        out.append(sum(power[i][i] for i in range(m)))
        if n == max_length:
            break
        power = _matmul_sparse(power, rows, m)
    return out


def _matmul_sparse(p: list[list[int]], rows: list[list[int]], m: int) -> list[list[int]]:
    out = []
    for i in range(m):
        acc = [0] * m
        pi = p[i]
        for k in range(m):
            w = pi[k]
            if w:
                for j in rows[k]:
                    acc[j] += w
        out.append(acc)
    return out


def zeta_series(g: Multigraph, max_length: int) -> ZetaSeries:
    _require_md2(g)
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    counts = walk_counts(build_arc_system(g), max_length)
    coeffs = series_exp_log_counts(counts, max_length)
    return ZetaSeries(max_length, tuple(counts), tuple(coeffs))


def zeta_euler_truncated(classes: Iterable[CycleClass], max_length: int,
                         graph: Multigraph | None = None) -> ZetaSeries:
    """Expand prod (1 - u^l(C))^-1 through degree ``max_length``.

    With ``graph`` given, the class census is checked against trace(T^n) and
    :class:`IncompleteClasses` is raised on mismatch.
    """
    coeffs = [1] + [0] * max_length
    counts = [0] * max_length
    for c in classes:
        step = c.length
        if step > max_length:
            continue
        for k in range(step, max_length + 1):
            coeffs[k] += coeffs[k - step]
        for n in range(step, max_length + 1, step):
            counts[n - 1] += step
    if graph is not None:
        expected = trace_counts(build_arc_system(graph), max_length)
        for n, (got, want) in enumerate(zip(counts, expected), start=1):
            if got != want:
                raise errors.IncompleteClasses(
                    f"classes account for {got} closed walks of length {n}, trace gives {want}")
    return ZetaSeries(max_length, tuple(counts), tuple(coeffs))


def zeta_reciprocal(g: Multigraph) -> ZetaReciprocal:
    _require_md2(g)
    arcs = build_arc_system(g)
    m = len(arcs)
    ident = [[int(i == j) for j in range(m)] for i in range(m)]
    neg_t = [[-x for x in row] for row in arcs.matrix()]
    poly = matrix_poly_det([ident, neg_t], m)
    rep = validate(g)
    return ZetaReciprocal(tuple(poly), rep.cycle_rank)


def bass_reciprocal(g: Multigraph) -> list[int]:
    """(1 - u^2)^(r-1) det(I - Au + (D - I)u^2), the vertex-side formula.

    A self-loop adds 2 to its diagonal entry of A, matching its degree
    contribution.
    """
    _require_md2(g)
    n = len(g.vertices)
    adj = [[0] * n for _ in range(n)]
    for e in g.edges:
        i, j = g.vertex_index(e.u), g.vertex_index(e.v)
        adj[i][j] += 1
        adj[j][i] += 1
    deg = [sum(row) for row in adj]
    m0 = [[int(i == j) for j in range(n)] for i in range(n)]
    m1 = [[-x for x in row] for row in adj]
    m2 = [[(deg[i] - 1) * int(i == j) for j in range(n)] for i in range(n)]
    vpoly = matrix_poly_det([m0, m1, m2], 2 * n)
    r = len(g.edges) - n + 1
    return trim(poly_mul(poly_pow([1, 0, -1], r - 1), vpoly))


# --------------------------------------------------------------------------
# poles


def zeta_poles(zr: ZetaReciprocal | Sequence[int], tol: float = 1e-10,
               maxsteps: int = 200) -> list[tuple[complex, int]]:
    """Roots of ``1/Z`` (the poles of Z) with multiplicities.

    The polynomial is split into square-free factors exactly first, so the
    numerical root finder only ever sees simple roots.
    """
    poly = trim(zr.poly if isinstance(zr, ZetaReciprocal) else zr)
    if len(poly) <= 1:
        return []
    roots: list[tuple[complex, int]] = []
    for factor, mult in squarefree_factors(poly):
        desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(factor)]
        if len(desc) == 2:
            found = [-desc[1] / desc[0]]
        else:
            try:
                found = mpmath.polyroots(desc, maxsteps=maxsteps, extraprec=60)
            except mpmath.libmp.NoConvergence as exc:
                raise errors.ConvergenceFailure(str(exc)) from None
        for r in found:
            z = complex(r)
            scale = sum(abs(float(c)) * abs(z) ** i for i, c in enumerate(factor))
            resid = abs(complex(mpmath.polyval(desc, r))) / scale
            if resid > tol:
                raise errors.ConvergenceFailure(f"root {z} has residual {resid:.3e}")
            roots.append((z, mult))
    return _cluster(roots, 10 * tol, tol)


def _cluster(roots: list[tuple[complex, int]], radius: float,
             tol: float) -> list[tuple[complex, int]]:
    merged: list[list] = []
    for z, mult in roots:
        for slot in merged:
            if abs(slot[0] - z) <= radius:
                slot[1] += mult
                break
        else:
            merged.append([z, mult])
    out = []
    for z, mult in merged:
        re, im = z.real, z.imag
        if abs(im) <= tol:
            im = 0.0
        if abs(re) <= tol:
            re = 0.0
        out.append((complex(re, im), mult))
    out.sort(key=lambda t: (round(abs(t[0]), 9), cmath.phase(t[0])))
    return out


# --------------------------------------------------------------------------
# `zeta v1` text


def format_poly(poly: Sequence[int]) -> str:
    return "poly " + " ".join(str(c) for c in poly)


def format_series(s: ZetaSeries) -> str:
    return f"series {s.max_length} " + " ".join(str(c) for c in s.coeffs)


def format_poles(poles: Sequence[tuple[complex, int]]) -> list[str]:
    return [f"pole {z.real:.17g} {z.imag:.17g} {m}" for z, m in poles]


def parse_zeta_line(line: str) -> tuple[str, list]:
    tok = line.split()
    if not tok:
        raise errors.ParseError("empty zeta record")
    kind = tok[0]
    try:
        if kind == "poly":
            return kind, [int(t) for t in tok[1:]]
        if kind == "series":
            length = int(tok[1])
            coeffs = [int(t) for t in tok[2:]]
            if len(coeffs) != length + 1:
                raise errors.ParseError(f"series {length} needs {length + 1} coefficients")
            return kind, [length, coeffs]
        if kind == "pole":
            return kind, [complex(float(tok[1]), float(tok[2])), int(tok[3])]
    except (ValueError, IndexError):
        raise errors.ParseError(f"malformed zeta record {line!r}") from None
    raise errors.ParseError(f"unknown zeta record {kind!r}")


__all__ = [
    "CycleClass", "ZetaSeries", "ZetaReciprocal", "enumerate_cycles", "walk_counts",
    "trace_counts", "zeta_series", "zeta_euler_truncated", "zeta_reciprocal",
    "bass_reciprocal", "zeta_poles", "format_poly", "format_series", "format_poles",
    "parse_zeta_line",
]
