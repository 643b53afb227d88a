"""Exact linear algebra over the integers and rationals.

Matrices are lists of rows of Python ints (or Fractions).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def eye(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int | None = None) -> Matrix:
    """Product ``a @ b``; ``inner`` gives the shared size when a or b has no rows."""
    ra = len(a)
    k = inner if inner is not None else (len(a[0]) if a else len(b))
    cb = len(b[0]) if b else 0
    out = zeros(ra, cb)
    for i in range(ra):
        row = a[i]
        acc = out[i]
        for t in range(k):
            x = row[t]
            if x:
                brow = b[t]
                for j in range(cb):
                    if brow[j]:
                        acc[j] += x * brow[j]
    return out


def transpose(m: Sequence[Sequence], cols: int | None = None) -> Matrix:
    c = cols if cols is not None else (len(m[0]) if m else 0)
    return [[m[i][j] for i in range(len(m))] for j in range(c)]


def is_zero(m: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in m for x in row)


def rref(m: Sequence[Sequence], cols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q, and the pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    ncols = cols if cols is not None else (len(a[0]) if a else 0)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank_q(m: Sequence[Sequence], cols: int | None = None) -> int:
    return len(rref(m, cols)[1])


def nullspace_q(m: Sequence[Sequence], cols: int) -> list[list[Fraction]]:
    """Basis vectors of {x : m x = 0} over Q."""
    a, pivots = rref(m, cols)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][f]
        basis.append(v)
    return basis


def column_space_q(m: Sequence[Sequence], cols: int) -> list[list[Fraction]]:
    """Independent columns of ``m`` (as vectors) spanning its image."""
    _, pivots = rref(m, cols)
    return [[Fraction(row[c]) for row in m] for c in pivots]


def rank_mod_p(m: Sequence[Sequence], p: int, cols: int | None = None) -> int:
    a = [[x % p for x in row] for row in m]
    rows = len(a)
    ncols = cols if cols is not None else (len(a[0]) if a else 0)
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def inverse_q(m: Sequence[Sequence]) -> Matrix | None:
    """Inverse over Q, or None when singular."""
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return [row[n:] for row in red[:n]]


def smith_invariants(m: Sequence[Sequence[int]], cols: int | None = None) -> list[int]:
    """Nonzero diagonal of the Smith normal form, d_1 | d_2 | ...

    Plain integer elimination; each pivot is the entry of least absolute
    value in what remains, which keeps intermediate entries small.
    """
    a = [list(row) for row in m]
    rows = len(a)
    ncols = cols if cols is not None else (len(a[0]) if a else 0)
    diag: list[int] = []
    t = 0
    while t < min(rows, ncols):
        best = None
        for i in range(t, rows):
            for j in range(t, ncols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        _move_pivot(a, t, best)
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // piv
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // piv
                    for i in range(rows):
                        a[i][j] -= q * a[i][t]
                    dirty = dirty or a[t][j] != 0
            if dirty:
                cand = [(i, t) for i in range(t, rows) if a[i][t]] + \
                       [(t, j) for j in range(t, ncols) if a[t][j]]
                _move_pivot(a, t, min(cand, key=lambda ij: abs(a[ij[0]][ij[1]])))
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, ncols)
                        if a[i][j] % piv), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _move_pivot(a: Matrix, t: int, ij: tuple[int, int]) -> None:
    i, j = ij
    a[t], a[i] = a[i], a[t]
    if j != t:
        for row in a:
            row[t], row[j] = row[j], row[t]
