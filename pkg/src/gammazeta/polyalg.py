"""Exact integer/rational polynomial and power-series arithmetic.

Polynomials are plain lists of coefficients in ascending degree.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

Poly = list


def trim(p: Sequence) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return [0]
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def poly_pow(p: Sequence, k: int) -> list:
    out: list = [1]
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def series_reciprocal(p: Sequence[int], n: int) -> list[int]:
    """Coefficients 0..n of 1/p as a power series; needs p[0] == +-1."""
    if p[0] not in (1, -1):
        raise ValueError("constant term must be a unit")
    inv0 = p[0]
    out = [0] * (n + 1)
    for k in range(n + 1):
        acc = 1 if k == 0 else 0
        for j in range(1, min(k, len(p) - 1) + 1):
            acc -= p[j] * out[k - j]
        out[k] = acc * inv0
    return out


def series_exp_log_counts(counts: Sequence[int], n: int) -> list[int]:
    """Coefficients of exp(sum_k counts[k-1] u^k / k) through degree n.

    Uses ``m c_m = sum_{k=1}^m N_k c_{m-k}``; every division must be exact.
    """
    c = [1] + [0] * n
    for m in range(1, n + 1):
        acc = sum(counts[k - 1] * c[m - k] for k in range(1, m + 1) if k <= len(counts))
        q, r = divmod(acc, m)
        if r:
            raise ArithmeticError(f"non-integral coefficient at degree {m}")
        c[m] = q
    return c


# --------------------------------------------------------------------------
# determinants


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer input."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def interpolate_integer_poly(values: Callable[[int], int], degree: int) -> list[int]:
    """Recover an integer polynomial of known degree bound from its values.

    Samples at 0, 1, -1, 2, -2, ... and runs Newton divided differences in
    exact rational arithmetic.
    """
    xs: list[int] = [0]
    k = 1
    while len(xs) < degree + 1:
        xs.append(k)
        if len(xs) < degree + 1:
            xs.append(-k)
        k += 1
    coef = [Fraction(values(x)) for x in xs]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand the Newton form into the monomial basis
    poly = [Fraction(0)] * n
    basis = [Fraction(1)]
    for i in range(n):
        for d, b in enumerate(basis):
            poly[d] += coef[i] * b
        basis = poly_mul(basis, [-xs[i], 1])
    out = []
    for c in poly:
        if c.denominator != 1:
            raise ArithmeticError("interpolated polynomial is not integral")
        out.append(int(c))
    return trim(out)


def matrix_poly_det(coeff_mats: Sequence[Sequence[Sequence[int]]], degree: int) -> list[int]:
    """det(M0 + M1 u + M2 u^2 + ...) for square integer matrices M_i."""
    n = len(coeff_mats[0])

    def at(x: int) -> int:
        m = [[0] * n for _ in range(n)]
        p = 1
        for mat in coeff_mats:
            for i in range(n):
                row, src = m[i], mat[i]
                for j in range(n):
                    if src[j]:
                        row[j] += src[j] * p
            p *= x
        return bareiss_det(m)

    return interpolate_integer_poly(at, degree)


# --------------------------------------------------------------------------
# rational polynomials: division, gcd, square-free split


def _frac(p: Sequence) -> list[Fraction]:
    return trim([Fraction(c) for c in p])


def poly_divmod(p: Sequence, q: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    p, q = _frac(p), _frac(q)
    if q == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    out = [Fraction(0)] * max(1, len(p) - len(q) + 1)
    lead = q[-1]
    while len(r) >= len(q) and r != [0]:
        shift = len(r) - len(q)
        c = r[-1] / lead
        out[shift] = c
        for i, qc in enumerate(q):
            r[shift + i] -= c * qc
        r = trim(r[:-1]) if len(r) > 1 else [Fraction(0)]
    return trim(out), trim(r)


def poly_gcd(p: Sequence, q: Sequence) -> list[Fraction]:
    a, b = _frac(p), _frac(q)
    while b != [0]:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a]


def poly_deriv(p: Sequence) -> list:
    return trim([i * c for i, c in enumerate(p)][1:] or [0])


def squarefree_factors(p: Sequence[int]) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: p = c * prod f_i^i with f_i square-free, coprime."""
    p = _frac(p)
    if len(p) <= 1:
        return []
    out = []
    a = poly_gcd(p, poly_deriv(p))
    b, _ = poly_divmod(p, a)
    c, _ = poly_divmod(poly_deriv(p), a)
    d = [x - y for x, y in _zip_pad(c, poly_deriv(b))]
    i = 1
    while len(trim(b)) > 1:
        a = poly_gcd(b, d)
        b, _ = poly_divmod(b, a)
        c, _ = poly_divmod(d, a)
        if len(a) > 1:
            out.append((a, i))
        d = [x - y for x, y in _zip_pad(c, poly_deriv(b))]
        i += 1
    return out


def _zip_pad(p: Sequence, q: Sequence):
    n = max(len(p), len(q))
    p = list(p) + [0] * (n - len(p))
    q = list(q) + [0] * (n - len(q))
    return zip(p, q)
