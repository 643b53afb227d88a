"""Cohomology of stratified integer chain complexes under a permutation twist.

Each stratum is a finite chain complex ``C_0 <- C_1 <- ... <- C_top`` of free
abelian groups given by integer boundary matrices.  Cochains use the
transposed differentials, so ``d^k = (boundary_{k+1})^T``.

A :class:`StratifiedComplex` adds three pieces of data:

* gluing pairs identifying cells of equal degree across strata;
* a permutation ``sigma`` of stratum indices;
* per-stratum chain maps ``tau_i: C(X_i) -> C(X_sigma(i))``.

The twisted complex keeps every cell basis in place and transports each
differential along its twist, ``d_tau = tau d tau^{-1}``.  Gluing is realised
as the quotient complex in which identified cells become one cell; this is
the same as imposing the difference relation on cochains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from . import errors
from . import intlinalg as la

Ring = Literal["int", "rat"]
CellRef = tuple[str, int, int]  # (stratum name, degree, cell index)


@dataclass(frozen=True)
class StratumComplex:
    """One stratum: cell counts per degree and boundaries ``boundary[k]``
    of shape ``(cells[k-1], cells[k])`` for ``k = 1..top``."""

    name: str
    cells: tuple[int, ...]
    boundary: dict[int, tuple[tuple[int, ...], ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.cells or any(c < 0 for c in self.cells):
            raise ValueError(f"stratum {self.name}: bad cell counts {self.cells}")
        full = {}
        for k in range(1, len(self.cells)):
            m = self.boundary.get(k)
            if m is None:
                m = la.zeros(self.cells[k - 1], self.cells[k])
            if la.shape(m)[0] != self.cells[k - 1] or any(len(r) != self.cells[k] for r in m):
                raise errors.ShapeMismatch(f"stratum {self.name}: boundary {k} has wrong shape")
            full[k] = tuple(tuple(int(x) for x in row) for row in m)
        extra = set(self.boundary) - set(full)
        if extra:
            raise ValueError(f"stratum {self.name}: boundary degrees {sorted(extra)} out of range")
        object.__setattr__(self, "boundary", full)
        for k in range(2, len(self.cells)):
            prod = la.matmul(full[k - 1], full[k], inner=self.cells[k - 1])
            if not la.is_zero(prod):
                raise errors.NotCochainComplex(
                    f"stratum {self.name}: boundary {k - 1} o boundary {k} != 0")

    @property
    def top(self) -> int:
        return len(self.cells) - 1

    def count(self, k: int) -> int:
        return self.cells[k] if 0 <= k < len(self.cells) else 0

    def d(self, k: int) -> la.Matrix:
        """Boundary ``C_k -> C_{k-1}``; an empty matrix outside the range."""
        if 1 <= k <= self.top:
            return [list(r) for r in self.boundary[k]]
        return la.zeros(self.count(k - 1), self.count(k))


@dataclass(frozen=True)
class CohomologyEntry:
    """``H^k``: free rank and torsion invariant factors (> 1, dividing in order)."""

    degree: int
    rank: int
    torsion: tuple[int, ...] = ()

    def line(self) -> str:
        tors = " ".join(str(t) for t in self.torsion) or "-"
        return f"H{self.degree} rank {self.rank} torsion {tors}"


@dataclass(frozen=True)
class StratifiedComplex:
    strata: tuple[StratumComplex, ...]
    gluing: tuple[tuple[CellRef, CellRef], ...] = ()
    sigma: tuple[int, ...] | None = None
    twists: tuple[dict[int, tuple[tuple[int, ...], ...]] | None, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.strata)
        names = [s.name for s in self.strata]
        if len(set(names)) != n:
            raise ValueError("stratum names must be distinct")
        sigma = tuple(range(n)) if self.sigma is None else tuple(self.sigma)
        if sorted(sigma) != list(range(n)):
            raise ValueError(f"sigma {sigma} is not a permutation of 0..{n - 1}")
        object.__setattr__(self, "sigma", sigma)
        twists = (None,) * n if self.twists is None else tuple(self.twists)
        if len(twists) != n:
            raise ValueError("one twist entry per stratum is required")
        object.__setattr__(self, "twists", twists)
        for a, b in self.gluing:
            for name, k, c in (a, b):
                s = self.stratum(name)
                if not 0 <= c < s.count(k):
                    raise errors.ReferenceError(f"glue cell {name}.{k}.{c} does not exist")
            if a[1] != b[1]:
                raise errors.GluingMismatch(f"glued cells {a} and {b} differ in degree")

    def stratum(self, name: str) -> StratumComplex:
        for s in self.strata:
            if s.name == name:
                return s
        raise errors.ReferenceError(f"unknown stratum {name!r}")

    def index(self, name: str) -> int:
        return [s.name for s in self.strata].index(self.stratum(name).name)

    @property
    def top(self) -> int:
        return max(s.top for s in self.strata) if self.strata else 0

    def twist_matrix(self, i: int, k: int) -> la.Matrix:
        """``tau_i`` in degree k, shape ``(cells of sigma(i), cells of i)``."""
        src = self.strata[i]
        dst = self.strata[self.sigma[i]]
        if src.cells != dst.cells:
            raise errors.ShapeMismatch(
                f"stratum {src.name} {src.cells} and {dst.name} {dst.cells} differ in cell counts")
        tw = self.twists[i]
        if tw is None or k not in tw:
            return la.eye(src.count(k))
        m = [list(r) for r in tw[k]]
        if len(m) != dst.count(k) or any(len(r) != src.count(k) for r in m):
            raise errors.ShapeMismatch(f"twist of {src.name} in degree {k} has wrong shape")
        return m


# ---------------------------------------------------------------------------
# cohomology from boundary matrices

def _cohomology(bd_k: la.Matrix, bd_k1: la.Matrix, n_k: int, n_km1: int, n_k1: int,
                k: int, ring: Ring) -> CohomologyEntry:
    """H^k from ``bd_k: C_k -> C_{k-1}`` and ``bd_k1: C_{k+1} -> C_k``."""
    r_out = la.rank_q(bd_k1, n_k1)   # rank d^k = rank of its transpose
    r_in = la.rank_q(bd_k, n_k)      # rank d^{k-1}
    rank = n_k - r_out - r_in
    if ring == "rat":
        return CohomologyEntry(k, rank)
    if ring != "int":
        raise ValueError(f"unknown ring {ring!r}")
    # coker d^{k-1} torsion = invariant factors > 1 of bd_k
    inv = la.smith_invariants(bd_k, n_k)
    if len(inv) != r_in:
        raise ArithmeticError("Smith form rank disagrees with rational rank")
    return CohomologyEntry(k, rank, tuple(d for d in inv if d > 1))


def cohomology_stratum(s: StratumComplex, k: int, ring: Ring = "int") -> CohomologyEntry:
    if not 0 <= k <= s.top:
        raise ValueError(f"degree {k} outside 0..{s.top}")
    return _cohomology(s.d(k), s.d(k + 1), s.count(k), s.count(k - 1), s.count(k + 1), k, ring)


def cohomology_all(s: StratumComplex, ring: Ring = "int") -> list[CohomologyEntry]:
    return [cohomology_stratum(s, k, ring) for k in range(s.top + 1)]


def torsion_primes_check(bd: la.Matrix, cols: int, primes: Iterable[int] = (2, 3, 5)) -> bool:
    """Rank drops modulo p exactly when p divides an invariant factor."""
    inv = la.smith_invariants(bd, cols)
    r = len(inv)
    for p in primes:
        drop = r - la.rank_mod_p(bd, p, cols)
        if drop != sum(1 for d in inv if d % p == 0):
            return False
    return True


# ---------------------------------------------------------------------------
# twist

def check_chain_maps(sc: StratifiedComplex) -> None:
    """Raise unless every ``tau_i`` commutes with the boundaries."""
    for i, s in enumerate(sc.strata):
        t = sc.strata[sc.sigma[i]]
        for k in range(1, s.top + 1):
            lhs = la.matmul(sc.twist_matrix(i, k - 1), s.d(k), inner=s.count(k - 1))
            rhs = la.matmul(t.d(k), sc.twist_matrix(i, k), inner=t.count(k))
            if lhs != rhs:
                raise errors.NotChainMap(f"twist of {s.name} fails to commute with boundary {k}")


def apply_twist(sc: StratifiedComplex) -> StratifiedComplex:
    """Transport each differential along its twist.

    Cell bases stay with their positions; position ``sigma(i)`` receives
    ``tau_i boundary_i tau_i^{-1}``.  Gluing data and twists are kept.
    """
    for i in range(len(sc.strata)):
        for k in range(sc.strata[i].top + 1):
            sc.twist_matrix(i, k)  # shape check
    check_chain_maps(sc)
    new: list[StratumComplex | None] = [None] * len(sc.strata)
    for i, s in enumerate(sc.strata):
        j = sc.sigma[i]
        inv = {}
        for k in range(s.top + 1):
            m = la.inverse_q(sc.twist_matrix(i, k))
            if m is None:
                raise errors.NotChainMap(f"twist of {s.name} in degree {k} is not invertible")
            inv[k] = m
        bd = {}
        for k in range(1, s.top + 1):
            conj = la.matmul(la.matmul(sc.twist_matrix(i, k - 1), s.d(k), inner=s.count(k - 1)),
                             inv[k], inner=s.count(k))
            if any(Fraction(x).denominator != 1 for row in conj for x in row):
                raise errors.NotChainMap(f"twist of {s.name} is not invertible over the integers")
            bd[k] = [[int(x) for x in row] for row in conj]
        new[j] = StratumComplex(sc.strata[j].name, s.cells, bd)
    return StratifiedComplex(tuple(new), sc.gluing, sc.sigma, sc.twists)


# ---------------------------------------------------------------------------
# glued total complex

@dataclass(frozen=True)
class TotalComplex:
    """Cell counts and boundaries of the glued direct sum."""

    counts: tuple[int, ...]
    boundary: dict[int, la.Matrix]
    classes: tuple[tuple[int, ...], ...]  # per degree: global cell -> class index

    def d(self, k: int) -> la.Matrix:
        if k in self.boundary:
            return self.boundary[k]
        return la.zeros(self.count(k - 1), self.count(k))

    def count(self, k: int) -> int:
        return self.counts[k] if 0 <= k < len(self.counts) else 0

    def cochain_d(self, k: int) -> la.Matrix:
        """``d^k: C^k -> C^{k+1}``, the transpose of ``boundary_{k+1}``."""
        return la.transpose(self.d(k + 1), self.count(k))

    def cohomology(self, k: int, ring: Ring = "int") -> CohomologyEntry:
        return _cohomology(self.d(k), self.d(k + 1), self.count(k), self.count(k - 1),
                           self.count(k + 1), k, ring)


def _offsets(sc: StratifiedComplex, k: int) -> list[int]:
    out, acc = [], 0
    for s in sc.strata:
        out.append(acc)
        acc += s.count(k)
    return out + [acc]


def glued_complex(sc: StratifiedComplex) -> TotalComplex:
    """Direct sum of the strata with glued cells identified."""
    top = sc.top
    offs = [_offsets(sc, k) for k in range(top + 2)]
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x: tuple[int, int]) -> tuple[int, int]:
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    for a, b in sc.gluing:
        ga = (a[1], offs[a[1]][sc.index(a[0])] + a[2])
        gb = (b[1], offs[b[1]][sc.index(b[0])] + b[2])
        ra, rb = find(ga), find(gb)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    classes = []
    counts = []
    for k in range(top + 2):
        n = offs[k][-1]
        reps = {}
        cls = []
        for g in range(n):
            r = find((k, g))
            cls.append(reps.setdefault(r, len(reps)))
        classes.append(tuple(cls))
        counts.append(len(reps))

    boundary = {}
    for k in range(1, top + 1):
        m = la.zeros(counts[k - 1], counts[k])
        filled = [False] * counts[k]
        for i, s in enumerate(sc.strata):
            if k > s.top:
                continue
            d = s.d(k)
            for c in range(s.count(k)):
                col = [0] * counts[k - 1]
                for r in range(s.count(k - 1)):
                    if d[r][c]:
                        col[classes[k - 1][offs[k - 1][i] + r]] += d[r][c]
                q = classes[k][offs[k][i] + c]
                if filled[q]:
                    if [m[r][q] for r in range(counts[k - 1])] != col:
                        raise errors.NotCochainComplex(
                            f"glued {k}-cells of {s.name} have different boundaries")
                else:
                    for r in range(counts[k - 1]):
                        m[r][q] = col[r]
                    filled[q] = True
        boundary[k] = m
    for k in range(2, top + 1):
        if not la.is_zero(la.matmul(boundary[k - 1], boundary[k], inner=counts[k - 1])):
            raise errors.NotCochainComplex(f"assembled d o d != 0 in degree {k}")
    return TotalComplex(tuple(counts[: top + 1]), boundary, tuple(classes[: top + 1]))


def twisted_complex(sc: StratifiedComplex) -> TotalComplex:
    return glued_complex(apply_twist(sc))


def twisted_cohomology(sc: StratifiedComplex, k: int, ring: Ring = "int") -> CohomologyEntry:
    tc = twisted_complex(sc)
    if not 0 <= k <= sc.top:
        raise ValueError(f"degree {k} outside 0..{sc.top}")
    return tc.cohomology(k, ring)


def dtau_squared_zero(sc: StratifiedComplex) -> bool:
    """``d_tau o d_tau == 0`` on cochains of the twisted glued complex."""
    tc = twisted_complex(sc)
    for k in range(sc.top - 1):
        a = la.transpose(tc.d(k + 1), tc.count(k + 1))
        b = la.transpose(tc.d(k + 2), tc.count(k + 2))
        if not la.is_zero(la.matmul(b, a, inner=tc.count(k + 1))):
            return False
    return True


def _total_twist(sc: StratifiedComplex, tc: TotalComplex, k: int) -> la.Matrix:
    """The block twist on glued k-chains (rows: target class, cols: source class)."""
    offs = _offsets(sc, k)
    n = tc.count(k)
    m = [[None] * n for _ in range(n)]
    cls = tc.classes[k]
    for i, s in enumerate(sc.strata):
        if k > s.top:
            continue
        t = sc.twist_matrix(i, k)
        j = sc.sigma[i]
        for c in range(s.count(k)):
            col = [0] * n
            for r in range(s.count(k)):
                if t[r][c]:
                    col[cls[offs[j] + r]] += t[r][c]
            q = cls[offs[i] + c]
            if m[0][q] is None:
                for r in range(n):
                    m[r][q] = col[r]
            elif [m[r][q] for r in range(n)] != col:
                raise errors.NotChainMap("twist does not respect the gluing")
    return [[x or 0 for x in row] for row in m]


def invariant_classes(sc: StratifiedComplex, k: int) -> int:
    """Dimension of the fixed subspace of ``tau^*`` acting on ``H^k`` over Q."""
    check_chain_maps(sc)
    tc = glued_complex(sc)
    n = tc.count(k)
    if n == 0:
        return 0
    phi = _total_twist(sc, tc, k)
    pull = la.transpose(phi, n)  # cochain pullback
    dk = la.transpose(tc.d(k + 1), tc.count(k + 1)) if tc.count(k + 1) else []
    z = la.nullspace_q(dk, n) if dk else [[Fraction(int(i == j)) for i in range(n)]
                                           for j in range(n)]
    bprev = la.transpose(tc.d(k), tc.count(k)) if k > 0 else []
    bcols = la.column_space_q(bprev, tc.count(k - 1)) if bprev and tc.count(k - 1) else []
    if not z:
        return 0
    # solve (pull - I) Z c = B y
    diff = [[pull[r][c] - (1 if r == c else 0) for c in range(n)] for r in range(n)]
    zmat = la.transpose(z, n) if z else []
    lhs = la.matmul(diff, zmat, inner=n)
    system = [list(lhs[r]) + [-b[r] for b in bcols] for r in range(n)]
    sol = la.nullspace_q(system, len(z) + len(bcols))
    cpart = [v[: len(z)] for v in sol]
    fixed_cycles = la.rank_q(cpart, len(z)) if cpart else 0
    return fixed_cycles - len(bcols)


# ---------------------------------------------------------------------------
# text format

def parse_strata(text: str) -> StratifiedComplex:
    """Read the ``strata v1`` format.

    Glue references are ``<stratum>.<degree>.<index>``.  ``row i j v`` lines
    fill the matrix opened by the most recent ``boundary`` or ``twist``.
    """
    lines = text.splitlines()
    body = [(n, ln.strip()) for n, ln in enumerate(lines, 1)
            if ln.strip() and not ln.strip().startswith("#")]
    if body and body[0][1].startswith("gamma-zeta-lab "):
        body = body[1:]
    if not body or body[0][1] != "strata v1":
        raise errors.ParseError("expected header 'strata v1'", body[0][0] if body else 1)
    order: list[str] = []
    cells: dict[str, dict[int, int]] = {}
    bds: dict[str, dict[int, dict[tuple[int, int], int]]] = {}
    tws: dict[str, dict[int, dict[tuple[int, int], int]]] = {}
    glue_raw: list[tuple[int, str, str]] = []
    sigma: dict[int, int] = {}
    current: str | None = None
    target: dict[tuple[int, int], int] | None = None

    def ints(n: int, parts: list[str], count: int) -> list[int]:
        if len(parts) != count:
            raise errors.ParseError(f"expected {count} fields", n)
        try:
            return [int(p) for p in parts]
        except ValueError:
            raise errors.ParseError("expected integers", n) from None

    for n, ln in body[1:]:
        kw, *rest = ln.split()
        if kw == "stratum":
            if len(rest) != 1:
                raise errors.ParseError("stratum takes one name", n)
            current = rest[0]
            if current in cells:
                raise errors.ParseError(f"duplicate stratum {current}", n)
            order.append(current)
            cells[current], bds[current] = {}, {}
            target = None
        elif kw == "cells":
            if current is None:
                raise errors.ParseError("cells outside a stratum", n)
            k, c = ints(n, rest, 2)
            cells[current][k] = c
            target = None
        elif kw == "boundary":
            if current is None:
                raise errors.ParseError("boundary outside a stratum", n)
            (k,) = ints(n, rest, 1)
            target = bds[current].setdefault(k, {})
        elif kw == "row":
            if target is None:
                raise errors.ParseError("row without an open matrix", n)
            i, j, v = ints(n, rest, 3)
            target[(i, j)] = v
        elif kw == "glue":
            if len(rest) != 2:
                raise errors.ParseError("glue takes two cell references", n)
            glue_raw.append((n, rest[0], rest[1]))
            target = None
        elif kw == "sigma":
            i, j = ints(n, rest, 2)
            if i in sigma:
                raise errors.ParseError(f"sigma({i}) given twice", n)
            sigma[i] = j
            target = None
        elif kw == "twist":
            if len(rest) != 2:
                raise errors.ParseError("twist takes a stratum name and a degree", n)
            name = rest[0]
            (k,) = ints(n, rest[1:], 1)
            target = tws.setdefault(name, {}).setdefault(k, {})
        else:
            raise errors.ParseError(f"unknown keyword {kw!r}", n)

    strata = []
    for name in order:
        top = max(cells[name], default=-1)
        if top < 0:
            raise errors.ParseError(f"stratum {name} has no cells", 1)
        counts = tuple(cells[name].get(k, 0) for k in range(top + 1))
        strata.append(StratumComplex(name, counts, {
            k: _dense(entries, counts[k - 1] if k >= 1 and k - 1 <= top else 0,
                      counts[k] if k <= top else 0, name)
            for k, entries in bds[name].items()}))
    index = {name: i for i, name in enumerate(order)}
    for name in tws:
        if name not in index:
            raise errors.ReferenceError(f"twist names unknown stratum {name!r}")
    sig = tuple(sigma.get(i, i) for i in range(len(order)))
    twists = []
    for i, name in enumerate(order):
        if name not in tws:
            twists.append(None)
            continue
        src = strata[i]
        dst = strata[sig[i]] if 0 <= sig[i] < len(strata) else src
        twists.append({k: _dense(e, dst.count(k), src.count(k), name) for k, e in tws[name].items()})
    gluing = []
    for n, a, b in glue_raw:
        gluing.append((_cell_ref(a, n), _cell_ref(b, n)))
    return StratifiedComplex(tuple(strata), tuple(gluing), sig, tuple(twists))


def _dense(entries: dict[tuple[int, int], int], rows: int, cols: int, name: str) -> la.Matrix:
    m = la.zeros(rows, cols)
    for (i, j), v in entries.items():
        if not (0 <= i < rows and 0 <= j < cols):
            raise errors.ShapeMismatch(f"entry ({i}, {j}) outside a {rows}x{cols} matrix in {name}")
        m[i][j] = v
    return m


def _cell_ref(tok: str, line: int) -> CellRef:
    parts = tok.rsplit(".", 2)
    if len(parts) != 3:
        raise errors.ParseError(f"bad cell reference {tok!r}; use name.degree.index", line)
    try:
        return parts[0], int(parts[1]), int(parts[2])
    except ValueError:
        raise errors.ParseError(f"bad cell reference {tok!r}", line) from None


def format_strata(sc: StratifiedComplex) -> str:
    out = ["strata v1"]
    for s in sc.strata:
        out.append(f"stratum {s.name}")
        out += [f"cells {k} {c}" for k, c in enumerate(s.cells)]
        for k in range(1, s.top + 1):
            nz = [(i, j, v) for i, row in enumerate(s.boundary[k]) for j, v in enumerate(row) if v]
            if nz:
                out.append(f"boundary {k}")
                out += [f"row {i} {j} {v}" for i, j, v in nz]
    for a, b in sc.gluing:
        out.append(f"glue {a[0]}.{a[1]}.{a[2]} {b[0]}.{b[1]}.{b[2]}")
    for i, j in enumerate(sc.sigma):
        out.append(f"sigma {i} {j}")
    for s, tw in zip(sc.strata, sc.twists):
        for k, m in sorted((tw or {}).items()):
            out.append(f"twist {s.name} {k}")
            out += [f"row {i} {j} {v}" for i, row in enumerate(m) for j, v in enumerate(row) if v]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# fixtures

def circle(name: str = "S") -> StratumComplex:
    """One vertex and one loop edge."""
    return StratumComplex(name, (1, 1), {1: ((0,),)})


def point(name: str = "P") -> StratumComplex:
    return StratumComplex(name, (1,))


def projective_plane(name: str = "RP2") -> StratumComplex:
    return StratumComplex(name, (1, 1, 1), {1: ((0,),), 2: ((2,),)})


def polygon_circle(n: int, name: str) -> StratumComplex:
    """Circle as an n-gon: edge j runs from vertex j to vertex j+1."""
    m = la.zeros(n, n)
    for j in range(n):
        m[(j + 1) % n][j] += 1
        m[j][j] -= 1
    return StratumComplex(name, (n, n), {1: m})


def circles_cycled(count: int, sigma: Sequence[int] | None = None,
                   gluing: Sequence[tuple[CellRef, CellRef]] = ()) -> StratifiedComplex:
    """``count`` single-cell circles with identity twists along ``sigma``."""
    strata = tuple(circle(f"S{i}") for i in range(count))
    sig = tuple(sigma) if sigma is not None else tuple(range(count))
    return StratifiedComplex(strata, tuple(gluing), sig)


def report(sc: StratifiedComplex, mode: str, ring: Ring = "int",
           degree: int | None = None) -> list[str]:
    """``strata v1`` report lines for the cohomology, twisted or invariant modes."""
    degrees = range(sc.top + 1) if degree is None else [degree]
    lines = [f"strata v1 mode {mode}"]
    if mode == "cohomology":
        for s in sc.strata:
            for k in degrees:
                if k <= s.top:
                    lines.append(f"{s.name} " + cohomology_stratum(s, k, ring).line())
        for k in degrees:
            lines.append("sum " + glued_complex(StratifiedComplex(sc.strata)).cohomology(k, ring).line())
    elif mode == "twisted":
        lines.append("dtau_squared_zero " + ("yes" if dtau_squared_zero(sc) else "no"))
        for k in degrees:
            lines.append("twisted " + twisted_cohomology(sc, k, ring).line())
    elif mode == "invariant":
        for k in degrees:
            total = glued_complex(sc).cohomology(k, "rat").rank
            lines.append(f"H{k} rank {total} invariant {invariant_classes(sc, k)}")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return lines
