"""Holonomy: the +-1 sign character on graph cycles and Levi-Civita
transport around piecewise-geodesic loops on the unit sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import errors
from .graphcore import Multigraph
from .interface_gamma import octant_faces, orthonormal_frame
from .zeta import CycleClass, zeta_poles, zeta_reciprocal

CLOSE_TOL = 1e-9


# --------------------------------------------------------------------------
# sign character


@dataclass(frozen=True)
class SignHolonomy:
    cycle: CycleClass
    sign: int

    @property
    def species(self) -> str:
        return "fermionic" if self.sign < 0 else "bosonic"


def cycle_holonomy_sign(c: CycleClass) -> SignHolonomy:
    return SignHolonomy(c, -1 if c.length % 2 else 1)


def classify_paths(classes: Sequence[CycleClass]) -> tuple[list[CycleClass], list[CycleClass]]:
    """Split into (fermionic, bosonic), keeping input order."""
    fermionic, bosonic = [], []
    for c in classes:
        (fermionic if cycle_holonomy_sign(c).sign < 0 else bosonic).append(c)
    return fermionic, bosonic


def total_holonomy(classes: Sequence[CycleClass]) -> int:
    return sum(cycle_holonomy_sign(c).sign for c in classes)


def sign_report(classes: Sequence[CycleClass], labels: Sequence[str]) -> list[str]:
    """``holonomy v1`` cycle lines; ``labels`` maps arc index to a name."""
    lines = []
    for c in classes:
        h = cycle_holonomy_sign(c)
        name = ",".join(labels[a] for a in c.rep)
        lines.append(f"cycle {name} {c.length} {h.sign:+d} {h.species}")
    lines.append(f"total {total_holonomy(classes)}")
    return lines


# --------------------------------------------------------------------------
# sphere transport


def _wrap(angle: float) -> float:
    a = math.remainder(angle, 2.0 * math.pi)
    return math.pi if a <= -math.pi else a


@dataclass(frozen=True)
class HolonomyElement:
    """Orthogonal map of the tangent plane at ``basepoint``.

    In the plane's fixed frame (see :func:`tangent_frame`) a rotation is
    ``[[c, -s], [s, c]]`` and a reflection ``[[c, s], [s, -c]]`` with
    ``c, s = cos(angle), sin(angle)``.
    """

    basepoint: tuple[float, float, float]
    angle: float
    reflection: bool = False
    loop_id: str = ""

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.angle), math.sin(self.angle)
        if self.reflection:
            return np.array([[c, s], [s, -c]])
        return np.array([[c, -s], [s, c]])

    @classmethod
    def from_matrix(cls, basepoint, m: np.ndarray, loop_id: str = "") -> "HolonomyElement":
        angle = _wrap(math.atan2(m[1, 0], m[0, 0]))
        return cls(tuple(float(x) for x in basepoint), angle, bool(np.linalg.det(m) < 0), loop_id)

    def act(self, v: np.ndarray) -> np.ndarray:
        """Apply to a 3-vector tangent at the basepoint."""
        e1, e2 = tangent_frame(self.basepoint)
        w = self.matrix() @ np.array([np.dot(v, e1), np.dot(v, e2)])
        return w[0] * e1 + w[1] * e2


def identity(basepoint) -> HolonomyElement:
    return HolonomyElement(tuple(float(x) for x in basepoint), 0.0, False, "id")


def tangent_frame(basepoint) -> tuple[np.ndarray, np.ndarray]:
    """Right-handed orthonormal frame of the tangent plane (e1 x e2 = p)."""
    return orthonormal_frame(basepoint)


def _rotate(v: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    # Rodrigues
    c, s = math.cos(angle), math.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1.0 - c)


@dataclass(frozen=True)
class TransportTrace:
    element: HolonomyElement
    final: np.ndarray
    max_norm_drift: float


def transport(loop: Sequence[Sequence[float]], v0: Sequence[float],
              loop_id: str = "") -> TransportTrace:
    """Parallel-transport ``v0`` around a closed chain of minor great-circle arcs.

    Along a great circle the transport is the rotation of the whole sphere
    about that circle's axis, applied in closed form.
    """
    pts = [np.asarray(p, dtype=float) for p in loop]
    if not pts:
        raise errors.NotClosed("empty loop")
    base = pts[0]
    if np.linalg.norm(pts[0] - pts[-1]) > CLOSE_TOL:
        raise errors.NotClosed("loop does not return to its basepoint")
    v = np.asarray(v0, dtype=float)
    if abs(np.dot(v, base)) > CLOSE_TOL:
        raise errors.NotTangent("v0 is not tangent at the basepoint")
    norm0 = np.linalg.norm(v)
    drift = 0.0
    for p, q in zip(pts[:-1], pts[1:]):
        cross = np.cross(p, q)
        sin_w = np.linalg.norm(cross)
        cos_w = float(np.dot(p, q))
        if sin_w < 1e-15:
            if cos_w < 0:
                raise ValueError("antipodal arc endpoints do not fix a geodesic")
            continue
        v = _rotate(v, cross / sin_w, math.atan2(sin_w, cos_w))
        drift = max(drift, abs(np.linalg.norm(v) - norm0))
    e1, e2 = tangent_frame(base)
    a0 = math.atan2(np.dot(v0, e2), np.dot(v0, e1))
    a1 = math.atan2(np.dot(v, e2), np.dot(v, e1))
    elem = HolonomyElement(tuple(float(x) for x in base), _wrap(a1 - a0), False, loop_id)
    return TransportTrace(elem, v, drift)


def sphere_parallel_transport(loop: Sequence[Sequence[float]], basepoint: Sequence[float],
                              v0: Sequence[float], loop_id: str = "") -> HolonomyElement:
    pts = [np.asarray(p, dtype=float) for p in loop]
    bp = np.asarray(basepoint, dtype=float)
    if not pts or np.linalg.norm(pts[0] - bp) > CLOSE_TOL:
        raise errors.NotClosed("loop does not start at the basepoint")
    return transport(pts, v0, loop_id).element


def spherical_excess(vertices: Sequence[Sequence[float]]) -> float:
    """Signed area of a spherical triangle (positive counter-clockwise seen
    from outside), by the Van Oosterom-Strackee formula."""
    a, b, c = (np.asarray(v, dtype=float) for v in vertices)
    num = float(np.dot(a, np.cross(b, c)))
    den = 1.0 + float(np.dot(a, b) + np.dot(b, c) + np.dot(c, a))
    return 2.0 * math.atan2(num, den)


def interior_angle_excess(vertices: Sequence[Sequence[float]]) -> float:
    """Sum of interior angles minus pi, for a triangle in general position."""
    pts = [np.asarray(v, dtype=float) for v in vertices]
    total = 0.0
    for k in range(3):
        p, q, r = pts[k], pts[(k + 1) % 3], pts[(k - 1) % 3]
        tq = q - np.dot(q, p) * p
        tr = r - np.dot(r, p) * p
        total += math.acos(np.clip(np.dot(tq, tr) / (np.linalg.norm(tq) * np.linalg.norm(tr)), -1, 1))
    return total - math.pi


def compose_holonomy(h1: HolonomyElement, h2: HolonomyElement) -> HolonomyElement:
    """``h1`` first, then ``h2``."""
    if np.linalg.norm(np.subtract(h1.basepoint, h2.basepoint)) > CLOSE_TOL:
        raise errors.BasepointMismatch("holonomies live at different basepoints")
    m = h2.matrix() @ h1.matrix()
    return HolonomyElement.from_matrix(h1.basepoint, m, f"{h1.loop_id}*{h2.loop_id}")


@dataclass(frozen=True)
class FixedSubspace:
    dim: int
    basis: np.ndarray            # rows, in tangent-frame coordinates
    basis3d: np.ndarray | None   # rows, as 3-vectors at the basepoint


def holonomy_fixed_points(elements: Sequence[HolonomyElement], tol: float = 1e-8) -> FixedSubspace:
    """Common eigenvalue-1 subspace of all ``elements``."""
    if not elements:
        return FixedSubspace(2, np.eye(2), None)
    bp = elements[0].basepoint
    for h in elements[1:]:
        if np.linalg.norm(np.subtract(h.basepoint, bp)) > CLOSE_TOL:
            raise errors.BasepointMismatch("holonomies live at different basepoints")
    stack = np.vstack([h.matrix() - np.eye(2) for h in elements])
    _, sv, vt = np.linalg.svd(stack)
    sv = np.concatenate([sv, np.zeros(2 - len(sv))])
    basis = vt[sv <= tol]
    e1, e2 = tangent_frame(bp)
    basis3d = np.array([w[0] * e1 + w[1] * e2 for w in basis]).reshape(-1, 3)
    return FixedSubspace(len(basis), basis, basis3d)


# --------------------------------------------------------------------------
# octant loops at a shared basepoint


def octant_loops(basepoint: Sequence[float] = (1.0, 0.0, 0.0)) -> list[tuple[str, list[np.ndarray]]]:
    """The 8 octant triangles as closed loops based at ``basepoint``.

    Faces that do not contain the basepoint are reached by a lasso: out
    along a quarter circle to a face vertex, around the face, and back.
    """
    bp = np.asarray(basepoint, dtype=float)
    out = []
    for n, tri in enumerate(octant_faces()):
        tri = list(tri)
        hit = [k for k, v in enumerate(tri) if np.linalg.norm(v - bp) < CLOSE_TOL]
        if hit:
            k = hit[0]
            ring = tri[k:] + tri[:k]
            loop = ring + [ring[0]]
        else:
            k = max(range(3), key=lambda i: float(np.dot(tri[i], bp)))
            ring = tri[k:] + tri[:k]
            loop = [bp] + ring + [ring[0], bp]
        signs = "".join("+" if s > 0 else "-" for s in np.sum(tri, axis=0))
        out.append((f"octant{signs}", loop))
    return out


def octant_holonomies(basepoint: Sequence[float] = (1.0, 0.0, 0.0)) -> list[HolonomyElement]:
    bp = np.asarray(basepoint, dtype=float)
    e1, _ = tangent_frame(bp)
    return [sphere_parallel_transport(loop, bp, e1, name) for name, loop in octant_loops(bp)]


def transport_report(elements: Sequence[HolonomyElement]) -> list[str]:
    lines = [f"transport {h.loop_id} {h.angle:.17g} {'reflect' if h.reflection else 'rotate'}"
             for h in elements]
    lines.append(f"fixed_dim {holonomy_fixed_points(elements).dim}")
    return lines


# --------------------------------------------------------------------------
# exploratory side-by-side of holonomy fixed data and zeta poles


@dataclass(frozen=True)
class DualityReport:
    generator_rows: tuple[tuple[str, float, bool, int], ...]   # (loop, angle, reflection, fixed dim)
    common_fixed_dim: int
    poles: tuple[tuple[complex, int], ...]

    @property
    def fixed_subspace_dims(self) -> list[int]:
        return [row[3] for row in self.generator_rows]

    def lines(self) -> list[str]:
        out = ["duality v1", f"generators {len(self.generator_rows)}"]
        for loop, angle, refl, dim in self.generator_rows:
            out.append(f"generator {loop} {angle:.12f} {'reflect' if refl else 'rotate'} fixed_dim {dim}")
        out.append(f"common_fixed_dim {self.common_fixed_dim}")
        out.append(f"poles {len(self.poles)}")
        for z, m in self.poles:
            out.append(f"pole {z.real:.12f} {z.imag:.12f} {m} modulus {abs(z):.12f}")
        for dim, count in sorted(_dim_census(self.fixed_subspace_dims).items()):
            out.append(f"pairing fixed_dim={dim} generators={count} "
                       f"pole_moduli={_moduli(self.poles)}")
        return out


def _dim_census(dims: Sequence[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for d in dims:
        out[d] = out.get(d, 0) + 1
    return out


def _moduli(poles) -> str:
    groups: dict[str, int] = {}
    for z, m in poles:
        key = f"{abs(z):.9f}"
        groups[key] = groups.get(key, 0) + m
    return ",".join(f"{k}x{v}" for k, v in sorted(groups.items()))


def duality_report(g: Multigraph, elements: Sequence[HolonomyElement],
                   tol: float = 1e-10) -> DualityReport:
    """Put holonomy fixed-space data next to the zeta poles of ``g``.

    Nothing is claimed about how the two columns relate.
    """
    poles = zeta_poles(zeta_reciprocal(g), tol)
    rows = tuple((h.loop_id, h.angle, h.reflection, holonomy_fixed_points([h]).dim)
                 for h in elements)
    common = holonomy_fixed_points(list(elements)).dim
    return DualityReport(rows, common, tuple(poles))
