from __future__ import annotations

import math

import numpy as np
import pytest

from gammazeta import errors, holonomy as hol, interface_gamma as ig, zeta
from gammazeta.graphcore import build_arc_system
from gammazeta.zeta import CycleClass

from graph_samples import triangle

X, Y, Z = np.eye(3)


def wrapped(a: float) -> float:
    return math.remainder(a, 2 * math.pi)


def random_triangles(n: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        pts = rng.normal(size=(3, 3))
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        # keep away from degenerate and near-antipodal configurations
        if abs(np.linalg.det(pts)) < 0.05 or min(pts[i] @ pts[j] for i in range(3) for j in range(i)) < -0.95:
            continue
        out.append(pts)
    return out


def test_sign_character():
    assert hol.cycle_holonomy_sign(CycleClass(3, (0, 2, 4))).species == "fermionic"
    assert hol.cycle_holonomy_sign(CycleClass(4, (0, 2, 4, 6))).sign == 1
    assert hol.classify_paths([]) == ([], [])
    assert hol.total_holonomy([]) == 0
    lengths = [CycleClass(3, (0,)), CycleClass(3, (1,)), CycleClass(4, (2,))]
    assert hol.total_holonomy(lengths) == -1


def test_octahedron_census():
    g, _ = ig.octant_graph()
    classes = zeta.enumerate_cycles(g, 4)
    fermionic, bosonic = hol.classify_paths(classes)
    # 8 faces, two orientations each; every length-4 class is bosonic
    assert len(fermionic) == 16 and all(c.length == 3 for c in fermionic)
    assert bosonic and all(c.length == 4 for c in bosonic)
    assert hol.total_holonomy(classes) == len(bosonic) - len(fermionic)
    lines = hol.sign_report(classes, build_arc_system(g).labels)
    assert lines[-1] == f"total {len(bosonic) - 16}"
    assert sum("fermionic" in ln for ln in lines) == 16


def test_triangle_classes_are_fermionic():
    fermionic, bosonic = hol.classify_paths(zeta.enumerate_cycles(triangle(), 6))
    assert len(fermionic) == 2 and bosonic == []


def test_octant_transport_is_a_quarter_turn():
    tr = hol.transport([X, Y, Z, X], Y)
    assert tr.element.angle == pytest.approx(math.pi / 2, abs=1e-12)
    assert tr.max_norm_drift < 1e-12
    assert hol.spherical_excess([X, Y, Z]) == pytest.approx(math.pi / 2)
    assert hol.interior_angle_excess([X, Y, Z]) == pytest.approx(math.pi / 2)


def test_random_triangles_match_the_excess():
    for pts in random_triangles(20, seed=11):
        a, b, c = pts
        e1, _ = hol.tangent_frame(a)
        tr = hol.transport([a, b, c, a], e1)
        excess = hol.spherical_excess(pts)
        assert abs(wrapped(tr.element.angle - excess)) < 1e-9
        assert abs(abs(excess) - hol.interior_angle_excess(pts)) < 1e-9
        assert tr.max_norm_drift < 1e-12
        assert np.linalg.norm(tr.final) == pytest.approx(1.0, abs=1e-12)


def test_trivial_loops():
    assert hol.transport([X, X], Y).element.angle == 0.0
    equator = [np.array([math.cos(t), math.sin(t), 0.0]) for t in np.linspace(0, 2 * math.pi, 9)]
    equator[-1] = equator[0]
    assert abs(wrapped(hol.transport(equator, Z).element.angle)) < 1e-12


def test_transport_errors():
    with pytest.raises(errors.NotClosed):
        hol.transport([X, Y, Z], Y)
    with pytest.raises(errors.NotTangent):
        hol.transport([X, Y, X], X)
    with pytest.raises(errors.NotClosed):
        hol.sphere_parallel_transport([Y, Z, Y], X, Z)


def test_composition_and_fixed_points():
    q = hol.HolonomyElement((1.0, 0.0, 0.0), math.pi / 2)
    half = hol.compose_holonomy(q, q)
    assert abs(abs(half.angle) - math.pi) < 1e-12
    ident = hol.identity((1.0, 0.0, 0.0))
    assert hol.compose_holonomy(ident, q).angle == pytest.approx(q.angle)
    with pytest.raises(errors.BasepointMismatch):
        hol.compose_holonomy(q, hol.identity((0.0, 1.0, 0.0)))
    assert hol.holonomy_fixed_points([ident]).dim == 2
    assert hol.holonomy_fixed_points([q]).dim == 0
    mirror = hol.HolonomyElement((1.0, 0.0, 0.0), 0.7, reflection=True)
    fixed = hol.holonomy_fixed_points([mirror])
    assert fixed.dim == 1
    axis = fixed.basis3d[0]
    assert np.allclose(mirror.act(axis), axis)
    back = hol.HolonomyElement.from_matrix(mirror.basepoint, mirror.matrix())
    assert back.reflection and back.angle == pytest.approx(0.7)


def test_octant_holonomies_share_a_basepoint():
    elems = hol.octant_holonomies()
    assert len(elems) == 8
    for h in elems:
        assert h.angle == pytest.approx(math.pi / 2, abs=1e-12)
        assert h.basepoint == (1.0, 0.0, 0.0)
    lines = hol.transport_report(elems)
    assert lines[-1] == "fixed_dim 0"


def test_duality_reports():
    g, _ = ig.octant_graph()
    rep = hol.duality_report(g, hol.octant_holonomies())
    assert len(rep.generator_rows) == 8 and rep.fixed_subspace_dims == [0] * 8
    assert sum(m for _, m in rep.poles) == len(zeta.zeta_reciprocal(g).poly) - 1
    assert rep.lines() == hol.duality_report(g, hol.octant_holonomies()).lines()
    empty = hol.duality_report(g, [])
    assert empty.common_fixed_dim == 2 and empty.generator_rows == ()
    tri = hol.duality_report(triangle(), [hol.identity((1.0, 0.0, 0.0))])
    assert tri.common_fixed_dim == 2
    assert [m for _, m in tri.poles] == [2, 2, 2]
    assert all(abs(z**3 - 1) < 1e-12 for z, _ in tri.poles)
