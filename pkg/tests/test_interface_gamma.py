from __future__ import annotations

import numpy as np
import pytest

from gammazeta import errors, interface_gamma as ig, leafgeom as lg
from gammazeta.graphcore import validate
from gammazeta.interface_gamma import EmbeddedCurve


@pytest.fixture(scope="module")
def b_star() -> float:
    return lg.solve_b()


def circle_curve(plane: int, center, radius: float, n: int = 400, phase: float = 0.0) -> EmbeddedCurve:
    j = plane - 1
    a, c = (j + 1) % 3, (j + 2) % 3
    t = np.linspace(0.0, 2 * np.pi, n + 1) + phase
    pts = np.tile(np.asarray(center, dtype=float), (n + 1, 1))
    pts[:, a] += radius * np.cos(t)
    pts[:, c] += radius * np.sin(t)
    pts[-1] = pts[0]
    return EmbeddedCurve(plane, pts, f"C{plane}", float(center[j]))


def test_frame_is_right_handed():
    for d in ([1, 1, 1], [1, -1, 1], [0, 0, 1], [3, -2, 0.5]):
        e1, e2 = ig.orthonormal_frame(d)
        n = np.asarray(d, float) / np.linalg.norm(d)
        assert np.allclose(np.cross(e1, e2), n)
        assert abs(e1 @ n) < 1e-15 and abs(e1 @ e2) < 1e-15


def test_sphere_equator_is_one_great_circle():
    s = ig.sphere_surface(0)
    curves = ig.extract_plane_curves(s, 1, grid=256)
    assert len(curves) == 1
    c = curves[0]
    assert c.closure_gap() <= ig.EPS_CLOSE
    r = np.linalg.norm(c.points - 0.5, axis=1)
    assert np.max(np.abs(r - 1.0)) <= 1e-6
    assert c.plane_deviation() <= 1e-9


def test_plane_outside_the_cube_gives_nothing():
    assert ig.extract_plane_curves(ig.sphere_surface(0), 1, grid=64, offset=2.0) == []


def test_three_great_circles_make_the_octahedron():
    curves = [ig.extract_plane_curves(ig.sphere_surface(k), k + 1, grid=256)[0] for k in range(3)]
    g = ig.assemble_gamma(curves)
    rep = validate(g)
    assert (rep.n_vertices, rep.n_edges, rep.min_degree, rep.cycle_rank) == (6, 12, 4, 7)
    # each vertex sits at distance 1 from the centre along a coordinate axis
    for v in g.vertices:
        off = np.abs(np.subtract(v.coords, 0.5))
        assert sorted(np.round(off, 6)) == [0.0, 0.0, 1.0]
    # input order does not matter
    assert ig.assemble_gamma(curves[::-1]) == g


def test_isolated_loop_becomes_a_self_loop():
    g = ig.assemble_gamma([circle_curve(3, (0.5, 0.5, 0.5), 0.2)])
    assert len(g.vertices) == 1 and len(g.edges) == 1 and g.edges[0].is_loop


def test_coincident_curves_merge_and_partial_overlap_fails():
    a = circle_curve(1, (0.5, 0.5, 0.5), 0.3)
    b = circle_curve(1, (0.5, 0.5, 0.5), 0.3, n=517, phase=0.1)
    merged = ig.merge_coincident([a, EmbeddedCurve(b.plane, b.points, "D1", 0.5)])
    assert len(merged) == 1 and merged[0].leaf_id == "C1+D1"
    # a circle sharing a long stretch of a bigger closed curve is degenerate
    half = a.points[: len(a.points) // 2]
    chord = np.linspace(half[-1], half[0], 200)
    d = np.vstack([half, chord[1:]])
    with pytest.raises(errors.DegenerateIntersection):
        ig.assemble_gamma([a, EmbeddedCurve(1, d, "D", 0.5)])


def test_open_curve_is_rejected():
    c = circle_curve(2, (0.5, 0.5, 0.5), 0.25)
    pts = c.points.copy()
    pts[-1] += 0.01
    with pytest.raises(errors.OpenContour):
        ig.assemble_gamma([EmbeddedCurve(2, pts, "X", 0.5)])


def test_leaf_section_at_b_star_lies_on_the_leaf(b_star):
    s = ig.build_leaf_surface(b_star, 0)
    assert np.allclose(s.origin, ig.DIAGONALS[0][0]) and np.allclose(s.end, ig.DIAGONALS[0][1], atol=1e-9)
    curves = ig.extract_plane_curves(s, 1, grid=256)
    assert len(curves) >= 1
    for c in curves:
        assert c.closure_gap() <= ig.EPS_CLOSE
        assert c.plane_deviation() <= 1e-9
        # distance from the axis equals the profile radius at the axial coordinate
        rel = c.points - s.origin
        x = rel @ s.direction
        radial = np.linalg.norm(rel - np.outer(x, s.direction), axis=1)
        assert np.max(np.abs(radial - s.profile.xi_at(x))) < 1e-8


def test_leaf_sections_respect_cube_symmetry(b_star):
    # the swap x2 <-> x3 maps the leaf set to itself and the x2 mid-plane to x3
    leaves = [ig.build_leaf_surface(b_star, k) for k in range(4)]
    sec2 = [c for s in leaves for c in ig.extract_plane_curves(s, 2, grid=256)]
    sec3 = [c for s in leaves for c in ig.extract_plane_curves(s, 3, grid=256)]
    assert len(sec2) == len(sec3)
    for c in sec2:
        mirrored = c.points[:, [0, 2, 1]]
        best = min(np.max(np.min(np.linalg.norm(mirrored[:, None] - d.points[None], axis=2), axis=1))
                   for d in sec3)
        assert best < 1e-3


def test_octant_graph_fixture():
    g, classes = ig.octant_graph()
    rep = validate(g)
    assert (rep.n_vertices, rep.n_edges, rep.cycle_rank) == (6, 12, 7)
    assert len(classes) == 8 and all(c.length == 3 for c in classes)
    for v in g.vertices:
        assert np.linalg.norm(v.coords) == pytest.approx(1.0)
    faces = ig.octant_faces()
    for a, b, c in faces:
        # counter-clockwise seen from outside
        assert np.dot(np.cross(b - a, c - a), a + b + c) > 0


def test_format_curves_lists_every_point():
    c = circle_curve(1, (0.5, 0.5, 0.5), 0.2, n=10)
    text = ig.format_curves([c])
    assert text.startswith("curves v1\ncurve C1 x1\n")
    assert text.count("\npt ") == 11
