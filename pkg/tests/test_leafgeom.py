from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from scipy.special import ellipe

from gammazeta import errors, leafgeom as lg

# with u = u_max sin^2(psi) the meridian length density is
# (2/sqrt(b)) sqrt(1 - (1 - 2 sin^2 psi)^2 / 3), so S(b) = 2 E(1/3) / sqrt(b)
# with E the complete elliptic integral of the second kind (parameter m)
E13 = float(ellipe(1.0 / 3.0))


def closed_form_length(b: float) -> float:
    return 2.0 * E13 / math.sqrt(b)


def test_slope_constant_is_two_over_root_three():
    with mpmath.workdps(40):
        assert lg.A == float(mpmath.mpf(2) / mpmath.sqrt(3))
    assert repr(lg.A).startswith("1.1547005383792515")


@pytest.mark.parametrize("b", [0.05, 0.25, 1.0, 2.7, 40.0])
def test_arc_length_matches_elliptic_closed_form(b):
    assert lg.arc_length(b) == pytest.approx(closed_form_length(b), rel=1e-12)


def test_solve_b_against_closed_form_root():
    b = lg.solve_b()
    assert b == pytest.approx(4.0 * E13**2 / 3.0, rel=1e-10)
    assert abs(lg.arc_length(b) - math.sqrt(3.0)) <= 1e-8


def test_solve_b_self_target():
    assert lg.solve_b(target=lg.arc_length(1.0)) == pytest.approx(1.0, abs=1e-8)


def test_solve_b_without_bracket():
    with pytest.raises(errors.NoBracket):
        lg.solve_b(target=1e6)


def test_shooting_oracle_agrees():
    b = lg.solve_b()
    shot = lg.shoot_profile(b)
    assert shot.length == pytest.approx(lg.arc_length(b), rel=1e-10)
    assert shot.volume == pytest.approx(lg.volume(b), rel=1e-10)


def test_volume_by_two_integrals():
    for b in (0.5, lg.solve_b()):
        assert lg.volume_by_x(b) == pytest.approx(lg.volume(b), rel=1e-9)


@pytest.mark.parametrize("b", [1.0, 0.25, 3.0])
def test_curvature_is_b(b):
    assert lg.curvature_report(b, np.random.default_rng(1)) == b
    fd = lg.curvature_samples(b, 20, np.random.default_rng(2))
    assert np.max(np.abs(fd - b)) < 1e-6


def test_cone_slope_is_one_over_root_two():
    b = lg.solve_b()
    assert abs(lg.cone_slope(b) - 1.0 / math.sqrt(2.0)) < 1e-6
    # the sample grid clusters at the cone point, so the first chord is short
    _, x, xi = lg.profile_curve(b, 256).samples[:2].T
    assert abs(xi[1] / x[1] - 1.0 / math.sqrt(2.0)) < 1e-6


def test_profile_samples_are_consistent():
    b = lg.solve_b()
    prof = lg.profile_curve(b, 128)
    u, x, xi = prof.samples.T
    assert len(u) == 128
    assert xi[0] == xi[-1] == 0.0
    assert np.all(np.diff(x) > 0) and np.all(np.diff(u) >= 0)
    assert x[-1] == pytest.approx(math.sqrt(3.0), abs=1e-9)
    assert xi.max() == pytest.approx(prof.xi_max, rel=1e-14)
    # xi^2 = phi(u) and |phi'| <= 2 along the profile
    assert np.allclose(xi**2, prof.profile.phi(u), atol=1e-14)
    assert np.all(np.abs(prof.profile.dphi(u)) <= 2.0)
    # the meridian is symmetric about its midpoint
    assert np.allclose(prof.xi_at(x[-1] - x[:20]), xi[:20], atol=1e-9)


def test_bad_inputs():
    with pytest.raises(ValueError):
        lg.MomentumProfile(0.0)
    with pytest.raises(ValueError):
        lg.arc_length(1.0, tol=0.0)
    with pytest.raises(ValueError):
        lg.profile_curve(1.0, 4)


def test_report_lines():
    b = lg.solve_b()
    lines = lg.leaf_report(b, lg.profile_curve(b, 32))
    assert lines[0] == "leaf v1"
    assert lines[1].startswith("a 1.1547005383792515")
    assert sum(ln.startswith("sample ") for ln in lines) == 32
