"""Constant-curvature leaf profile inside the unit cube.

The profile is the surface of revolution whose momentum profile is the
quadratic ``phi(u) = a u - b u^2`` with ``a = 2/sqrt(3)``.  The meridian
length ``S(b)`` and the enclosed volume are integrals in ``u`` with
inverse-square-root endpoint behaviour; both are evaluated after the
substitution ``u = u_max sin^2(psi)``, which makes the integrands smooth.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from . import errors

A = math.sqrt(4.0 / 3.0)  # 2/sqrt(3), correctly rounded
SQRT3 = math.sqrt(3.0)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


@dataclass(frozen=True)
class MomentumProfile:
    b: float
    a: float = A

    def __post_init__(self) -> None:
        if not self.b > 0:
            raise ValueError("b must be positive")

    @property
    def u_max(self) -> float:
        return self.a / self.b

    @property
    def curvature(self) -> float:
        # K = -phi''/2 and phi'' = -2b
        return self.b

    def phi(self, u):
        return self.a * u - self.b * u * u

    def dphi(self, u):
        return self.a - 2.0 * self.b * u

    def u_of_psi(self, psi):
        return self.u_max * np.sin(psi) ** 2

    def length_density(self, psi):
        """dx/dpsi: the arc-length integrand after the sine-squared substitution.

        ``du/dpsi = 2 u_max sin(psi) cos(psi)`` and ``sqrt(phi) = (a/sqrt(b))
        sin(psi) cos(psi)``, so their ratio is the constant ``2/sqrt(b)``.
        """
        dphi = self.dphi(self.u_of_psi(psi))
        return np.sqrt(1.0 - 0.25 * dphi * dphi) * (2.0 / math.sqrt(self.b))

    def volume_density(self, psi):
        u = self.u_of_psi(psi)
        dphi = self.dphi(u)
        du = 2.0 * self.u_max * np.sin(psi) * np.cos(psi)
        return math.pi * np.sqrt((1.0 - 0.25 * dphi * dphi) * self.phi(u)) * du

    def xi_of_psi(self, psi):
        return np.sqrt(np.maximum(self.phi(self.u_of_psi(psi)), 0.0))

    def x_of_psi(self, psi):
        """Meridian length from the first cone point, vectorised.

        Fixed 48-point Gauss-Legendre on [0, psi]; the integrand is analytic
        so this is accurate to rounding.
        """
        psi = np.asarray(psi, dtype=float)
        half = 0.5 * psi[..., None]
        nodes = half * (_GL_NODES + 1.0)
        return (half[..., 0]) * (self.length_density(nodes) * _GL_WEIGHTS).sum(axis=-1)

    def psi_of_x(self, x, iters: int = 40):
        """Invert :meth:`x_of_psi` by Newton; ``dx/dpsi`` is bounded below."""
        x = np.asarray(x, dtype=float)
        total = float(self.x_of_psi(math.pi / 2))
        psi = np.clip(x / total, 0.0, 1.0) * (math.pi / 2)
        for _ in range(iters):
            step = (self.x_of_psi(psi) - x) / self.length_density(psi)
            psi = np.clip(psi - step, 0.0, math.pi / 2)
            if np.all(np.abs(step) < 1e-15):
                break
        return psi

    def xi_at(self, x):
        """Profile radius as a function of meridian length."""
        return self.xi_of_psi(self.psi_of_x(x))


def _quad(fun, lo: float, hi: float, tol: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(fun, lo, hi, epsabs=tol * 1e-2, epsrel=0.0, limit=200)
    if not err <= tol:
        raise errors.QuadratureFailure(f"error estimate {err:.3e} exceeds {tol:.3e}")
    return val, err


def arc_length(b: float, tol: float = 1e-10) -> float:
    """S(b): meridian length between the two cone points."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    prof = MomentumProfile(b)
    val, _ = _quad(prof.length_density, 0.0, math.pi / 2, tol)
    return val


def volume(b: float, tol: float = 1e-10) -> float:
    """Volume enclosed by the surface of revolution."""
    prof = MomentumProfile(b)
    val, _ = _quad(prof.volume_density, 0.0, math.pi / 2, tol)
    return val


def volume_by_x(b: float, tol: float = 1e-10) -> float:
    """Volume as ``pi * integral of xi(x)^2 dx`` over the meridian length.

    Goes through the numerical inverse x -> psi, so it shares no integrand
    with :func:`volume`.
    """
    prof = MomentumProfile(b)
    total = arc_length(b, tol)
    val, _ = _quad(lambda x: math.pi * float(prof.xi_at(x)) ** 2, 0.0, total, tol)
    return val


def cone_slope(b: float, h: float = 1e-4) -> float:
    """d xi / dx at the first cone point, by a one-sided second-order stencil."""
    prof = MomentumProfile(b)
    x1, x2 = prof.xi_at(h), prof.xi_at(2 * h)
    return float((4.0 * x1 - x2) / (2.0 * h))


def solve_b(target: float = SQRT3, tol: float = 1e-8, internal_tol: float = 1e-10) -> float:
    """Find b with S(b) = target.

    S is not assumed monotone: a 60-point log grid over [1e-3, 1e3] is
    scanned for the first sign change, which is then closed by Brent's
    method.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")

    def resid(b: float) -> float:
        return arc_length(b, internal_tol) - target

    grid = np.logspace(-3.0, 3.0, 60)
    values = [resid(float(b)) for b in grid]
    for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if flo == 0.0:
            return float(lo)
        if flo * fhi < 0.0:
            break
    else:
        if values[-1] == 0.0:
            return float(grid[-1])
        raise errors.NoBracket(f"S(b) - {target} has no sign change on [1e-3, 1e3]")
    try:
        b_star, info = optimize.brentq(resid, float(lo), float(hi), xtol=1e-15,
                                       rtol=4 * np.finfo(float).eps, maxiter=200,
                                       full_output=True)
    except RuntimeError as exc:
        raise errors.ConvergenceFailure(str(exc)) from None
    if not info.converged or abs(resid(b_star)) > tol:
        raise errors.ConvergenceFailure(f"residual {resid(b_star):.3e} at b={b_star}")
    return float(b_star)


@dataclass(frozen=True)
class LeafProfile:
    profile: MomentumProfile
    samples: np.ndarray          # rows (u, x, xi)
    arc_length: float
    volume: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def b(self) -> float:
        return self.profile.b

    @property
    def xi_max(self) -> float:
        return self.profile.a / (2.0 * math.sqrt(self.profile.b))

    def xi_at(self, x):
        return self.profile.xi_at(x)


def _psi_grid(n: int) -> np.ndarray:
    # cosine-clustered at both cone points; the apex psi = pi/4 is always a node
    m = n // 2 + 1
    first = (math.pi / 8) * (1.0 - np.cos(np.linspace(0.0, math.pi, m)))
    grid = np.concatenate([first, (math.pi / 2 - first[::-1])[1:]])
    if len(grid) > n:
        grid = np.delete(grid, m)
    return grid


def profile_curve(b: float, n: int = 256, tol: float = 1e-10) -> LeafProfile:
    """Sample (u, x(u), xi(u)) from cone point to cone point."""
    if n < 16:
        raise ValueError("need at least 16 samples")
    prof = MomentumProfile(b)
    psi = _psi_grid(n)
    xs = np.zeros(n)
    worst = 0.0
    for i in range(1, n):
        piece, err = _quad(prof.length_density, float(psi[i - 1]), float(psi[i]), tol)
        xs[i] = xs[i - 1] + piece
        worst = max(worst, err)
    u = prof.u_of_psi(psi)
    u[-1] = prof.u_max
    xi = prof.xi_of_psi(psi)
    xi[0] = xi[-1] = 0.0
    vol, verr = _quad(prof.volume_density, 0.0, math.pi / 2, tol)
    samples = np.column_stack([u, xs, xi])
    return LeafProfile(prof, samples, float(xs[-1]), vol,
                       {"length_quad_err": worst * (n - 1), "volume_quad_err": verr})


def curvature_samples(b: float, n: int = 10, rng: np.random.Generator | None = None,
                      h: float = 1e-4) -> np.ndarray:
    """-phi''/2 by central differences at ``n`` random interior u."""
    prof = MomentumProfile(b)
    rng = rng or np.random.default_rng(0)
    u = rng.uniform(h, prof.u_max - h, size=n)
    second = (prof.phi(u + h) - 2.0 * prof.phi(u) + prof.phi(u - h)) / (h * h)
    return -0.5 * second


def curvature_report(b: float, rng: np.random.Generator | None = None) -> float:
    k = MomentumProfile(b).curvature
    fd = curvature_samples(b, 10, rng)
    dev = float(np.max(np.abs(fd - k)))
    if dev > 1e-6:
        raise ArithmeticError(f"finite-difference curvature deviates by {dev:.3e}")
    return k


@dataclass(frozen=True)
class ShootingResult:
    length: float
    volume: float
    s_end: float


def shoot_profile(b: float, rtol: float = 1e-12) -> ShootingResult:
    """Integrate the meridian by arc length until it returns to the axis.

    In meridian arc length ``s`` the radius obeys ``r'' = -b r`` with
    ``r(0) = 0`` and ``r'(0) = phi'(0)/2``; ``x' = sqrt(1 - r'^2)``.  This
    shares no code with the quadrature route and serves as its oracle.
    """
    prof = MomentumProfile(b)

    def rhs(_s, y):
        r, p, _x, _v = y
        dx = math.sqrt(max(1.0 - p * p, 0.0))
        return [p, -prof.b * r, dx, math.pi * r * r * dx]

    def back_on_axis(_s, y):
        return y[0]

    back_on_axis.terminal = True
    back_on_axis.direction = -1.0
    span = 4.0 * math.pi / math.sqrt(prof.b)
    sol = integrate.solve_ivp(rhs, (0.0, span), [0.0, prof.a / 2.0, 0.0, 0.0],
                              method="DOP853", rtol=rtol, atol=1e-14,
                              events=back_on_axis)
    if sol.status != 1 or not len(sol.t_events[0]):
        raise errors.OdeFailure(sol.message)
    y = sol.y_events[0][0]
    return ShootingResult(float(y[2]), float(y[3]), float(sol.t_events[0][0]))


def leaf_report(b_star: float, profile: LeafProfile) -> list[str]:
    """Lines of the ``leaf v1`` report (without the run header)."""
    lines = ["leaf v1",
             f"a {A:.17g}",
             f"b_star {b_star:.17g}",
             f"arc_length {profile.arc_length:.17g}",
             f"rho_max {profile.volume:.17g}",
             f"K {profile.profile.curvature:.17g}"]
    lines += [f"sample {u:.17g} {x:.17g} {xi:.17g}" for u, x, xi in profile.samples]
    return lines
