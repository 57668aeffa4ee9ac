"""
Radial harmonic maps between annuli
===================================

A rotationally symmetric harmonic map ``w = g(rho(log|z|)) e^{i arg z}`` into
a metric with angular coefficient ``G`` reduces, in the log-radius variable
``t = log|z|``, to the autonomous second-order equation::

    rho_tt = (1/2) d(G^2)/d rho  (= G G'),

because the planar Laplacian of a radial function is ``e^{-2t} rho_tt`` and
``|grad arg z|^2 = e^{-2t}``.  This module integrates that equation (RK4 with
a half-step Richardson cross-check), solves the two-point boundary problem by
bisection on the initial slope, and provides the classical closed-form radial
maps between Euclidean annuli that serve as oracles for everything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import BracketingError, DomainError
from .metrics import RotMetric

BVP_TOL = 1e-9
DEFAULT_STEPS = 4096


def ode_rhs(m: RotMetric, rho):
    """Right-hand side of the radial reduction: (1/2) d(G^2)/d rho at rho.

    For the constant-curvature models this is sinh(2 kappa rho)/(2 kappa),
    rho, and sin(2 kappa rho)/(2 kappa) respectively.
    """
    m.check_rho(rho)
    out = 0.5 * np.asarray(m.dG2(rho))
    return out if out.ndim else float(out)


def _scalar_rhs(m: RotMetric):
    """A cheap scalar closure for the RK4 loop (no domain checks)."""
    if m._g_analytic is not None and m._g_prime_analytic is not None:
        g, gp = m._g_analytic, m._g_prime_analytic
        return lambda r: float(g(r)) * float(gp(r))
    if m.density_prime is not None:
        inv, h, hp = m.inverse_distance, m.density, m.density_prime

        def rhs(r):
            s = float(inv(r))
            return s * (float(h(s)) + float(hp(s)) * s)

        return rhs
    return lambda r: 0.5 * float(m.dG2(r))


@dataclass
class RadialProfile:
    """A sampled radial trajectory rho(t) over t in [0, T].

    ``residual`` is the maximum discrepancy between the trajectory and an
    independent half-step integration (Richardson cross-check); ``exited``
    flags truncation at the metric's valid range, with the exit time.
    """

    t_grid: np.ndarray
    rho: np.ndarray
    slope: np.ndarray
    slope0: float
    residual: float
    metric: RotMetric
    exited: bool = False
    exit_time: float | None = None
    boundary_error: float | None = None

    @property
    def modulus(self) -> float:
        return float(self.t_grid[-1])

    @property
    def rho1(self) -> float:
        return float(self.rho[0])

    @property
    def rho2(self) -> float:
        return float(self.rho[-1])

    @property
    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self.rho) > 0))

    @cached_property
    def _spline(self) -> CubicSpline:
        return CubicSpline(self.t_grid, self.rho)

    def rho_at(self, t):
        return self._spline(t)

    def slope_at(self, t):
        return self._spline(t, 1)


_RHO_CEILING = 300.0  # keeps sinh/cosh of runaway trajectories finite


def _rk4(rhs, rho1: float, slope0: float, T: float, n: int, rho_max: float):
    h = T / n
    safe_hi = rho_max * (1 - 1e-12) if math.isfinite(rho_max) else _RHO_CEILING
    y, v = float(rho1), float(slope0)
    ys = [y]
    vs = [v]
    exited_at = None
    for i in range(n):
        if not (0.0 <= y < safe_hi):
            exited_at = i * h
            break
        f = lambda r: rhs(min(max(r, 0.0), safe_hi))
        k1y, k1v = v, f(y)
        k2y, k2v = v + 0.5 * h * k1v, f(y + 0.5 * h * k1y)
        k3y, k3v = v + 0.5 * h * k2v, f(y + 0.5 * h * k2y)
        k4y, k4v = v + h * k3v, f(y + h * k3y)
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        ys.append(y)
        vs.append(v)
    m = len(ys) - 1
    return np.linspace(0.0, m * h, m + 1), np.array(ys), np.array(vs), exited_at


def shoot(m: RotMetric, rho1: float, slope0: float, T: float,
          n_steps: int = DEFAULT_STEPS, richardson: bool = True) -> RadialProfile:
    """Integrate the radial equation from (rho1, slope0) over [0, T].

    Returns the RK4 trajectory on ``n_steps + 1`` nodes.  If the trajectory
    leaves the metric's valid range (or blows past the overflow guard at
    radius 300 on unbounded metrics) it is truncated and flagged.  With
    ``richardson=True`` the equation is re-integrated at half the step and
    the maximum disagreement on shared nodes is stored as the residual.
    """
    if T <= 0:
        raise DomainError("modulus T must be positive")
    m.check_rho(rho1)
    rhs = _scalar_rhs(m)
    t, rho, slope, exited_at = _rk4(rhs, rho1, slope0, T, n_steps, m.rho_max)
    residual = math.nan
    if richardson and len(rho) > 1:
        _, rho_half, _, _ = _rk4(rhs, rho1, slope0, float(t[-1]), 2 * (len(rho) - 1), m.rho_max)
        k = min(len(rho), (len(rho_half) + 1) // 2)
        residual = float(np.max(np.abs(rho[:k] - rho_half[: 2 * k : 2])))
    return RadialProfile(
        t_grid=t, rho=rho, slope=slope, slope0=float(slope0),
        residual=residual, metric=m,
        exited=exited_at is not None, exit_time=exited_at,
    )


def critical_outer(m: RotMetric, rho1: float, T: float,
                   n_steps: int = DEFAULT_STEPS) -> float:
    """Outer radius rho(T) of the zero-initial-slope trajectory.

    Because the right-hand side is nonnegative on the admissible range this
    is the smallest outer radius any monotone radial harmonic map of modulus
    T can reach from rho1.  Flat case: rho1 cosh(T).
    """
    prof = shoot(m, rho1, 0.0, T, n_steps=n_steps, richardson=False)
    if prof.exited:
        raise DomainError(
            f"critical trajectory left the metric range at t = {prof.exit_time:.6g}"
        )
    return prof.rho2


@dataclass(frozen=True)
class NoSolution:
    """Nonexistence result of the radial boundary-value problem.

    The zero-slope trajectory already overshoots the requested outer radius:
    no monotone radial harmonic map with this data exists.
    """

    rho1: float
    rho2: float
    modulus: float
    critical_outer: float
    reason: str = "zero-slope trajectory overshoots the requested outer radius"


def solve_bvp(m: RotMetric, rho1: float, rho2: float, T: float,
              n_steps: int = DEFAULT_STEPS, tol: float = BVP_TOL):
    """Monotone radial solution with rho(0) = rho1, rho(T) = rho2, or NoSolution.

    Bisection on the initial slope in [0, 10 (rho2 - rho1)/T]; convexity of
    the trajectory makes ten chord slopes a safe upper bracket.  Returns
    :class:`NoSolution` when even the zero-slope trajectory ends above rho2.
    """
    if not rho1 < rho2:
        raise DomainError("need rho1 < rho2")
    m.check_rho(rho1)
    m.check_rho(rho2)

    def endpoint(slope):
        prof = shoot(m, rho1, slope, T, n_steps=n_steps, richardson=False)
        if prof.exited:
            return math.inf, prof
        return prof.rho2 - rho2, prof

    f0, prof0 = endpoint(0.0)
    if f0 > tol:
        return NoSolution(rho1=rho1, rho2=rho2, modulus=T, critical_outer=prof0.rho2)
    if abs(f0) <= tol:
        best = shoot(m, rho1, 0.0, T, n_steps=n_steps)
        best.boundary_error = abs(f0)
        return best

    lo, f_lo = 0.0, f0
    hi = 10.0 * (rho2 - rho1) / T
    f_hi, _ = endpoint(hi)
    if f_hi < 0:
        raise BracketingError(
            f"slope bracket [0, {hi:.6g}] does not straddle the target outer radius"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid, prof = endpoint(mid)
        if abs(f_mid) <= tol and math.isfinite(f_mid):
            best = shoot(m, rho1, mid, T, n_steps=n_steps)
            best.boundary_error = abs(f_mid)
            return best
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-17 * max(1.0, hi):
            break
    raise BracketingError("bisection failed to reach the boundary tolerance")


def critical_modulus(m: RotMetric, rho1: float, rho2: float,
                     tol: float = 1e-10, n_steps: int = DEFAULT_STEPS) -> float:
    """Largest modulus admitting a monotone radial map from rho1 to rho2.

    This is the T at which the zero-slope trajectory ends exactly at rho2;
    monotone solutions exist precisely for moduli up to this value.
    """
    if not rho1 < rho2:
        raise DomainError("need rho1 < rho2")

    def overshoot(T):
        prof = shoot(m, rho1, 0.0, T, n_steps=n_steps, richardson=False)
        return math.inf if prof.exited else prof.rho2 - rho2

    lo = 1e-9
    hi = max(1.0, math.sqrt(2 * (rho2 - rho1)))
    for _ in range(80):
        if overshoot(hi) > 0:
            break
        hi *= 1.7
    else:
        raise BracketingError("could not bracket the critical modulus")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if overshoot(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def nitsche_euclidean(r: float) -> float:
    """Critical target inner radius 2r/(1 + r^2) for the flat annulus A(r, 1)."""
    if not 0 < r < 1:
        raise DomainError("need 0 < r < 1")
    return 2.0 * r / (1.0 + r * r)


def nitsche_ndim(r: float, n: int) -> float:
    """n-dimensional critical ratio n r / (n - 1 + r^n)."""
    if not 0 < r < 1:
        raise DomainError("need 0 < r < 1")
    if n < 2:
        raise DomainError("need n >= 2")
    return n * r / (n - 1 + r**n)


def radial_map_ndim(x, r: float, rho: float, n: int):
    """The classical radial harmonic map of A(r, 1) onto A(rho, 1) in n-space.

    ``f(x) = (a + b/|x|^n) x`` with a + b = 1 (identity on the unit sphere)
    and (a + b/r^n) r = rho on the inner sphere.  Accepts a single point of
    shape (n,) or a batch of shape (m, n).
    """
    if not 0 < r < 1:
        raise DomainError("need 0 < r < 1")
    if not 0 < rho <= 1:
        raise DomainError("need 0 < rho <= 1")
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != n:
        raise DomainError(f"points must have dimension {n}")
    norms = np.linalg.norm(pts, axis=1)
    if np.any(norms < r - 1e-12) or np.any(norms > 1 + 1e-12):
        raise DomainError("points must satisfy r <= |x| <= 1")
    a = (1.0 - r ** (n - 1) * rho) / (1.0 - r**n)
    b = (r ** (n - 1) * rho - r**n) / (1.0 - r**n)
    out = (a + b / norms**n)[:, None] * pts
    return out[0] if single else out
