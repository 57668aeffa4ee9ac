"""
Conformal metrics with rotational symmetry
==========================================

A conformal metric on a planar chart is a positive density ``h`` times the
Euclidean line element.  For rotationally symmetric densities ``h(|w|)`` the
geodesics through the origin are the straight rays, so the geodesic distance
from the origin is ``d(s) = integral_0^s h``, its inverse ``g`` recovers the
chart radius from the geodesic radius, and in geodesic polar coordinates the
metric reads ``d rho^2 + G(rho)^2 d theta^2`` with ``G(rho) = h(g(rho)) g(rho)``.

This module provides:

- :class:`CurvatureBound` -- the sign/magnitude of an upper curvature bound,
- :class:`RotMetric` -- a rotationally symmetric metric (closed-form or
  tabulated) together with its distance profile, inverse, and ``G``,
- the three constant-curvature model metrics ``2/(kappa (1 +- s^2))``,
- the comparison functions ``h_c``, ``psi_small``, ``psi_big``, ``psi_sharp``
  used by the Laplacian bounds and the main annulus inequality,
- a finite-difference Gaussian curvature evaluator, and
- the JSON metric-description loader.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError

NEGATIVE = "negative"
ZERO = "zero"
POSITIVE = "positive"
_SIGNS = (NEGATIVE, ZERO, POSITIVE)


@dataclass(frozen=True)
class CurvatureBound:
    """Upper bound for the Gaussian curvature: -kappa^2, 0 or +kappa^2.

    ``kappa`` must be a positive real whenever ``sign`` is not ``"zero"``;
    it is ignored (and normalised to ``None``) for the zero bound.
    """

    sign: str
    kappa: float | None = None

    def __post_init__(self):
        if self.sign not in _SIGNS:
            raise DomainError(f"curvature sign must be one of {_SIGNS}, got {self.sign!r}")
        if self.sign == ZERO:
            object.__setattr__(self, "kappa", None)
        else:
            if self.kappa is None or not self.kappa > 0:
                raise DomainError("kappa must be a positive real for a nonzero bound")
            object.__setattr__(self, "kappa", float(self.kappa))

    @property
    def value(self) -> float:
        """The signed curvature bound c in {-kappa^2, 0, +kappa^2}."""
        if self.sign == ZERO:
            return 0.0
        k2 = self.kappa**2
        return -k2 if self.sign == NEGATIVE else k2

    @property
    def cap(self) -> float:
        """Largest admissible geodesic radius, pi/(2 kappa) for a positive bound."""
        if self.sign == POSITIVE:
            return math.pi / (2 * self.kappa)
        return math.inf

    @classmethod
    def negative(cls, kappa: float) -> "CurvatureBound":
        return cls(NEGATIVE, kappa)

    @classmethod
    def zero(cls) -> "CurvatureBound":
        return cls(ZERO)

    @classmethod
    def positive(cls, kappa: float) -> "CurvatureBound":
        return cls(POSITIVE, kappa)


def h_c(bound: CurvatureBound, r):
    """Model-space Hessian comparison function.

    sqrt(c) cot(sqrt(c) r)   for c = +kappa^2 (requires r < pi/kappa),
    1/r                      for c = 0,
    sqrt(-c) coth(sqrt(-c) r) for c = -kappa^2.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("h_c requires r > 0")
    if bound.sign == ZERO:
        out = 1.0 / r
    elif bound.sign == NEGATIVE:
        out = bound.kappa / np.tanh(bound.kappa * r)
    else:
        x = bound.kappa * r
        if np.any(x >= math.pi):
            raise DomainError("h_c pole: require r < pi/kappa for a positive bound")
        out = bound.kappa / np.tan(x)
    return out if out.ndim else float(out)


def _check_positive_domain(bound: CurvatureBound, rho, cap_factor: float = 0.5) -> None:
    if bound.sign == POSITIVE:
        limit = math.pi * cap_factor / bound.kappa
        if np.any(np.asarray(rho) > limit + 1e-15):
            raise DomainError(
                f"geodesic radius exceeds pi/({1/cap_factor:g} kappa) = {limit:.6g} "
                "for a positive curvature bound"
            )


def psi_small(bound: CurvatureBound, rho):
    """Laplacian lower-bound coefficient as reported by the main inequality.

    sinh(kappa rho)/kappa, rho, or sin(kappa rho)/kappa by the sign of the
    bound.  The positive branch requires rho <= pi/(2 kappa).
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise DomainError("psi_small requires rho >= 0")
    _check_positive_domain(bound, rho)
    if bound.sign == ZERO:
        out = rho.copy()
    elif bound.sign == NEGATIVE:
        out = np.sinh(bound.kappa * rho) / bound.kappa
    else:
        out = np.sin(bound.kappa * rho) / bound.kappa
    return out if out.ndim else float(out)


def psi_big(bound: CurvatureBound, rho1):
    """Main-inequality constant: psi_small(rho1) / (2 rho1); 1/2 for the zero bound."""
    rho1 = np.asarray(rho1, dtype=float)
    if np.any(rho1 <= 0):
        raise DomainError("psi_big requires rho1 > 0")
    out = psi_small(bound, rho1) / (2 * rho1)
    return out if np.ndim(out) else float(out)


def psi_sharp(bound: CurvatureBound, rho):
    """Sharp per-point Laplacian coefficient h_c(rho) * Ghat(rho)^2.

    Equals sinh(2 kappa rho)/(2 kappa), rho, or sin(2 kappa rho)/(2 kappa);
    this is the radial Laplacian of the constant-curvature model itself, so
    the bound ``lap(rho) >= psi_sharp(rho) |grad theta|^2`` is an equality for
    model metrics.  (``psi_small`` overstates this coefficient by a factor
    cos(kappa rho) in the positive case; see ``laplacian_bound_check``.)
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise DomainError("psi_sharp requires rho >= 0")
    _check_positive_domain(bound, rho, cap_factor=1.0)
    if bound.sign == ZERO:
        out = rho.copy()
    elif bound.sign == NEGATIVE:
        out = np.sinh(2 * bound.kappa * rho) / (2 * bound.kappa)
    else:
        out = np.sin(2 * bound.kappa * rho) / (2 * bound.kappa)
    return out if out.ndim else float(out)


class RotMetric:
    """Rotationally symmetric conformal metric ``h(|w|) |dw|`` on a chart disk.

    Parameters
    ----------
    density : callable
        The profile h(s), strictly positive on (0, s_max).
    distance : callable
        d(s) = integral_0^s h, strictly increasing.
    inverse_distance : callable
        g = d^{-1}, mapping geodesic radius back to chart radius.
    domain_radius : float
        Chart radius s_max (may be ``inf`` for entire-plane charts).
    rho_max : float
        Supremum of valid geodesic radii, d(s_max^-).
    density_prime : callable, optional
        Analytic h'(s); enables exact ODE right-hand sides.
    g_analytic, g_prime_analytic : callable, optional
        Closed forms for G(rho) and G'(rho) (model metrics).
    bound : CurvatureBound, optional
        The curvature upper bound this metric is analysed under.
    """

    def __init__(
        self,
        density: Callable,
        distance: Callable,
        inverse_distance: Callable,
        domain_radius: float,
        rho_max: float,
        density_prime: Callable | None = None,
        g_analytic: Callable | None = None,
        g_prime_analytic: Callable | None = None,
        bound: CurvatureBound | None = None,
        label: str = "metric",
    ):
        self.density = density
        self.distance = distance
        self.inverse_distance = inverse_distance
        self.domain_radius = float(domain_radius)
        self.rho_max = float(rho_max)
        self.density_prime = density_prime
        self._g_analytic = g_analytic
        self._g_prime_analytic = g_prime_analytic
        self.bound = bound
        self.label = label

    def __repr__(self):
        return f"RotMetric({self.label!r}, rho_max={self.rho_max:.6g})"

    def check_rho(self, rho) -> None:
        rho = np.asarray(rho)
        if np.any(rho < 0) or np.any(rho >= self.rho_max):
            raise DomainError(
                f"geodesic radius outside the distance range [0, {self.rho_max:.6g}) "
                f"of {self.label}"
            )

    def G(self, rho):
        """Angular metric coefficient G(rho) = h(g(rho)) g(rho)."""
        self.check_rho(rho)
        if self._g_analytic is not None:
            return self._g_analytic(rho)
        s = self.inverse_distance(rho)
        return self.density(s) * s

    def G_prime(self, rho):
        """dG/d rho, analytic when available, else 4th-order centered FD."""
        if self._g_prime_analytic is not None:
            self.check_rho(rho)
            return self._g_prime_analytic(rho)
        if self.density_prime is not None:
            # G' = g'(h + h' g) with g' = 1/h
            self.check_rho(rho)
            s = self.inverse_distance(rho)
            h = self.density(s)
            return (h + self.density_prime(s) * s) / h
        return self._fd_on_G(rho, order=1)

    def dG2(self, rho):
        """d(G^2)/d rho = 2 g (h + h' g); the radial harmonic-map source term is half this."""
        if self._g_analytic is not None or self.density_prime is not None:
            return 2.0 * self.G(rho) * self.G_prime(rho)
        return self._fd_on_G2(rho)

    def d2G2(self, rho):
        """Second derivative of G^2, used by the Newton linearisation."""
        self.check_rho(rho)
        h = 1e-5
        lo = np.maximum(np.asarray(rho, dtype=float) - h, 1e-300)
        hi = np.asarray(rho, dtype=float) + h
        hi = np.minimum(hi, self.rho_max * (1 - 1e-12)) if np.isfinite(self.rho_max) else hi
        return (self.dG2(hi) - self.dG2(lo)) / (hi - lo)

    def _fd_on_G(self, rho, order: int):
        self.check_rho(rho)
        rho = np.asarray(rho, dtype=float)
        h = 1e-5
        vals = [self.G(np.clip(rho + k * h, 1e-300, None)) for k in (-2, -1, 1, 2)]
        return (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)

    def _fd_on_G2(self, rho):
        self.check_rho(rho)
        rho = np.asarray(rho, dtype=float)
        h = 1e-5
        vals = [self.G(np.clip(rho + k * h, 1e-300, None)) ** 2 for k in (-2, -1, 1, 2)]
        return (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)


def metric_G(m: RotMetric, rho):
    """G(rho) of a rotationally symmetric metric (domain-checked)."""
    return m.G(rho)


def constant_curvature_metric(bound: CurvatureBound) -> RotMetric:
    """The model metric of constant curvature matching ``bound``.

    Densities 2/(kappa (1 + s^2)), 1, 2/(kappa (1 - s^2)): distance profiles
    (2/kappa) atan, identity, (2/kappa) atanh; G(rho) = sin(kappa rho)/kappa,
    rho, sinh(kappa rho)/kappa.
    """
    if bound.sign == ZERO:
        return RotMetric(
            density=lambda s: np.ones_like(np.asarray(s, dtype=float)),
            distance=lambda s: np.asarray(s, dtype=float),
            inverse_distance=lambda rho: np.asarray(rho, dtype=float),
            domain_radius=math.inf,
            rho_max=math.inf,
            density_prime=lambda s: np.zeros_like(np.asarray(s, dtype=float)),
            g_analytic=lambda rho: np.asarray(rho, dtype=float),
            g_prime_analytic=lambda rho: np.ones_like(np.asarray(rho, dtype=float)),
            bound=bound,
            label="flat",
        )
    k = bound.kappa
    if bound.sign == NEGATIVE:
        return RotMetric(
            density=lambda s: 2.0 / (k * (1.0 - np.asarray(s, dtype=float) ** 2)),
            distance=lambda s: 2.0 / k * np.arctanh(np.asarray(s, dtype=float)),
            inverse_distance=lambda rho: np.tanh(k * np.asarray(rho, dtype=float) / 2.0),
            domain_radius=1.0,
            rho_max=math.inf,
            density_prime=lambda s: 4.0 * np.asarray(s, dtype=float)
            / (k * (1.0 - np.asarray(s, dtype=float) ** 2) ** 2),
            g_analytic=lambda rho: np.sinh(k * np.asarray(rho, dtype=float)) / k,
            g_prime_analytic=lambda rho: np.cosh(k * np.asarray(rho, dtype=float)),
            bound=bound,
            label=f"hyperbolic(kappa={k:g})",
        )
    return RotMetric(
        density=lambda s: 2.0 / (k * (1.0 + np.asarray(s, dtype=float) ** 2)),
        distance=lambda s: 2.0 / k * np.arctan(np.asarray(s, dtype=float)),
        inverse_distance=lambda rho: np.tan(k * np.asarray(rho, dtype=float) / 2.0),
        domain_radius=math.inf,
        rho_max=math.pi / k,
        density_prime=lambda s: -4.0 * np.asarray(s, dtype=float)
        / (k * (1.0 + np.asarray(s, dtype=float) ** 2) ** 2),
        g_analytic=lambda rho: np.sin(k * np.asarray(rho, dtype=float)) / k,
        g_prime_analytic=lambda rho: np.cos(k * np.asarray(rho, dtype=float)),
        bound=bound,
        label=f"spherical(kappa={k:g})",
    )


def metric_from_profile(samples, bound: CurvatureBound | None = None,
                        label: str = "profile") -> RotMetric:
    """Build a metric from (s, h(s)) samples.

    The density is interpolated by a monotone cubic (PCHIP), the distance is
    its cumulative Simpson integral on >= 1024 refined knots, and the inverse
    distance is the PCHIP interpolant of the reflected table.  Zero or
    negative density samples are rejected.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 4:
        raise DomainError("profile samples must be an (n, 2) array with n >= 4")
    s, h = arr[:, 0], arr[:, 1]
    if s[0] < 0 or np.any(np.diff(s) <= 0):
        raise DomainError("profile radii must be nonnegative and strictly increasing")
    if np.any(h <= 0):
        raise DomainError("profile density must be strictly positive")
    if s[0] > 0:
        s = np.concatenate([[0.0], s])
        h = np.concatenate([[h[0]], h])
    density = PchipInterpolator(s, h)
    s_max = float(s[-1])

    n_knots = max(1024, 4 * len(s))
    fine = np.linspace(0.0, s_max, 2 * n_knots + 1)
    hv = density(fine)
    step = fine[1] - fine[0]
    # composite Simpson on consecutive pairs of intervals
    seg = step / 3.0 * (hv[0:-2:2] + 4.0 * hv[1:-1:2] + hv[2::2])
    d_knots = np.concatenate([[0.0], np.cumsum(seg)])
    s_knots = fine[::2]
    distance = PchipInterpolator(s_knots, d_knots)
    inverse = PchipInterpolator(d_knots, s_knots)
    return RotMetric(
        density=density,
        distance=distance,
        inverse_distance=inverse,
        domain_radius=s_max,
        rho_max=float(d_knots[-1]),
        density_prime=density.derivative(),
        bound=bound,
        label=label,
    )


def gaussian_curvature(m: RotMetric, s):
    """Gaussian curvature -lap(log h)/h^2 at chart radius s.

    The radial Laplacian of log h is evaluated with a centered 5-point
    stencil, step max(1e-4, 1e-4 s); radii too close to 0 or s_max for the
    stencil raise a domain error.
    """
    s_arr = np.asarray(s, dtype=float)
    step = np.maximum(1e-4, 1e-4 * s_arr)
    if np.any(s_arr - 2 * step <= 0) or np.any(s_arr + 2 * step >= m.domain_radius):
        raise DomainError("chart radius too close to 0 or the chart edge for the stencil")
    offs = np.array([-2.0, -1.0, 1.0, 2.0])
    logh = [np.log(m.density(s_arr + k * step)) for k in offs]
    logh0 = np.log(m.density(s_arr))
    d1 = (logh[0] - 8 * logh[1] + 8 * logh[2] - logh[3]) / (12 * step)
    d2 = (-logh[0] + 16 * logh[1] - 30 * logh0 + 16 * logh[2] - logh[3]) / (12 * step**2)
    out = -(d2 + d1 / s_arr) / m.density(s_arr) ** 2
    return out if out.ndim else float(out)


def infer_bound(m: RotMetric, s_lo: float | None = None, s_hi: float | None = None,
                n: int = 64) -> CurvatureBound:
    """Estimate an upper curvature bound by sampling the FD curvature."""
    if m.bound is not None:
        return m.bound
    hi_edge = m.domain_radius if math.isfinite(m.domain_radius) else 10.0
    lo = s_lo if s_lo is not None else hi_edge * 1e-3
    hi = s_hi if s_hi is not None else hi_edge * (1 - 1e-3)
    ks = gaussian_curvature(m, np.linspace(lo, hi, n))
    sup_k = float(np.max(ks))
    if sup_k > 1e-8:
        return CurvatureBound.positive(math.sqrt(sup_k * (1 + 1e-6)))
    if sup_k < -1e-8:
        return CurvatureBound.negative(math.sqrt(-sup_k / (1 + 1e-6)))
    return CurvatureBound.zero()


@dataclass(frozen=True)
class GeodesicAnnulus:
    """Geodesic annulus data 0 < rho1 < rho2, with the spherical cap condition.

    For a positive bound the outer radius must satisfy rho2 <= pi/(2 kappa);
    violating data is rejected at construction rather than clamped.
    """

    rho1: float
    rho2: float
    bound: CurvatureBound

    def __post_init__(self):
        if not (0 < self.rho1 < self.rho2):
            raise DomainError("need 0 < rho1 < rho2")
        if self.rho2 > self.bound.cap + 1e-15:
            raise DomainError(
                f"outer radius {self.rho2:.6g} exceeds the admissible cap "
                f"pi/(2 kappa) = {self.bound.cap:.6g}"
            )


def _bound_from_dict(d) -> CurvatureBound:
    return CurvatureBound(d["sign"], d.get("kappa"))


def load_metric(source) -> RotMetric:
    """Load a metric description (path, JSON text, or dict).

    Recognised forms::

        {"kind": "constant", "sign": "negative|zero|positive", "kappa": x}
        {"kind": "profile", "samples": [[s, h], ...]}
        {"kind": "weierstrass", "surface": "<catalog name>"}
    """
    if isinstance(source, dict):
        spec = source
    else:
        text = None
        try:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        except (OSError, TypeError):
            text = source
        try:
            spec = json.loads(text)
        except (json.JSONDecodeError, TypeError) as exc:
            raise DomainError(f"unreadable metric description: {exc}") from exc
    kind = spec.get("kind")
    if kind == "constant":
        return constant_curvature_metric(_bound_from_dict(spec))
    if kind == "profile":
        return metric_from_profile(spec["samples"], label="profile")
    if kind == "weierstrass":
        from .weierstrass import surface_metric, catalog_surface

        return surface_metric(catalog_surface(spec["surface"]))
    raise DomainError(f"unknown metric kind {kind!r}")
