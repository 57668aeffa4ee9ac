"""
Conformal modulus of doubly connected domains
=============================================

For the circular annulus the modulus is log(r2/r1).  For a general discrete
doubly connected region it is computed through the capacity
characterisation: solve the Laplace problem with values 0 and 1 on the two
boundary loops and return 2 pi divided by the Dirichlet energy.  The Laplace
solve uses the 5-point stencil on the log-polar chart (where the energy is
conformally invariant) and conjugate gradients; the energy uses midpoint
quadrature on cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError, MaskError
from .metrics import RotMetric

INTERIOR, INNER, OUTER, OUTSIDE = 0, 1, 2, 3


def modulus_circular(r1: float, r2: float) -> float:
    """log(r2/r1); scale invariant."""
    if not 0 < r1 < r2:
        raise DomainError("need 0 < r1 < r2")
    return math.log(r2 / r1)


@dataclass(frozen=True)
class Circular:
    """A circular annulus r1 < |z| < r2."""

    r1: float
    r2: float

    def __post_init__(self):
        if not 0 < self.r1 < self.r2:
            raise DomainError("need 0 < r1 < r2")


@dataclass(frozen=True)
class MaskedPolarDomain:
    """A doubly connected node set on a log-polar grid.

    ``roles`` has one entry per node: interior, inner boundary (potential 0),
    outer boundary (potential 1), or outside.
    """

    t: np.ndarray
    n_theta: int
    roles: np.ndarray

    def __post_init__(self):
        if self.roles.shape != (len(self.t), self.n_theta):
            raise MaskError("roles array must be (n_t, n_theta)")
        inner = self.roles == INNER
        outer = self.roles == OUTER
        if not inner.any() or not outer.any():
            raise MaskError("need two nonempty boundary loops")
        # loops must not touch: no inner node radially adjacent to an outer node
        touch = inner[:-1] & outer[1:] | outer[:-1] & inner[1:]
        if touch.any():
            raise MaskError("boundary loops touch; the domain is degenerate")

    @property
    def h_t(self) -> float:
        return float(self.t[1] - self.t[0])

    @property
    def h_phi(self) -> float:
        return 2 * math.pi / self.n_theta

    def inverted(self) -> "MaskedPolarDomain":
        """Image under z -> c/z (radii reflected, boundary roles swapped)."""
        roles = self.roles[::-1].copy()
        swap = roles.copy()
        swap[roles == INNER] = OUTER
        swap[roles == OUTER] = INNER
        return MaskedPolarDomain(t=(-self.t[::-1]).copy(), n_theta=self.n_theta, roles=swap)


DoublyConnectedDomain = Circular | MaskedPolarDomain


def masked_from_circular(r1: float, r2: float, n: int) -> MaskedPolarDomain:
    """Exact polar mask of a circular annulus on an n x n grid."""
    if n < 16:
        raise DomainError("need n >= 16")
    t = np.linspace(math.log(r1), math.log(r2), n)
    roles = np.full((n, n), INTERIOR, dtype=np.int8)
    roles[0] = INNER
    roles[-1] = OUTER
    return MaskedPolarDomain(t=t, n_theta=n, roles=roles)


def masked_geodesic_annulus(m: RotMetric, rho1: float, rho2: float,
                            n: int) -> MaskedPolarDomain:
    """Mask of the level-set region rho1 < d(0, z) < rho2 on a chart grid.

    The polar window extends a few cells beyond the level circles; boundary
    nodes are the grid circles nearest to each level crossing, so the
    snapping error per boundary is at most half a cell.
    """
    if not 0 < rho1 < rho2 < m.rho_max:
        raise DomainError("need 0 < rho1 < rho2 inside the metric's distance range")
    if n < 16:
        raise DomainError("need n >= 16")
    s1 = float(m.inverse_distance(rho1))
    s2 = float(m.inverse_distance(rho2))
    t_lo, t_hi = math.log(s1), math.log(s2)
    # incommensurate pads so the level circles genuinely fall between nodes
    cell = (t_hi - t_lo) / (n - 8)
    hi = t_hi + 2.718 * cell
    if math.isfinite(m.domain_radius):
        hi = min(hi, math.log(m.domain_radius * (1 - 1e-9)))
    t = np.linspace(t_lo - 3.414 * cell, hi, n)
    dist = np.asarray(m.distance(np.exp(t)), dtype=float)
    i_in = int(np.argmin(np.abs(dist - rho1)))
    i_out = int(np.argmin(np.abs(dist - rho2)))
    if i_out - i_in < 4:
        raise MaskError("level circles resolve to fewer than 4 cells apart")
    roles = np.full((n, n), OUTSIDE, dtype=np.int8)
    roles[i_in] = INNER
    roles[i_out] = OUTER
    roles[i_in + 1 : i_out] = INTERIOR
    return MaskedPolarDomain(t=t, n_theta=n, roles=roles)


def _laplace_solve(d: MaskedPolarDomain) -> np.ndarray:
    """5-point Laplace solve on the mask; returns the full potential field (NaN outside)."""
    nT, nP = d.roles.shape
    ht2, hp2 = d.h_t**2, d.h_phi**2
    unknown = d.roles == INTERIOR
    index = -np.ones((nT, nP), dtype=np.int64)
    index[unknown] = np.arange(unknown.sum())
    N = int(unknown.sum())
    if N == 0:
        raise MaskError("mask has no interior nodes")

    ii, jj = np.nonzero(unknown)
    rows, cols, vals = [], [], []
    b = np.zeros(N)
    center = index[ii, jj]
    rows.append(center)
    cols.append(center)
    vals.append(np.full(N, 2 / ht2 + 2 / hp2))
    values = np.where(d.roles == OUTER, 1.0, 0.0)
    for di, dj, w in ((1, 0, 1 / ht2), (-1, 0, 1 / ht2), (0, 1, 1 / hp2), (0, -1, 1 / hp2)):
        ni = ii + di
        nj = (jj + dj) % nP
        ok = (ni >= 0) & (ni < nT)
        roles_n = np.full(len(ii), OUTSIDE, dtype=np.int8)
        roles_n[ok] = d.roles[ni[ok], nj[ok]]
        if np.any(roles_n == OUTSIDE):
            raise MaskError("an interior node touches the outside; mask is not closed")
        is_unknown = roles_n == INTERIOR
        rows.append(center[is_unknown])
        cols.append(index[ni[is_unknown], nj[is_unknown]])
        vals.append(np.full(int(is_unknown.sum()), -w))
        is_bdry = ~is_unknown
        np.add.at(b, center[is_bdry], w * values[ni[is_bdry], nj[is_bdry]])

    A = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(N, N),
    ).tocsr()
    x0 = np.zeros(N)
    try:
        x, info = spla.cg(A, b, x0=x0, rtol=1e-10, atol=0.0, maxiter=40 * max(nT, nP))
    except TypeError:  # older scipy spelling
        x, info = spla.cg(A, b, x0=x0, tol=1e-10, atol=0.0, maxiter=40 * max(nT, nP))
    if info != 0:
        raise DomainError(f"capacity CG did not converge (info={info})")
    u = np.full((nT, nP), np.nan)
    u[unknown] = x
    u[d.roles == INNER] = 0.0
    u[d.roles == OUTER] = 1.0
    return u


def _cell_energy(u: np.ndarray, h_t: float, h_phi: float) -> float:
    """Midpoint-quadrature Dirichlet energy over cells with four finite corners."""
    c00, c10 = u[:-1], u[1:]
    c01, c11 = np.roll(u, -1, axis=1)[:-1], np.roll(u, -1, axis=1)[1:]
    du_dt = 0.5 * ((c10 - c00) + (c11 - c01)) / h_t
    du_dp = 0.5 * ((c01 - c00) + (c11 - c10)) / h_phi
    dens = du_dt**2 + du_dp**2
    ok = np.isfinite(dens)
    return float(dens[ok].sum() * h_t * h_phi)


def modulus_capacity(d: DoublyConnectedDomain, n: int = 256) -> float:
    """Capacity modulus 2 pi / DirichletEnergy(u) of a doubly connected domain."""
    if isinstance(d, Circular):
        d = masked_from_circular(d.r1, d.r2, n)
    u = _laplace_solve(d)
    energy = _cell_energy(u, d.h_t, d.h_phi)
    if energy <= 0:
        raise DomainError("degenerate capacity problem (zero Dirichlet energy)")
    return 2 * math.pi / energy


def angular_energy(f) -> float:
    """Dirichlet integral of the target angle over the annulus.

    Midpoint quadrature on cells in the log chart.  Exactly 2 pi log(r2/r1)
    for theta = arg z; for any winding-one lift the discrete value is bounded
    below by 2 pi log(r2/r1) (Cauchy-Schwarz applied per cell row).
    """
    g = f.grid
    th = f.theta
    c00, c10 = th[:-1], th[1:]
    c01 = np.roll(th, -1, axis=1)[:-1] + np.where(
        np.arange(g.n_theta) == g.n_theta - 1, 2 * np.pi, 0.0
    )
    c11 = np.roll(th, -1, axis=1)[1:] + np.where(
        np.arange(g.n_theta) == g.n_theta - 1, 2 * np.pi, 0.0
    )
    dt = 0.5 * ((c10 - c00) + (c11 - c01)) / g.h_t
    dp = 0.5 * ((c01 - c00) + (c11 - c10)) / g.h_phi
    return float(((dt**2 + dp**2) * g.h_t * g.h_phi).sum())
