"""Grid maps: residuals, solver, Hopf differential, Laplacian bound, Green chain."""

import math

import numpy as np
import pytest

from nitsche_lab import (
    AnnulusGrid,
    AnnulusMap,
    CurvatureBound,
    DomainError,
    catalog_surface,
    constant_curvature_metric,
    embed_radial_profile,
    green_chain,
    hopf_dbar_norm,
    hopf_differential,
    laplacian_bound_check,
    residual_norm,
    shoot,
    solve_dirichlet,
    surface_metric,
)
from nitsche_lab.pde import _system_residual

FLAT = constant_curvature_metric(CurvatureBound.zero())
HYP = constant_curvature_metric(CurvatureBound.negative(1.0))
SPH = constant_curvature_metric(CurvatureBound.positive(1.0))


def _critical_flat_map(n_r, n_theta, r1=0.5, r2=1.0):
    prof = shoot(FLAT, 0.8, 0.0, math.log(r2 / r1), richardson=False)
    return embed_radial_profile(AnnulusGrid(r1, r2, n_r, n_theta), prof)


def test_grid_validation():
    with pytest.raises(DomainError):
        AnnulusGrid(1.0, 0.5, 64, 64)
    with pytest.raises(DomainError):
        AnnulusGrid(0.5, 1.0, 8, 64)
    g = AnnulusGrid(0.5, 1.0, 64, 64)
    assert g.modulus == pytest.approx(math.log(2))
    assert g.eps_grid == pytest.approx(10 * g.spacing**2)


def test_identity_conformal_map_residual_refines_at_second_order_or_better():
    # rho(z) = d(|z|), theta = arg z is an isometric (hence harmonic) chart map
    norms = []
    for n in (64, 128, 256):
        grid = AnnulusGrid(0.4, 0.9, n, n)
        T, PHI = grid.mesh()
        rho = np.asarray(HYP.distance(np.exp(T)))
        f = AnnulusMap(grid=grid, rho=rho, theta=PHI.copy(), metric=HYP)
        norms.append(residual_norm(f))
    orders = np.log2(np.array(norms[:-1]) / np.array(norms[1:]))
    assert np.all(orders >= 1.8)


def test_embedded_critical_map_residual_small_on_256_grid():
    f = _critical_flat_map(256, 256)
    assert residual_norm(f) <= 1e-5


def test_perturbed_map_residual_detected():
    f = _critical_flat_map(128, 128)
    rho_p = f.rho + 0.01 * np.sin(f.grid.mesh()[1])
    fp = AnnulusMap(grid=f.grid, rho=rho_p, theta=f.theta.copy(), metric=FLAT)
    assert residual_norm(fp) > 1e-3


def test_radial_embedding_harmonic_for_random_data():
    # radial shots embed to harmonic grid maps for any metric/slope mixture
    rng = np.random.default_rng(42)
    metrics = [FLAT, HYP, SPH, surface_metric(catalog_surface("enneper"))]
    worst = 0.0
    for k in range(30):
        m = metrics[k % 4]
        cap = min(m.rho_max, 1.6)
        rho1 = rng.uniform(0.2, 0.5 * cap)
        slope0 = rng.uniform(0.0, 0.8)
        prof = shoot(m, rho1, slope0, 0.5, n_steps=1024, richardson=False)
        assert not prof.exited
        grid = AnnulusGrid(1.0, math.exp(0.5), 160, 768)
        f = embed_radial_profile(grid, prof)
        worst = max(worst, residual_norm(f))
    assert worst <= 1e-5


def test_solve_recovers_radial_map_flat():
    grid = AnnulusGrid(0.5, 1.0, 128, 64)
    f = solve_dirichlet(grid, FLAT, 0.8, 1.0)
    exact = 0.8 * np.cosh(grid.t - math.log(0.5))
    assert np.max(np.abs(f.rho - exact[:, None])) <= 1e-6
    assert f.info.converged


def test_cold_start_newton_matches_warm_start():
    grid = AnnulusGrid(1.0, math.exp(0.6), 64, 48)
    cold = solve_dirichlet(grid, HYP, 0.5, 1.0, warm_start=False)
    warm = solve_dirichlet(grid, HYP, 0.5, 1.0)
    assert cold.info.iterations >= 2  # the 2-D Newton path really ran
    assert np.max(np.abs(cold.rho - warm.rho)) < 1e-9
    assert np.max(np.abs(cold.theta - warm.theta)) < 1e-9


def test_constant_boundary_circle_map_satisfies_discrete_equation():
    # degenerate data: the whole annulus maps onto one geodesic circle
    grid = AnnulusGrid(0.5, 1.0, 64, 64)
    rho = np.full((64, 64), 0.7)
    theta = grid.mesh()[1].copy()
    F1, F2 = _system_residual(grid, FLAT, rho, theta - grid.mesh()[1])
    assert np.max(np.abs(F1 - (-0.5 * np.asarray(FLAT.dG2(rho[1:-1]))))) < 1e-12  # pure source
    # the angular part is exactly balanced
    assert np.max(np.abs(F2)) < 1e-12
    f = AnnulusMap(grid=grid, rho=rho, theta=theta, metric=FLAT)
    assert f.diagnostics()["degenerate"]


def test_winding_violation_detected():
    grid = AnnulusGrid(0.5, 1.0, 64, 64)
    T, PHI = grid.mesh()
    f = AnnulusMap(grid=grid, rho=np.full_like(T, 0.7) + 0.1 * (T - T.min()),
                   theta=2.0 * PHI, metric=FLAT)
    assert not f.diagnostics()["winding_ok"]


def test_hopf_vanishes_for_conformal_map():
    # the anti-holomorphic derivative factor kills the field; discretely it
    # survives only at stencil-truncation size and dies out under refinement
    vals = []
    for n in (64, 256):
        grid = AnnulusGrid(0.5, 1.0, n, n)
        T, PHI = grid.mesh()
        rho = np.asarray(FLAT.distance(np.exp(T)))
        f = AnnulusMap(grid=grid, rho=rho, theta=PHI.copy(), metric=FLAT)
        vals.append(np.nanmax(np.abs(hopf_differential(f))))
    assert vals[0] < 1e-5
    assert vals[1] < 1e-8


def test_hopf_constant_for_radial_harmonic_map():
    # the Hopf field of a radial harmonic map is (rho_t^2 - G^2)/4 z^-2
    prof = shoot(HYP, 0.6, 0.3, 0.5, richardson=False)
    grid = AnnulusGrid(1.0, math.exp(0.5), 96, 96)
    f = embed_radial_profile(grid, prof)
    P = hopf_differential(f)
    T, PHI = grid.mesh()
    z2 = np.exp(2 * (T + 1j * PHI))
    const = P * z2
    vals = const[~np.isnan(const)]
    expected = 0.25 * (0.3**2 - float(HYP.G(0.6)) ** 2)
    assert np.max(np.abs(vals - expected)) < 1e-6


def test_hopf_dbar_refines_and_detects_nonharmonic():
    norms = []
    for n in (64, 128, 256):
        norms.append(hopf_dbar_norm(_critical_flat_map(n, n)))
    orders = np.log2(np.array(norms[:-1]) / np.array(norms[1:]))
    assert np.all(orders >= 1.8)
    for n in (64, 128, 256):
        f = _critical_flat_map(n, n)
        rho_p = f.rho + 0.01 * np.sin(f.grid.mesh()[1])
        fp = AnnulusMap(grid=f.grid, rho=rho_p, theta=f.theta.copy(), metric=FLAT)
        assert hopf_dbar_norm(fp) > 1e-3


def test_laplacian_margin_zero_for_model_radial_maps():
    # per-node equality on a 256-node radial grid for each model metric
    for m, rho1, T in ((FLAT, 0.8, math.log(2)), (HYP, 0.6, 0.7), (SPH, 0.5, 0.6)):
        prof = shoot(m, rho1, 0.0, T, richardson=False)
        grid = AnnulusGrid(1.0, math.exp(T), 256, 48)
        f = embed_radial_profile(grid, prof)
        margins = laplacian_bound_check(f)
        assert np.nanmax(np.abs(margins)) <= 1e-6


def test_laplacian_margin_nonnegative_for_solved_maps():
    grid = AnnulusGrid(0.5, 1.0, 96, 96)
    f = solve_dirichlet(grid, FLAT, 0.8, 1.0)
    assert np.nanmin(laplacian_bound_check(f)) >= -grid.eps_grid
    enn = surface_metric(catalog_surface("enneper"))
    grid2 = AnnulusGrid(1.0, math.exp(0.5), 96, 96)
    f2 = solve_dirichlet(grid2, enn, 0.4, 0.9)
    assert np.nanmin(laplacian_bound_check(f2, CurvatureBound.zero())) >= -grid2.eps_grid


def test_green_chain_flat_critical_closed_form():
    # flux = 2 pi t-derivative of 0.4 (e^t + e^-t); fine radial grid for 1e-8
    prof = shoot(FLAT, 0.8, 0.0, math.log(2), richardson=False)
    grid = AnnulusGrid(0.5, 1.0, 8193, 32)
    f = embed_radial_profile(grid, prof)
    gc = green_chain(f, 0.75)
    t = math.log(gc.sigma / 0.5)
    assert gc.flux == pytest.approx(2 * math.pi * 0.4 * (math.exp(t) - math.exp(-t)), abs=1e-8)


def test_green_identity_exact_for_any_field():
    rng = np.random.default_rng(9)
    grid = AnnulusGrid(0.5, 1.0, 64, 64)
    T, PHI = grid.mesh()
    rho = 0.8 + 0.2 * (T - T.min()) + 0.01 * np.sin(3 * PHI) * np.sin(T)
    f = AnnulusMap(grid=grid, rho=rho, theta=PHI.copy(), metric=FLAT)
    for sigma in rng.uniform(0.52, 0.98, 5):
        with pytest.warns(UserWarning):
            gc = green_chain(f, sigma)
        assert gc.flux - gc.inner_flux - gc.area == pytest.approx(0.0, abs=1e-10)


def test_green_chain_lower_bound_for_solved_maps():
    grid = AnnulusGrid(1.0, math.exp(0.6), 128, 128)
    f = solve_dirichlet(grid, HYP, 0.5, 1.0)
    import warnings

    for sigma in np.exp(np.linspace(0.05, 0.55, 6)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            gc = green_chain(f, sigma)
        # flux dominates 2 pi psi(rho1) log(sigma/r1) along the annulus
        assert gc.flux >= 2 * math.pi * math.sinh(0.5) * math.log(gc.sigma) - grid.eps_grid


def test_green_chain_domain_errors():
    f = _critical_flat_map(64, 64)
    with pytest.raises(DomainError):
        green_chain(f, 0.2)
