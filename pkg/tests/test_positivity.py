import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lambertw

from tbdkit.operators import Grid
from tbdkit.positivity import (
    PositivityReport,
    empirical_boundary_consistent,
    flavor_boundary_radius,
    h_function,
    h_function_closed,
    min_eigenvalue_map,
    scalar_bound_check,
    scan,
    violation_radius,
)
from tbdkit.potentials import (
    FOUR_PI,
    GaussianG,
    TanhOfG,
    YukawaTanh,
    eval_V,
    y_of,
)
from tbdkit.spinor_algebra import build_gammas

G_UNIT = math.sqrt(FOUR_PI)
YUKAWA = YukawaTanh(g1=G_UNIT, g2=G_UNIT, mu=1.0)
OMEGA = 0.5671432904097838  # root of r e^r = 1


@pytest.fixture(scope="module")
def gam():
    return build_gammas("dirac")


# ---------------------------------------------------------------------------
# The h branches


def test_h_minus_vanishes_at_half():
    assert h_function(0.5, "minus") == pytest.approx(0.0, abs=1e-15)
    assert h_function_closed(0.5, "minus") == 0.0


def test_h_minus_negative_beyond_half():
    for y in (0.5001, 0.6, 1.0, 3.0, 8.0):
        assert h_function(y, "minus") < 0.0


def test_h_plus_positive():
    for y in np.linspace(0.0, 8.0, 50):
        assert h_function(y, "plus") > 0.0


def test_h_direct_and_closed_forms_agree():
    for y in np.linspace(0.0, 10.0, 500):
        assert h_function(y, "minus") == pytest.approx(
            h_function_closed(y, "minus"), abs=1e-14
        )
        assert h_function(y, "plus") == pytest.approx(
            h_function_closed(y, "plus"), abs=1e-14
        )


def test_h_rejects_unknown_branch():
    with pytest.raises(ValueError):
        h_function(0.5, "zero")


# ---------------------------------------------------------------------------
# Violation radius


def test_violation_radius_omega_constant():
    # unit coupling, unit screening, unit energy: the radius is the
    # root of r e^r = 1
    assert violation_radius(G_UNIT, G_UNIT, 1.0, 1.0) == pytest.approx(
        OMEGA, abs=1e-9
    )


def test_violation_radius_against_lambert_w(rng):
    for _ in range(30):
        g1, g2 = rng.uniform(0.5, 6.0, 2)
        mu = rng.uniform(0.1, 3.0)
        P0 = rng.uniform(0.3, 4.0)
        rhs = g1 * g2 / (FOUR_PI * abs(P0))
        expect = float(lambertw(mu * rhs).real) / mu
        assert violation_radius(g1, g2, mu, P0) == pytest.approx(expect, abs=1e-10)


def test_violation_radius_solves_its_equation(rng):
    for _ in range(20):
        g1, g2 = rng.uniform(0.5, 6.0, 2)
        mu = rng.uniform(0.1, 3.0)
        P0 = rng.uniform(0.3, 4.0)
        r = violation_radius(g1, g2, mu, P0)
        assert r * math.exp(mu * r) == pytest.approx(
            g1 * g2 / (FOUR_PI * abs(P0)), rel=1e-10
        )
        # the boundary radius is exactly the y = 1/2 locus
        assert y_of(g1, g2, mu, P0, r).y == pytest.approx(0.5, rel=1e-10)


def test_violation_radius_unscreened_limit():
    # mu = 0 collapses the equation to r = g1 g2 / (4 pi |P0|)
    assert violation_radius(2.0, 3.0, 0.0, 1.5) == pytest.approx(
        6.0 / (FOUR_PI * 1.5), rel=1e-14
    )


def test_violation_radius_repulsive_coupling_has_no_region():
    assert violation_radius(1.0, -2.0, 1.0, 1.0) == 0.0
    assert violation_radius(0.0, 2.0, 1.0, 1.0) == 0.0


def test_violation_radius_validation():
    with pytest.raises(ValueError):
        violation_radius(1.0, 1.0, -0.5, 1.0)
    with pytest.raises(ValueError):
        violation_radius(1.0, 1.0, 1.0, 0.0)


@settings(max_examples=30, deadline=None)
@given(
    scale=st.floats(min_value=1.1, max_value=3.0),
    P0=st.floats(min_value=0.5, max_value=3.0),
)
def test_violation_radius_monotone_in_coupling_and_energy(scale, P0):
    base = violation_radius(G_UNIT, G_UNIT, 1.0, P0)
    stronger = violation_radius(scale * G_UNIT, G_UNIT, 1.0, P0)
    faster = violation_radius(G_UNIT, G_UNIT, 1.0, scale * P0)
    assert stronger > base
    assert faster < base


# ---------------------------------------------------------------------------
# Flavor boundaries found without the closed form


def test_flavor_boundaries_coincide_with_analytic_radius():
    for g1, g2, mu, P0 in (
        (G_UNIT, G_UNIT, 1.0, 1.0),
        (2.0, 3.0, 0.7, 1.3),
        (4.0, 1.5, 2.0, 0.6),
    ):
        r_star = violation_radius(g1, g2, mu, P0)
        r_saz = flavor_boundary_radius("sazdjian", g1, g2, mu, P0)
        r_cra = flavor_boundary_radius("crater", g1, g2, mu, P0)
        assert abs(r_saz - r_cra) < 1e-9
        assert abs(r_saz - r_star) < 1e-9


def test_flavor_boundary_rejects_unknown_flavor():
    with pytest.raises(ValueError):
        flavor_boundary_radius("free", G_UNIT, G_UNIT, 1.0, 1.0)


# ---------------------------------------------------------------------------
# Grid scans


def test_scan_certifies_bounded_tanh_potential(gam):
    pot = TanhOfG(g=GaussianG(amplitude=0.9, width=1.0))
    rep = scan("sazdjian", pot, [4.0, 6.25, 9.0], Grid(n=8, L=6.0), gam)
    assert rep.passed
    assert rep.min_eigenvalue >= -1e-12
    assert rep.violation_count == 0
    assert rep.analytic_radius is None
    assert rep.P2_values == (4.0, 6.25, 9.0)


def test_scan_finds_yukawa_violation_ball(gam):
    grid = Grid(n=16, L=4.0)
    rep = scan("sazdjian", YUKAWA, [1.0], grid, gam)
    assert not rep.passed
    assert rep.min_eigenvalue < -0.1
    assert rep.violation_count > 0
    assert rep.analytic_radius == pytest.approx(OMEGA, abs=1e-9)
    # every violating point sits inside the ball (step tolerance one cell)
    cell = math.sqrt(3.0) * grid.h
    radius = np.sqrt(grid.radius_sq)
    for i, j, k, P2 in rep.violation_points:
        assert radius[i, j, k] < rep.analytic_radius + cell
    assert empirical_boundary_consistent(rep, grid)


def test_scan_min_matches_eigenvalue_map(gam):
    grid = Grid(n=16, L=4.0)
    rep = scan("sazdjian", YUKAWA, [1.0], grid, gam)
    emap = min_eigenvalue_map("sazdjian", YUKAWA, 1.0, grid, gam)
    assert rep.min_eigenvalue == pytest.approx(float(np.min(emap)), abs=1e-15)
    assert emap[rep.argmin_index] == rep.min_eigenvalue
    radius = np.sqrt(grid.radius_sq)
    assert rep.argmin_radius == pytest.approx(float(radius[rep.argmin_index]))


def test_eigenvalue_map_agrees_with_h_branch(gam):
    # the dense 16x16 eigensolve lands exactly on the analytic minus
    # branch at every sampled point
    grid = Grid(n=8, L=4.0)
    emap = min_eigenvalue_map("sazdjian", YUKAWA, 1.0, grid, gam)
    radius = np.sqrt(grid.radius_sq)
    for idx in ((0, 0, 0), (3, 4, 5), (4, 4, 4), (7, 1, 2)):
        y = y_of(G_UNIT, G_UNIT, 1.0, 1.0, float(radius[idx])).y
        assert emap[idx] == pytest.approx(h_function(y, "minus"), abs=1e-12)


def test_crater_scan_finds_the_same_ball(gam):
    grid = Grid(n=16, L=4.0)
    rep = scan("crater", YUKAWA, [1.0], grid, gam)
    assert not rep.passed
    assert empirical_boundary_consistent(rep, grid)


def test_scan_rejects_empty_P2_set(gam):
    with pytest.raises(ValueError):
        scan("sazdjian", YUKAWA, [], Grid(n=8, L=4.0), gam)


def test_boundary_consistency_rejects_fabricated_report(gam):
    grid = Grid(n=16, L=4.0)
    rep = scan("sazdjian", YUKAWA, [1.0], grid, gam)
    from dataclasses import replace

    shifted = replace(rep, violation_radius_max=rep.analytic_radius + 1.0)
    assert not empirical_boundary_consistent(shifted, grid)


# ---------------------------------------------------------------------------
# Scalar bound sweep


def test_scalar_bound_check_on_callables():
    assert scalar_bound_check(lambda r: 0.9 * math.exp(-r))
    assert scalar_bound_check(lambda r: 0.9 * math.exp(-r), strict=True)
    # touching 1 passes the loose check, fails the strict one
    assert scalar_bound_check(lambda r: 1.0)
    assert not scalar_bound_check(lambda r: 1.0, strict=True)
    assert not scalar_bound_check(lambda r: 1.2 * math.exp(-(r**2)))


def test_scalar_bound_check_on_potential_specs():
    assert scalar_bound_check(TanhOfG(g=GaussianG(amplitude=3.0, width=1.0)), strict=True)
    # a weak Yukawa stays strictly inside the unit ball even at the
    # innermost sample; the unit-coupling core saturates tanh to 1.0 in
    # double precision, so only the loose bound survives there
    weak = YukawaTanh(g1=1.0, g2=1.0, mu=1.0)
    assert scalar_bound_check(weak, strict=True)
    assert scalar_bound_check(YUKAWA)
    assert not scalar_bound_check(YUKAWA, strict=True)


def test_scalar_bound_check_matches_direct_supremum():
    weak = YukawaTanh(g1=1.0, g2=1.0, mu=1.0)
    rs = np.linspace(20.0 / 2000, 20.0, 2000)
    sup = max(abs(eval_V(weak, -(r**2), 4.0)) for r in rs)
    assert sup < 1.0
    assert scalar_bound_check(weak, strict=True)
