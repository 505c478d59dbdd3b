import math
from dataclasses import replace

import numpy as np
import pytest

from tbdkit.kinematics import MassPair
from tbdkit.operators import (
    Grid,
    InternalField,
    field_from_modes,
    random_band_limited_field,
)
from tbdkit.potentials import (
    Constant,
    FOUR_PI,
    GaussianG,
    TanhOfG,
    YukawaTanh,
    Zero,
    eval_dV_dP2,
    eval_V,
)
from tbdkit.scalar_product import (
    build_kernel,
    free_inner_product,
    interacting_inner_product,
    trace_condition,
)
from tbdkit.spinor_algebra import build_gammas, gamma0_pair

P2 = np.array([2.0, 0.0, 0.0, 0.0])
YUKAWA = YukawaTanh(g1=math.sqrt(FOUR_PI), g2=math.sqrt(FOUR_PI), mu=1.0)


@pytest.fixture(scope="module")
def gam():
    return build_gammas("dirac")


def unit_mode(grid, m, component=0, p0=0.1, P=P2):
    u = np.zeros(16)
    u[component] = 1.0
    return field_from_modes(P, grid, [(p0, [(tuple(m), u)])])


def gaussian_profile_field(grid, width, component, P=P2):
    chi = np.zeros((16,) + (grid.n,) * 3, dtype=complex)
    chi[component] = np.exp(-grid.radius_sq / (2.0 * width**2))
    return InternalField(P=P, grid=grid, modes=((0.0, chi),))


# ---------------------------------------------------------------------------
# Free product


def test_free_product_of_harmonics_is_orthonormal(gam):
    grid = Grid(n=8, L=6.0)
    a = unit_mode(grid, (1, 0, 0))
    b = unit_mode(grid, (0, 2, 0))
    # same harmonic: exactly |u|^2 L^3; distinct harmonics: exactly 0
    assert free_inner_product(a, a) == pytest.approx(grid.L**3, rel=1e-13)
    assert abs(free_inner_product(a, b)) < 1e-12


def test_free_product_gaussian_oracle(gam):
    # analytic integral of a spherical gaussian against the Riemann sum
    grid = Grid(n=32, L=10.5)
    width = 1.0
    fld = gaussian_profile_field(grid, width, component=3)
    expect = (math.pi * width**2) ** 1.5
    assert free_inner_product(fld, fld) == pytest.approx(expect, rel=1e-8)


def test_free_product_is_sesquilinear(gam, rng):
    grid = Grid(n=8, L=6.0)
    a = random_band_limited_field(P2, grid, rng, max_index=1)
    b = random_band_limited_field(P2, grid, rng, max_index=1)
    c = random_band_limited_field(P2, grid, rng, max_index=1)
    lhs = free_inner_product(a, b * (0.3 + 1j) + c * (-2.0))
    rhs = (0.3 + 1j) * free_inner_product(a, b) - 2.0 * free_inner_product(a, c)
    assert lhs == pytest.approx(rhs, abs=1e-10)
    assert free_inner_product(a, b) == pytest.approx(
        np.conj(free_inner_product(b, a)), abs=1e-12
    )


def test_free_product_rejects_mismatched_fields(gam, rng):
    a = random_band_limited_field(P2, Grid(n=8, L=6.0), rng, max_index=1)
    b = random_band_limited_field(P2, Grid(n=8, L=8.0), rng, max_index=1)
    with pytest.raises(ValueError):
        free_inner_product(a, b)
    c = replace(a, P=np.array([2.5, 0.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        free_inner_product(a, c)


# ---------------------------------------------------------------------------
# Kernel construction


def test_free_kernel_coefficients(gam):
    grid = Grid(n=8, L=6.0)
    kernel = build_kernel("free", Zero(), P2, grid, gam)
    assert np.all(kernel.ident_coef == 0.0)
    assert np.all(kernel.gamma_coef == 1.0)
    assert np.allclose(kernel.matrix_at(0, 0, 0), gamma0_pair(gam))
    # the quadratic form of the bar convention is the identity
    assert np.allclose(kernel.form_matrix_at(0, 0, 0), np.eye(16))


def test_sazdjian_kernel_reduces_to_free_for_zero_potential(gam):
    grid = Grid(n=8, L=6.0)
    kernel = build_kernel("sazdjian", Zero(), P2, grid, gam)
    free = build_kernel("free", Zero(), P2, grid, gam)
    assert np.allclose(kernel.ident_coef, free.ident_coef)
    assert np.allclose(kernel.gamma_coef, free.gamma_coef)


def test_sazdjian_kernel_constant_potential(gam):
    grid = Grid(n=8, L=6.0)
    kernel = build_kernel("sazdjian", Constant(v=0.3), P2, grid, gam)
    assert np.allclose(kernel.ident_coef, 0.0)
    assert np.allclose(kernel.gamma_coef, 1.0 - 0.09)


def test_crater_kernel_is_identity_for_momentum_independent_potentials(gam):
    grid = Grid(n=8, L=6.0)
    for pot in (Zero(), Constant(v=0.4), TanhOfG(g=GaussianG(amplitude=0.5, width=1.0))):
        kernel = build_kernel("crater", pot, P2, grid, gam)
        assert np.allclose(kernel.ident_coef, 1.0)
        assert np.allclose(kernel.gamma_coef, 0.0)
        assert np.allclose(kernel.form_matrix_at(1, 2, 3), np.eye(16))


def test_yukawa_kernels_match_potential_evaluations(gam):
    grid = Grid(n=8, L=4.0)
    P = np.array([1.5, 0.0, 0.0, 0.0])
    P_sq = 2.25
    saz = build_kernel("sazdjian", YUKAWA, P, grid, gam)
    cra = build_kernel("crater", YUKAWA, P, grid, gam)
    i, j, k = 2, 5, 1
    xps = -grid.radius_sq[i, j, k]
    V = eval_V(YUKAWA, xps, P_sq)
    dV = eval_dV_dP2(YUKAWA, xps, P_sq)
    assert saz.ident_coef[i, j, k] == pytest.approx(4.0 * P_sq * dV, rel=1e-14)
    assert saz.gamma_coef[i, j, k] == pytest.approx(1.0 - V**2, rel=1e-14)
    assert cra.ident_coef[i, j, k] == 1.0
    # for this potential Delta and V have the same P^2 slope scaled by
    # cosh^2, checked through the closed forms
    assert cra.gamma_coef[i, j, k] == pytest.approx(
        -4.0 * P_sq * dV * math.cosh(math.atanh(V)) ** 2, rel=1e-12
    )


def test_kernel_form_matrix_is_hermitian(gam):
    grid = Grid(n=8, L=4.0)
    for flavor in ("free", "sazdjian", "crater"):
        kernel = build_kernel(flavor, YUKAWA, P2, grid, gam)
        m = kernel.form_matrix_at(3, 4, 5)
        assert np.allclose(m, m.conj().T, atol=1e-14)


def test_build_kernel_validation(gam):
    grid = Grid(n=8, L=4.0)
    with pytest.raises(ValueError):
        build_kernel("euclidean", Zero(), P2, grid, gam)
    with pytest.raises(ValueError):
        build_kernel("free", Zero(), np.array([2.0, 0.3, 0.0, 0.0]), grid, gam)
    with pytest.raises(ValueError):
        build_kernel("free", Zero(), np.array([0.0, 0.0, 0.0, 0.0]), grid, gam)


# ---------------------------------------------------------------------------
# Interacting product


def test_free_flavor_reproduces_free_product(gam):
    grid = Grid(n=8, L=6.0)
    kernel = build_kernel("free", Zero(), P2, grid, gam)
    rng = np.random.default_rng(17)
    for _ in range(20):
        a = random_band_limited_field(P2, grid, rng, max_index=1)
        b = random_band_limited_field(P2, grid, rng, max_index=1)
        lhs = interacting_inner_product(kernel, a, b)
        rhs = free_inner_product(a, b)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_interacting_self_product_is_real(gam, rng):
    grid = Grid(n=8, L=6.0)
    for flavor in ("sazdjian", "crater"):
        kernel = build_kernel(flavor, YUKAWA, P2, grid, gam)
        fld = random_band_limited_field(P2, grid, rng, max_index=1)
        val = interacting_inner_product(kernel, fld, fld)
        assert abs(val.imag) < 1e-10 * abs(val.real)


def test_interacting_product_rejects_foreign_momentum(gam, rng):
    grid = Grid(n=8, L=6.0)
    kernel = build_kernel("sazdjian", YUKAWA, P2, grid, gam)
    other = replace(
        random_band_limited_field(P2, grid, rng, max_index=1),
        P=np.array([2.5, 0.0, 0.0, 0.0]),
    )
    with pytest.raises(ValueError):
        interacting_inner_product(kernel, other, other)


def test_negative_norm_state_inside_violation_ball(gam):
    # a state concentrated well inside the Yukawa violation radius with
    # the gamma_1^0 gamma_2^0 = -1 spinor orientation has negative
    # Sazdjian norm
    grid = Grid(n=32, L=4.0)
    P = np.array([1.0, 0.0, 0.0, 0.0])
    kernel = build_kernel("sazdjian", YUKAWA, P, grid, gam)
    gp = np.real(np.diag(gamma0_pair(gam)))
    component = int(np.argmin(gp))
    assert gp[component] == -1.0
    fld = gaussian_profile_field(grid, width=0.15, component=component, P=P)
    val = interacting_inner_product(kernel, fld, fld)
    assert val.real < -1e-4
    # the same profile on the +1 orientation keeps a positive norm
    plus = gaussian_profile_field(grid, width=0.15, component=int(np.argmax(gp)), P=P)
    assert interacting_inner_product(kernel, plus, plus).real > 0.0


# ---------------------------------------------------------------------------
# Trace condition


def test_trace_condition_constant_benchmark(gam):
    v = 0.3
    report = trace_condition(v * gamma0_pair(gam), P2, gam)
    assert report.value == pytest.approx(v, abs=1e-14)
    assert report.raw_trace == pytest.approx(16.0 * v, abs=1e-12)
    assert report.satisfied


def test_trace_condition_identity_operator_traces_to_zero(gam):
    report = trace_condition(np.eye(16), P2, gam)
    assert report.value == pytest.approx(0.0, abs=1e-14)
    assert report.satisfied


def test_trace_condition_flags_saturation(gam):
    report = trace_condition(1.5 * gamma0_pair(gam), P2, gam)
    assert report.value == pytest.approx(1.5, abs=1e-14)
    assert not report.satisfied


def test_trace_condition_moving_frame(gam):
    # n = P/sqrt(P^2) keeps the benchmark exact in any timelike frame
    P = np.array([2.5, 0.0, 0.9, 0.0])
    report = trace_condition(0.25 * gamma0_pair(gam), P, gam)
    n0 = 2.5 / math.sqrt(2.5**2 - 0.81)
    # slash(n) slash(n) traces pick up the boost factor on gamma^0 pairs
    assert report.satisfied
    assert report.value == pytest.approx(0.25 * n0 * n0, rel=1e-12)


def test_trace_condition_rejects_spacelike_momentum(gam):
    with pytest.raises(ValueError):
        trace_condition(np.eye(16), np.array([0.5, 1.0, 0.0, 0.0]), gam)
