"""Equal-time inner products: the free baseline and the interacting
norm kernels.

A kernel is the pointwise 16x16 matrix K(x) whose sesquilinear form
defines the product of two internal fields on the t = 0 slice. All
implemented kernels have the two-coefficient structure

    K(x) = ident_coef(x) 1_16 + gamma_coef(x) gamma_1^0 gamma_2^0

with real coefficients, hence are Hermitian pointwise. The three
flavors:

  free      K = gamma_1^0 gamma_2^0
  sazdjian  K = (1 - V^2) gamma_1^0 gamma_2^0 + 4 P^2 (dV/dP^2) 1
  crater    K = 1 - 4 P^2 (dDelta/dP^2) gamma_1^0 gamma_2^0

The flavors do not share one conjugation convention: free and sazdjian
are written against psi_bar = psi^dagger gamma_1^0 gamma_2^0, crater
against psi^dagger directly. interacting_inner_product absorbs this so
that the free flavor reproduces free_inner_product exactly, and the
positivity scans act on the resulting quadratic-form matrix (for the
bar flavors that is gamma_1^0 gamma_2^0 K, whose coefficient pair is
the kernel's swapped).

Quadrature is the plain Riemann sum over the periodic grid, spectrally
accurate for smooth periodic integrands; summation uses numpy's
pairwise reduction, which is deterministic for fixed shapes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import FourVector, as_four_vector, minkowski_sq
from .operators import Grid, InternalField
from .potentials import eval_V, eval_dV_dP2, eval_ddelta_dP2
from .spinor_algebra import GammaSet, gamma0_pair, slash1, slash2, trace16_normalized

FLAVORS = ("free", "sazdjian", "crater")

# Flavors whose written bracket multiplies psi_bar rather than psi^dagger.
_BAR_FLAVORS = ("free", "sazdjian")


@dataclass(frozen=True)
class NormKernel:
    flavor: str
    P: FourVector
    grid: Grid
    ident_coef: np.ndarray  # coefficient of 1_16, shape (n, n, n)
    gamma_coef: np.ndarray  # coefficient of gamma_1^0 gamma_2^0
    gammas: GammaSet

    def matrix_at(self, i: int, j: int, k: int) -> np.ndarray:
        """The kernel matrix K at one grid point."""
        return self.ident_coef[i, j, k] * np.eye(16) + self.gamma_coef[
            i, j, k
        ] * gamma0_pair(self.gammas)

    def form_coefficients(self):
        """Coefficient pair (A, B) of the quadratic-form matrix
        A 1 + B gamma_1^0 gamma_2^0, after absorbing the flavor's
        conjugation convention."""
        if self.flavor in _BAR_FLAVORS:
            # psi_bar K psi = psi^dagger (gamma_1^0 gamma_2^0 K) psi and
            # (gamma_1^0 gamma_2^0)^2 = 1, so the coefficients swap.
            return self.gamma_coef, self.ident_coef
        return self.ident_coef, self.gamma_coef

    def form_matrix_at(self, i: int, j: int, k: int) -> np.ndarray:
        A, B = self.form_coefficients()
        return A[i, j, k] * np.eye(16) + B[i, j, k] * gamma0_pair(self.gammas)


def _check_cm_timelike(P):
    P = as_four_vector(P)
    if np.any(P[1:] != 0):
        raise ValueError("kernels are built in the rest frame (spatial P = 0)")
    if minkowski_sq(P) <= 0:
        raise ValueError("total momentum must be timelike")
    return P


def build_kernel(flavor: str, potential, P, grid: Grid, gammas: GammaSet) -> NormKernel:
    """Pointwise norm kernel of the requested flavor on the grid."""
    if flavor not in FLAVORS:
        raise ValueError(f"unknown kernel flavor: {flavor!r}")
    P = _check_cm_timelike(P)
    P_sq = minkowski_sq(P)
    shape = (grid.n,) * 3
    x_perp_sq = -grid.radius_sq
    if flavor == "free":
        ident = np.zeros(shape)
        gamma = np.ones(shape)
    elif flavor == "sazdjian":
        V = np.asarray(eval_V(potential, x_perp_sq, P_sq))
        dV = np.asarray(eval_dV_dP2(potential, x_perp_sq, P_sq))
        ident = 4.0 * P_sq * dV * np.ones(shape)
        gamma = 1.0 - V**2 * np.ones(shape)
    else:
        dD = np.asarray(eval_ddelta_dP2(potential, x_perp_sq, P_sq))
        ident = np.ones(shape)
        gamma = -4.0 * P_sq * dD * np.ones(shape)
    return NormKernel(
        flavor=flavor, P=P, grid=grid, ident_coef=ident, gamma_coef=gamma, gammas=gammas
    )


def _equal_time_profile(fld: InternalField) -> np.ndarray:
    """phi(0, x) = sum of the mode profiles (the relative-energy phases
    are all 1 on the t = 0 slice)."""
    out = np.zeros((16,) + (fld.grid.n,) * 3, dtype=complex)
    for _, chi in fld.modes:
        out += chi
    return out


def _check_same(field_a: InternalField, field_b: InternalField):
    if field_a.grid != field_b.grid:
        raise ValueError("fields live on different grids")
    if not np.allclose(field_a.P, field_b.P, rtol=0.0, atol=1e-12):
        raise ValueError("fields carry different total momenta")


def free_inner_product(field_a: InternalField, field_b: InternalField) -> complex:
    """Baseline product: integral of phi_a^dagger phi_b over the t = 0
    slice, as the Riemann sum times the cell volume."""
    _check_same(field_a, field_b)
    pa = _equal_time_profile(field_a)
    pb = _equal_time_profile(field_b)
    return complex(np.sum(pa.conj() * pb) * field_a.grid.h**3)


def _apply_gamma_pair(gammas: GammaSet, profile: np.ndarray) -> np.ndarray:
    g0 = gammas.gamma[0]
    p4 = profile.reshape(4, 4, *profile.shape[1:])
    out = np.einsum("ac,cbxyz->abxyz", g0, p4)
    out = np.einsum("bc,acxyz->abxyz", g0, out)
    return out.reshape(profile.shape)


def _form_value(kernel: NormKernel, pa: np.ndarray, pb: np.ndarray) -> complex:
    """Quadratic form of the kernel on two raw equal-time profiles."""
    A, B = kernel.form_coefficients()
    transformed = A[None] * pb + B[None] * _apply_gamma_pair(kernel.gammas, pb)
    return complex(np.sum(pa.conj() * transformed) * kernel.grid.h**3)


def interacting_inner_product(
    kernel: NormKernel, field_a: InternalField, field_b: InternalField
) -> complex:
    """Quadratic form of the kernel between two fields at equal time,
    with the flavor's conjugation convention absorbed (free flavor
    reproduces free_inner_product identically)."""
    _check_same(field_a, field_b)
    if field_a.grid != kernel.grid:
        raise ValueError("fields and kernel live on different grids")
    if not np.allclose(field_a.P, kernel.P, rtol=0.0, atol=1e-12):
        raise ValueError(
            "field momentum differs from the kernel's; cross-momentum "
            "products are outside the equal-time kernel's domain"
        )
    return _form_value(kernel, _equal_time_profile(field_a), _equal_time_profile(field_b))


@dataclass(frozen=True)
class TraceCondition:
    value: float
    raw_trace: complex
    satisfied: bool


def trace_condition(potential_as_spin_op, P, gammas: GammaSet) -> TraceCondition:
    """The no-relative-time trace condition on a spin-operator-valued
    potential sample: value = (1/16) Tr[ (n.gamma_1)(n.gamma_2) V ]
    with n = P/sqrt(P^2), reported with the raw 16x16 trace, and the
    comparison value < 1.

    The 1/16 normalization is fixed by the constant benchmark
    V = v gamma_1^0 gamma_2^0, which must evaluate to v.
    """
    P = as_four_vector(P)
    P_sq = minkowski_sq(P)
    if P_sq <= 0:
        raise ValueError("total momentum must be timelike")
    n = P / np.sqrt(P_sq)
    op = slash1(gammas, n) @ slash2(gammas, n) @ np.asarray(potential_as_spin_op)
    raw = complex(np.trace(op))
    value = float(np.real(trace16_normalized(op))) / 4.0
    return TraceCondition(value=value, raw_trace=raw, satisfied=bool(value < 1.0))
