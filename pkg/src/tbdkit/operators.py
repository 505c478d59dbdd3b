"""The coupled first-order operators of the two-body system and their
compatibility identity, on internal fields at fixed total momentum.

State representation. A wave function at total momentum eigenvalue P is
psi = phi(x) e^{-i P.X} with phi an internal field of the relative
coordinate. Because the potential is x^0-independent in the rest frame,
phi is carried as a finite list of relative-energy modes,

    phi(x) = sum_m e^{-i p0_m x^0} chi_m(bold x),

each chi_m a C^16-valued field on a periodic spatial grid. Time
derivatives then act analytically on the mode labels and only the three
spatial derivatives are spectral. The grid is offset by half a cell so
the origin (where the Yukawa core blows up) is never sampled; n must be
even or the offset pattern would put a point at r = 0.

Operators. With K_i = gamma_i . p_i (kinetic contractions) and V acting
first as pointwise multiplication,

    D_1 = K_1 - m_1 - (-K_2 + m_2) V
    D_2 = K_2 + m_2 + ( K_1 + m_1) V

Momenta: p_1 = P/2 + p, p_2 = P/2 - p; on the grid modes e^{+i kappa.x}
the relative spatial momentum operator p^k acts as +kappa^k, so
particle 1 carries +kappa and particle 2 carries -kappa.

Compatibility. The necessary consistency condition for the pair is the
operator identity

    [D_1, D_2] = -[K_1, V] D_1 + [K_2, V] D_2 ,

whose residual on smooth fields is measured by compatibility_residual.
The right-hand commutators can be realized two ways: "composed" applies
the grid operators literally, which reproduces the identity to roundoff
at any resolution (the discrete operators satisfy the same algebra as
the continuum ones); "analytic" substitutes the exact gradient form
[K_1, V] = +i sum_k gamma_1^k (d_k V), [K_2, V] = -i sum_k gamma_2^k
(d_k V), which differs from the composed form by the spectral aliasing
of the product V phi and therefore converges to it at spectral rate
under grid refinement. The analytic realization is the default since it
is the one with a measurable discretization error.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .kinematics import FourVector, MassPair, as_four_vector, minkowski_sq
from .potentials import Constant, Zero, eval_V, eval_dV_dxperp_sq
from .spinor_algebra import GammaSet

__all__ = [
    "AliasingWarning",
    "Grid",
    "InternalField",
    "PlaneWaveState",
    "TwoBodyDiracSystem",
    "apply_D1",
    "apply_D2",
    "compatibility_residual",
    "field_from_modes",
    "random_band_limited_field",
    "general_compatibility_check",
    "plane_wave_solutions",
    "plane_wave_state",
    "state_residuals",
]


class AliasingWarning(UserWarning):
    """A spectral operation was asked to represent modes the grid cannot."""


@dataclass(frozen=True)
class Grid:
    """Periodic spatial grid of n^3 points in a box of side L, offset by
    half a cell: x_j = -L/2 + (j + 1/2) h. The offset keeps r = 0 out of
    the sample set, which the Yukawa core requires."""

    n: int
    L: float

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError("n must be even and >= 2 (odd grids sample the origin)")
        if not self.L > 0:
            raise ValueError("L must be positive")

    @property
    def h(self) -> float:
        return self.L / self.n

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.L / 2 + (np.arange(self.n) + 0.5) * self.h

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h)

    @cached_property
    def coord_mesh(self) -> np.ndarray:
        """Shape (3, n, n, n): spatial coordinates of every grid point."""
        return np.stack(np.meshgrid(self.axis, self.axis, self.axis, indexing="ij"))

    @cached_property
    def wavenumber_mesh(self) -> np.ndarray:
        """Shape (3, n, n, n): kappa vectors of the FFT modes."""
        k = self.wavenumbers
        return np.stack(np.meshgrid(k, k, k, indexing="ij"))

    @cached_property
    def radius_sq(self) -> np.ndarray:
        m = self.coord_mesh
        return m[0] ** 2 + m[1] ** 2 + m[2] ** 2


@dataclass(frozen=True)
class InternalField:
    """Internal field at fixed total momentum: modes is a tuple of
    (p0, chi) with chi of shape (16, n, n, n).

    The field norm treats distinct relative-energy modes as orthogonal
    channels (they are, under time averaging), so ||phi||^2 =
    sum_modes ||chi||^2 h^3.
    """

    P: FourVector
    grid: Grid
    modes: tuple
    frame: str = "cm"

    def __post_init__(self):
        object.__setattr__(self, "P", as_four_vector(self.P))
        n = self.grid.n
        checked = []
        for p0, chi in self.modes:
            chi = np.asarray(chi, dtype=complex)
            if chi.shape != (16, n, n, n):
                raise ValueError(f"mode field must have shape (16, {n}, {n}, {n})")
            checked.append((float(p0), chi))
        object.__setattr__(self, "modes", tuple(checked))

    def norm(self) -> float:
        total = sum(np.sum(np.abs(chi) ** 2) for _, chi in self.modes)
        return float(np.sqrt(total * self.grid.h**3))

    def _zip_modes(self, other):
        if self.grid != other.grid or len(self.modes) != len(other.modes):
            raise ValueError("fields live on different grids or mode sets")
        for (p0a, ca), (p0b, cb) in zip(self.modes, other.modes):
            if p0a != p0b:
                raise ValueError("fields have different relative-energy modes")
            yield p0a, ca, cb

    def __add__(self, other):
        modes = tuple((p0, ca + cb) for p0, ca, cb in self._zip_modes(other))
        return replace(self, modes=modes)

    def __sub__(self, other):
        modes = tuple((p0, ca - cb) for p0, ca, cb in self._zip_modes(other))
        return replace(self, modes=modes)

    def __mul__(self, c):
        return replace(self, modes=tuple((p0, c * chi) for p0, chi in self.modes))

    __rmul__ = __mul__


@dataclass(frozen=True)
class PlaneWaveState:
    """Spinor amplitude with the two particle momenta. solves records
    which of the two equations the state was constructed to satisfy
    ("both", "first" or "none")."""

    u: np.ndarray
    p1: FourVector
    p2: FourVector
    normalized: bool = True
    solves: str = "both"

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex).reshape(16)
        if self.normalized:
            nrm = np.linalg.norm(u)
            if nrm == 0:
                raise ValueError("cannot normalize the zero spinor")
            u = u / nrm
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "p1", as_four_vector(self.p1))
        object.__setattr__(self, "p2", as_four_vector(self.p2))


@dataclass(frozen=True)
class TwoBodyDiracSystem:
    masses: MassPair
    potential: object
    gammas: GammaSet


# ---------------------------------------------------------------------------
# Grid application of the operators


def _mult1(g, chi4):
    # chi4 indexed [a, b, x, y, z]; gamma on the particle-1 index a
    return np.einsum("ac,cbxyz->abxyz", g, chi4)


def _mult2(g, chi4):
    return np.einsum("bc,acxyz->abxyz", g, chi4)


def _spatial_derivatives(grid: Grid, chi4):
    """Relative momentum p^k acting on chi: returns shape (3,4,4,n,n,n)."""
    F = np.fft.fftn(chi4, axes=(-3, -2, -1))
    kap = grid.wavenumber_mesh
    return np.stack(
        [np.fft.ifftn(kap[k] * F, axes=(-3, -2, -1)) for k in range(3)]
    )


def _check_cm(field: InternalField):
    P = field.P
    if field.frame != "cm":
        raise ValueError("grid operators are implemented in the rest frame only")
    if np.any(P[1:] != 0):
        raise ValueError("rest frame requires vanishing spatial total momentum")
    if minkowski_sq(P) <= 0:
        raise ValueError("total momentum must be timelike")


def _potential_on_grid(system: TwoBodyDiracSystem, field: InternalField):
    P_sq = minkowski_sq(field.P)
    x_perp_sq = -field.grid.radius_sq
    return np.asarray(eval_V(system.potential, x_perp_sq, P_sq))


def _kinetic(gammas: GammaSet, sign: int, particle: int, p0: float, chi4, derivs):
    """K_i chi for particle i: p_i^0 gamma_i^0 chi - sum_k gamma_i^k (sign kappa_k chi).

    sign is +1 for particle 1 (momentum P/2 + p) and -1 for particle 2.
    """
    mult = _mult1 if particle == 1 else _mult2
    g = gammas.gamma
    out = p0 * mult(g[0], chi4)
    for k in range(3):
        out = out - sign * mult(g[k + 1], derivs[k])
    return out


def _apply_D(system: TwoBodyDiracSystem, fld: InternalField, which: int) -> InternalField:
    _check_cm(fld)
    m1, m2 = system.masses.m1, system.masses.m2
    P0 = fld.P[0]
    V = _potential_on_grid(system, fld)
    out_modes = []
    for p0, chi in fld.modes:
        chi4 = chi.reshape(4, 4, *chi.shape[1:])
        p1_0 = P0 / 2 + p0
        p2_0 = P0 / 2 - p0
        Vchi = V[None, None] * chi4
        d_chi = _spatial_derivatives(fld.grid, chi4)
        d_Vchi = _spatial_derivatives(fld.grid, Vchi)
        if which == 1:
            out = (
                _kinetic(system.gammas, +1, 1, p1_0, chi4, d_chi)
                - m1 * chi4
                + _kinetic(system.gammas, -1, 2, p2_0, Vchi, d_Vchi)
                - m2 * Vchi
            )
        else:
            out = (
                _kinetic(system.gammas, -1, 2, p2_0, chi4, d_chi)
                + m2 * chi4
                + _kinetic(system.gammas, +1, 1, p1_0, Vchi, d_Vchi)
                + m1 * Vchi
            )
        out_modes.append((p0, out.reshape(16, *chi.shape[1:])))
    return replace(fld, modes=tuple(out_modes))


def apply_D1(system: TwoBodyDiracSystem, fld: InternalField) -> InternalField:
    """D_1 = gamma_1.p_1 - m_1 - (-gamma_2.p_2 + m_2) V, potential first."""
    return _apply_D(system, fld, 1)


def apply_D2(system: TwoBodyDiracSystem, fld: InternalField) -> InternalField:
    """D_2 = gamma_2.p_2 + m_2 + (gamma_1.p_1 + m_1) V, potential first."""
    return _apply_D(system, fld, 2)


# ---------------------------------------------------------------------------
# Field constructors


def field_from_modes(P, grid: Grid, mode_spec, frame: str = "cm") -> InternalField:
    """Build an internal field from integer wavevector data.

    mode_spec: list of (p0, waves); each wave is (m, amp) with m three
    integers indexing the Fourier mode e^{+i 2 pi m.x / L} and amp a
    16-component amplitude. Indices outside the representable range
    [-n/2, n/2) alias onto other modes; that is reported as an
    AliasingWarning, not an error, because convergence studies evaluate
    one spec on several grids on purpose.
    """
    n = grid.n
    mesh = grid.coord_mesh
    modes = []
    for p0, waves in mode_spec:
        chi = np.zeros((16, n, n, n), dtype=complex)
        for m, amp in waves:
            m = np.asarray(m, dtype=int)
            if np.any(m < -n // 2) or np.any(m >= n // 2):
                warnings.warn(
                    f"wavevector index {tuple(m)} outside the grid's "
                    f"representable range [{-n // 2}, {n // 2}); it will alias",
                    AliasingWarning,
                    stacklevel=2,
                )
            phase = np.exp(
                2j
                * np.pi
                / grid.L
                * (m[0] * mesh[0] + m[1] * mesh[1] + m[2] * mesh[2])
            )
            chi += np.asarray(amp, dtype=complex).reshape(16, 1, 1, 1) * phase
        modes.append((p0, chi))
    return InternalField(P=as_four_vector(P), grid=grid, modes=tuple(modes), frame=frame)


def random_band_limited_field(
    P,
    grid: Grid,
    rng: np.random.Generator,
    p0_values=(0.17, -0.4, 0.33),
    waves_per_mode: int = 6,
    max_index: int = 2,
) -> InternalField:
    """Random smooth test field: a few relative-energy modes, each a
    superposition of low-wavevector plane waves with gaussian complex
    amplitudes."""
    spec = []
    for p0 in p0_values:
        waves = []
        for _ in range(waves_per_mode):
            m = rng.integers(-max_index, max_index + 1, size=3)
            amp = rng.standard_normal(16) + 1j * rng.standard_normal(16)
            waves.append((m, amp))
        spec.append((p0, waves))
    return field_from_modes(P, grid, spec)


# ---------------------------------------------------------------------------
# Compatibility identity


def _band_limit_guard(fld: InternalField, threshold: float = 1e-10):
    """Warn if the field carries noticeable weight in the top third of
    the spectrum; the residual measurement presumes smoothness."""
    n = fld.grid.n
    idx = np.abs(np.fft.fftfreq(n, d=1.0 / n))  # integer mode magnitudes
    shell = idx > n / 3.0
    mask = shell[:, None, None] | shell[None, :, None] | shell[None, None, :]
    for _, chi in fld.modes:
        F = np.fft.fftn(chi, axes=(-3, -2, -1))
        power = np.sum(np.abs(F) ** 2)
        if power == 0:
            continue
        frac = np.sum(np.abs(F[:, mask]) ** 2) / power
        if frac > threshold:
            warnings.warn(
                f"field has fraction {frac:.2e} of spectral weight in the "
                "top third of the band; residual will be aliasing-dominated",
                AliasingWarning,
                stacklevel=3,
            )


def _gradient_commutator(system, fld: InternalField, psi: InternalField, particle: int):
    """[K_i, V] psi realized from the analytic potential gradient:
    +i gamma_1^k (d_k V) psi for particle 1, -i gamma_2^k (d_k V) psi
    for particle 2."""
    grid = fld.grid
    P_sq = minkowski_sq(fld.P)
    dV = np.asarray(eval_dV_dxperp_sq(system.potential, -grid.radius_sq, P_sq))
    gradV = dV[None] * (-2.0 * grid.coord_mesh)  # d_k V = dV/dxperp^2 * (-2 x^k)
    sign = 1j if particle == 1 else -1j
    mult = _mult1 if particle == 1 else _mult2
    g = system.gammas.gamma
    out_modes = []
    for p0, chi in psi.modes:
        chi4 = chi.reshape(4, 4, *chi.shape[1:])
        acc = np.zeros_like(chi4)
        for k in range(3):
            acc += mult(g[k + 1], gradV[k][None, None] * chi4)
        out_modes.append((p0, (sign * acc).reshape(chi.shape)))
    return replace(psi, modes=tuple(out_modes))


def _composed_commutator(system, fld, psi, particle: int):
    """[K_i, V] psi from composed grid operators: K_i(V psi) - V K_i(psi)."""
    grid = fld.grid
    V = _potential_on_grid(system, fld)
    P0 = fld.P[0]
    sign = +1 if particle == 1 else -1
    out_modes = []
    for p0, chi in psi.modes:
        chi4 = chi.reshape(4, 4, *chi.shape[1:])
        pi_0 = P0 / 2 + p0 if particle == 1 else P0 / 2 - p0
        Vchi = V[None, None] * chi4
        K_Vchi = _kinetic(system.gammas, sign, particle, pi_0, Vchi, _spatial_derivatives(grid, Vchi))
        K_chi = _kinetic(system.gammas, sign, particle, pi_0, chi4, _spatial_derivatives(grid, chi4))
        out = K_Vchi - V[None, None] * K_chi
        out_modes.append((p0, out.reshape(chi.shape)))
    return replace(psi, modes=tuple(out_modes))


def compatibility_residual(
    system: TwoBodyDiracSystem,
    fld: InternalField,
    commutator_realization: str = "analytic",
) -> float:
    """Relative residual of [D_1, D_2] phi = -[K_1, V] D_1 phi + [K_2, V] D_2 phi.

    With commutator_realization="composed" the right-hand side uses the
    same grid operators as the left and the identity holds to roundoff
    by construction. With "analytic" (default) the commutators come from
    the exact potential gradient, so the residual is the discretization
    error of the product spectra and decays at spectral rate on smooth
    band-limited fields.
    """
    if commutator_realization not in ("analytic", "composed"):
        raise ValueError(f"unknown commutator realization: {commutator_realization!r}")
    _check_cm(fld)
    _band_limit_guard(fld)
    d1 = apply_D1(system, fld)
    d2 = apply_D2(system, fld)
    lhs = apply_D1(system, d2) - apply_D2(system, d1)
    if commutator_realization == "analytic":
        c1 = _gradient_commutator(system, fld, d1, 1)
        c2 = _gradient_commutator(system, fld, d2, 2)
    else:
        c1 = _composed_commutator(system, fld, d1, 1)
        c2 = _composed_commutator(system, fld, d2, 2)
    rhs = (-1.0) * c1 + c2
    return (lhs - rhs).norm() / fld.norm()


# ---------------------------------------------------------------------------
# General compatibility condition P.dV/dx = 0


def _value_at(potential, x, P):
    # Test hook: a spec exposing eval_at(x, P) is evaluated directly,
    # which lets deliberately incompatible potentials into the check.
    if hasattr(potential, "eval_at"):
        return float(potential.eval_at(x, P))
    from .kinematics import x_perp

    return float(eval_V(potential, minkowski_sq(x_perp(x, P)), minkowski_sq(P)))


def general_compatibility_check(
    potential,
    n_samples: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
    step: float = 1e-5,
) -> bool:
    """Check numerically that the potential satisfies P^mu d_mu V = 0.

    Samples random configurations and timelike momenta, and takes a
    central-difference directional derivative of the potential value
    along P. For anything that depends on x only through x_perp the
    derivative vanishes by the chain rule (x_perp.P = 0); a potential
    smuggling in x.P dependence fails.
    """
    rng = np.random.default_rng(seed)
    for _ in range(n_samples):
        x = rng.standard_normal(4)
        P = np.zeros(4)
        P[0] = rng.uniform(2.0, 4.0)
        P[1:] = rng.uniform(-0.4, 0.4, size=3) * P[0]
        d = (_value_at(potential, x + step * P, P) - _value_at(potential, x - step * P, P)) / (
            2.0 * step
        )
        if abs(d) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Plane-wave solutions for constant potentials


def _dispersion_matrix(system, P, p_spatial, p0, equations):
    from .spinor_algebra import slash1, slash2

    if isinstance(system.potential, Zero):
        v = 0.0
    elif isinstance(system.potential, Constant):
        v = system.potential.v
    else:
        raise TypeError("plane-wave dispersion requires a Zero or Constant potential")
    if not abs(v) < 1:
        raise ValueError("constant potential must satisfy |v| < 1")
    P = as_four_vector(P)
    p = np.array([p0, *p_spatial])
    p1 = P / 2 + p
    p2 = P / 2 - p
    m1, m2 = system.masses.m1, system.masses.m2
    S1 = slash1(system.gammas, p1)
    S2 = slash2(system.gammas, p2)
    eye = np.eye(16)
    M1 = S1 - m1 * eye + (S2 - m2 * eye) * v
    if equations == "first":
        return M1
    M2 = S2 + m2 * eye + (S1 + m1 * eye) * v
    return np.vstack([M1, M2])


def _sigma_min(system, P, p_spatial, p0, equations):
    M = _dispersion_matrix(system, P, p_spatial, p0, equations)
    return np.linalg.svd(M, compute_uv=False)[-1]


def plane_wave_solutions(
    system: TwoBodyDiracSystem,
    P,
    p_spatial,
    p0_window=(-3.0, 3.0),
    num: int = 601,
    equations: str = "both",
    sv_tol: float = 1e-8,
    refine_tol: float = 1e-12,
):
    """Relative energies p0 at which the dispersion matrix develops a
    common null space, with a basis of that null space at each root.

    equations="both" stacks both operator matrices (32x16) and finds
    genuine simultaneous solutions; equations="first" uses only the
    first equation (16x16), the setting in which the current-divergence
    analysis is nontrivial.

    Roots are located by scanning the smallest singular value over the
    window, bracketing its local minima, and bisecting on the sign of
    its one-sided slope down to refine_tol. Minima that do not reach
    sv_tol are discarded. An empty window is not an error.
    """
    if equations not in ("both", "first"):
        raise ValueError(f"unknown equations choice: {equations!r}")
    lo, hi = p0_window
    xs = np.linspace(lo, hi, num)
    sig = np.array([_sigma_min(system, P, p_spatial, x, equations) for x in xs])

    def slope_sign(x, delta=1e-9):
        return np.sign(
            _sigma_min(system, P, p_spatial, x + delta, equations)
            - _sigma_min(system, P, p_spatial, x - delta, equations)
        )

    roots = []
    for i in range(1, num - 1):
        if not (sig[i] <= sig[i - 1] and sig[i] <= sig[i + 1]):
            continue
        a, b = xs[i - 1], xs[i + 1]
        if slope_sign(a) >= 0 or slope_sign(b) <= 0:
            continue  # not a descending-then-ascending bracket
        while b - a > refine_tol:
            mid = 0.5 * (a + b)
            if slope_sign(mid) < 0:
                a = mid
            else:
                b = mid
        p0 = 0.5 * (a + b)
        if _sigma_min(system, P, p_spatial, p0, equations) < sv_tol:
            if not roots or abs(p0 - roots[-1]) > 10 * refine_tol:
                roots.append(p0)

    out = []
    for p0 in roots:
        M = _dispersion_matrix(system, P, p_spatial, p0, equations)
        _, s, vh = np.linalg.svd(M)
        basis = vh[s < sv_tol].conj().T
        out.append((p0, basis))
    return out


def plane_wave_state(system, P, p_spatial, p0, u, solves="both") -> PlaneWaveState:
    """Package a null vector as a plane-wave state with its momenta."""
    P = as_four_vector(P)
    p = np.array([p0, *p_spatial])
    return PlaneWaveState(u=u, p1=P / 2 + p, p2=P / 2 - p, solves=solves)


def state_residuals(system: TwoBodyDiracSystem, state: PlaneWaveState):
    """Norms (||M_1 u||, ||M_2 u||) of the two equation residuals."""
    from .spinor_algebra import slash1, slash2

    if isinstance(system.potential, Zero):
        v = 0.0
    elif isinstance(system.potential, Constant):
        v = system.potential.v
    else:
        raise TypeError("plane-wave residuals require a Zero or Constant potential")
    m1, m2 = system.masses.m1, system.masses.m2
    S1 = slash1(system.gammas, state.p1)
    S2 = slash2(system.gammas, state.p2)
    eye = np.eye(16)
    r1 = np.linalg.norm((S1 - m1 * eye + (S2 - m2 * eye) * v) @ state.u)
    r2 = np.linalg.norm((S2 + m2 * eye + (S1 + m1 * eye) * v) @ state.u)
    return float(r1), float(r2)
