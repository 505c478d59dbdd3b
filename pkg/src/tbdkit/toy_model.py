"""Two-dimensional indefinite-metric counterexample suite.

The space is C^2 with the indefinite product <v, w> = v^dagger A w,
A = diag(1, -1), and the evolution generated by the A-non-Hermitian
B = [[0, i], [-i, 0]]. Restricting to the cone of positive-norm vectors
does not survive the dynamics: no initial datum with |a| > |b| keeps a
positive norm at both quarter-period times t = pi/4 and t = 3 pi/4,
because those two values are +-2 Re(conj(a) b) with opposite signs.
positivity_breakdown_search demonstrates this exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

A = np.diag([1.0, -1.0]).astype(complex)
B = np.array([[0.0, 1j], [-1j, 0.0]])


def a_product(v, w) -> complex:
    """Indefinite product v^dagger A w."""
    v = np.asarray(v, dtype=complex).reshape(2)
    w = np.asarray(w, dtype=complex).reshape(2)
    return complex(v.conj() @ A @ w)


def in_h_pos(v) -> bool:
    """Membership in the positive cone: v = 0 or <v, v> > 0 strictly.

    Norm-zero vectors are excluded; callers interested in the boundary
    can test a_product(v, v) == 0 directly.
    """
    v = np.asarray(v, dtype=complex).reshape(2)
    if not v.any():
        return True
    return a_product(v, v).real > 0.0


def evolve(u0, t: float) -> np.ndarray:
    """Solution u(t) = cos(t) u0 - i sin(t) B u0 of the toy wave
    equation with initial datum u0."""
    u0 = np.asarray(u0, dtype=complex).reshape(2)
    return np.cos(t) * u0 - 1j * np.sin(t) * (B @ u0)


def norm_along_evolution(a: complex, b: complex, t: float) -> float:
    """Closed form of <u(t), u(t)> for u0 = (a, b):
    (|a|^2 - |b|^2)(cos^2 t - sin^2 t) + 4 Re(conj(a) b) cos t sin t."""
    a = complex(a)
    b = complex(b)
    c, s = np.cos(t), np.sin(t)
    return float((abs(a) ** 2 - abs(b) ** 2) * (c * c - s * s) + 4.0 * (a.conjugate() * b).real * c * s)


@dataclass(frozen=True)
class BreakdownReport:
    n_samples: int
    n_positive_initially: int
    n_survivors: int
    witness: tuple | None  # a sample failing at the quarter periods, for the record


def positivity_breakdown_search(samples=None) -> BreakdownReport:
    """Sweep initial data (a, b) with |a| > |b| and test positivity of
    the evolved norm at t = pi/4 and t = 3 pi/4.

    At those times cos^2 - sin^2 vanishes identically, so the closed
    form reduces to +2 Re(conj(a) b) and -2 Re(conj(a) b): the exact
    quarter-period values used here (evaluating cos/sin at pi/4 in
    floating point would leave a spurious residue of the first term).
    Positivity at both times would need Re(conj(a) b) to be positive
    and negative at once, so the survivor count is zero; the report
    carries the first recorded non-survivor as a witness.
    """
    if samples is None:
        rhos = np.linspace(0.0, 0.99, 100)
        phis = np.linspace(0.0, 2.0 * np.pi, 100, endpoint=False)
        samples = [(1.0, rho * np.exp(1j * phi)) for rho in rhos for phi in phis]
    survivors = 0
    positive_initially = 0
    witness = None
    for a, b in samples:
        if not abs(a) > abs(b):
            raise ValueError("samples must satisfy |a| > |b|")
        positive_initially += 1  # |a| > |b| puts (a, b) in the positive cone
        re_ab = (complex(a).conjugate() * complex(b)).real
        at_quarter = 2.0 * re_ab
        at_three_quarters = -2.0 * re_ab
        if at_quarter > 0 and at_three_quarters > 0:
            survivors += 1
        elif witness is None:
            witness = (complex(a), complex(b), at_quarter, at_three_quarters)
    return BreakdownReport(
        n_samples=len(samples),
        n_positive_initially=positive_initially,
        n_survivors=survivors,
        witness=witness,
    )
