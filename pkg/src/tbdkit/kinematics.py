"""Four-vector algebra, total/relative splits, and the transverse projector.

Four-vectors are plain length-4 float arrays (t, x, y, z) in natural
units. The Minkowski square uses the metric of spinor_algebra,
diag(+1, -1, -1, -1).

The transverse projector pi(P) projects onto the subspace orthogonal to
the total momentum P; x_perp = pi(P) x is the covariant relative
separation that the potentials depend on. In the rest frame of P this
reduces to stripping the time component: x_perp = (0, x, y, z).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative tolerance below which P.P is treated as lightlike and the
# projector refused. The degenerate case is never meaningful here.
SINGULAR_PROJECTOR_RTOL = 1e-10

FourVector = np.ndarray


class SingularProjectorError(ValueError):
    """Raised when P.P is too close to zero for the projector to exist."""


def as_four_vector(q) -> FourVector:
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise ValueError(f"four-vector expected, got shape {q.shape}")
    return q


def minkowski_dot(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    return float(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3])


def minkowski_sq(a) -> float:
    return minkowski_dot(a, a)


@dataclass(frozen=True)
class MassPair:
    m1: float
    m2: float

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise ValueError("masses must be positive")


@dataclass(frozen=True)
class TwoBodyKinematics:
    """Positions and momenta of the pair with the derived total/relative
    combinations x = x1 - x2, X = (x1 + x2)/2, p = (p1 - p2)/2, P = p1 + p2."""

    x1: FourVector
    x2: FourVector
    p1: FourVector
    p2: FourVector

    @property
    def x(self) -> FourVector:
        return as_four_vector(self.x1) - as_four_vector(self.x2)

    @property
    def X(self) -> FourVector:
        return (as_four_vector(self.x1) + as_four_vector(self.x2)) / 2.0

    @property
    def p(self) -> FourVector:
        return (as_four_vector(self.p1) - as_four_vector(self.p2)) / 2.0

    @property
    def P(self) -> FourVector:
        return as_four_vector(self.p1) + as_four_vector(self.p2)


def projector(P) -> np.ndarray:
    """Matrix of the transverse projector, acting on contravariant
    components: (pi x)^mu = x^mu - P^mu (P.x)/(P.P).

    Idempotent, annihilates P. Requires |P.P| above a relative
    tolerance; the lightlike case has no transverse decomposition.
    """
    P = as_four_vector(P)
    Psq = minkowski_sq(P)
    scale = float(np.dot(P, P))  # Euclidean norm squared, sets the tolerance scale
    if abs(Psq) < SINGULAR_PROJECTOR_RTOL * max(scale, 1.0):
        raise SingularProjectorError(f"P.P = {Psq} too close to lightlike")
    P_lower = np.array([P[0], -P[1], -P[2], -P[3]])
    return np.eye(4) - np.outer(P, P_lower) / Psq


def x_perp(x, P) -> FourVector:
    """Transverse part of x with respect to P: x_perp.P = 0."""
    return projector(P) @ as_four_vector(x)


def is_spacelike_configuration(x1, x2) -> bool:
    """True iff the separation x1 - x2 is strictly spacelike."""
    d = as_four_vector(x1) - as_four_vector(x2)
    return minkowski_sq(d) < 0.0


def boost_matrix(axis: int, rapidity: float) -> np.ndarray:
    """Lorentz boost along a spatial axis (1, 2 or 3) with the given
    rapidity, as a 4x4 matrix on contravariant components."""
    if axis not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    m = np.eye(4)
    m[0, 0] = ch
    m[axis, axis] = ch
    m[0, axis] = sh
    m[axis, 0] = sh
    return m
