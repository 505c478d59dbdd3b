"""Gamma matrix algebra on the tensor product of two Dirac spinor spaces.

Conventions, fixed once here and relied on everywhere else:

  * metric eta = diag(+1, -1, -1, -1)
  * Clifford relations  gamma^mu gamma^nu + gamma^nu gamma^mu = 2 eta^{mu nu} 1_4
  * hermiticity pattern (gamma^mu)^dagger = gamma^0 gamma^mu gamma^0
  * metric contraction  q.gamma = q^0 gamma^0 - sum_k q^k gamma^k

Two representations are provided behind the same tag interface so that
representation independence can be asserted by re-running checks under a
second tag. All matrices are dense complex 4x4 (or 16x16 after lifting);
nothing here is large enough to warrant sparsity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# TwoBodySpinOp is a plain 16x16 complex ndarray; no wrapper class is
# needed because every consumer treats it as a matrix.
TwoBodySpinOp = np.ndarray

_ID2 = np.eye(2)
_SIGMA = [
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
]


def _block(a, b, c, d):
    return np.block([[a, b], [c, d]]).astype(complex)


@dataclass(frozen=True)
class GammaSet:
    """The four gamma matrices of one representation, plus the metric.

    gamma has shape (4, 4, 4): gamma[mu] is the 4x4 matrix gamma^mu.
    """

    tag: str
    gamma: np.ndarray
    metric: np.ndarray = field(default_factory=lambda: METRIC.copy())

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=complex)
        if g.shape != (4, 4, 4):
            raise ValueError("gamma must have shape (4, 4, 4)")
        object.__setattr__(self, "gamma", g)


def build_gammas(representation_tag: str = "dirac") -> GammaSet:
    """Build the gamma matrices for a named representation.

    Supported tags: "dirac" (standard representation, gamma^0 diagonal)
    and "weyl" (chiral representation, gamma^0 off-diagonal). Both
    satisfy the Clifford and hermiticity invariants exactly, with
    integer or unit-modulus entries.
    """
    zero = np.zeros((2, 2))
    if representation_tag == "dirac":
        g0 = _block(_ID2, zero, zero, -_ID2)
        gk = [_block(zero, s, -s, zero) for s in _SIGMA]
    elif representation_tag == "weyl":
        g0 = _block(zero, _ID2, _ID2, zero)
        gk = [_block(zero, s, -s, zero) for s in _SIGMA]
    else:
        raise ValueError(f"unknown representation tag: {representation_tag!r}")
    return GammaSet(tag=representation_tag, gamma=np.stack([g0] + gk))


def lift1(gammas: GammaSet, mu: int) -> TwoBodySpinOp:
    """gamma^mu acting on the first spinor factor: gamma^mu x 1_4."""
    if mu not in range(4):
        raise IndexError(f"Lorentz index out of range: {mu}")
    return np.kron(gammas.gamma[mu], np.eye(4))


def lift2(gammas: GammaSet, nu: int) -> TwoBodySpinOp:
    """gamma^nu acting on the second spinor factor: 1_4 x gamma^nu."""
    if nu not in range(4):
        raise IndexError(f"Lorentz index out of range: {nu}")
    return np.kron(np.eye(4), gammas.gamma[nu])


def _slash4(gammas: GammaSet, q) -> np.ndarray:
    q = np.asarray(q)
    if q.shape != (4,):
        raise ValueError("four-vector expected")
    out = q[0] * gammas.gamma[0].astype(complex)
    for k in (1, 2, 3):
        out = out - q[k] * gammas.gamma[k]
    return out


def slash1(gammas: GammaSet, q) -> TwoBodySpinOp:
    """Contraction q.gamma_1 = q^0 gamma_1^0 - sum_k q^k gamma_1^k."""
    return np.kron(_slash4(gammas, q), np.eye(4))


def slash2(gammas: GammaSet, q) -> TwoBodySpinOp:
    """Contraction q.gamma_2 on the second factor."""
    return np.kron(np.eye(4), _slash4(gammas, q))


def trace16_normalized(op: TwoBodySpinOp) -> complex:
    """(1/4) times the 16x16 matrix trace.

    The quarter normalization makes trace16_normalized(1_16) = 4, i.e.
    it plays the role of a single-particle spinor trace on the product
    space. The raw trace is np.trace(op) for callers that need it.
    """
    op = np.asarray(op)
    if op.shape != (16, 16):
        raise ValueError("16x16 operator expected")
    return complex(np.trace(op)) / 4.0


def gamma0_pair(gammas: GammaSet) -> TwoBodySpinOp:
    """The frequently needed product gamma_1^0 gamma_2^0."""
    return np.kron(gammas.gamma[0], gammas.gamma[0])
