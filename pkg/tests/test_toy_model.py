import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tbdkit.toy_model import (
    B,
    BreakdownReport,
    a_product,
    evolve,
    in_h_pos,
    norm_along_evolution,
    positivity_breakdown_search,
)

bounded_complex = st.builds(
    complex,
    st.floats(min_value=-3.0, max_value=3.0, allow_nan=False),
    st.floats(min_value=-3.0, max_value=3.0, allow_nan=False),
)


def test_basis_norms_are_exact():
    assert a_product((1, 0), (1, 0)) == 1.0
    assert a_product((0, 1), (0, 1)) == -1.0
    assert a_product((1, 1), (1, 1)) == 0.0
    assert a_product((1, 0), (0, 1)) == 0.0


def test_near_null_family_norm():
    for n in (2, 3, 10, 100):
        b = 1.0 - 1.0 / n
        assert a_product((1, b), (1, b)).real == pytest.approx(1.0 - b * b, abs=1e-15)


def test_positive_cone_membership():
    assert in_h_pos((1, 0))
    assert in_h_pos((0, 0))
    assert not in_h_pos((0, 1))
    assert not in_h_pos((1, 1))  # null boundary is excluded
    assert in_h_pos((2, 1))


def test_evolution_of_first_basis_vector_is_rotation():
    for t in (0.0, 0.3, 0.7, 2.0, -1.1):
        ut = evolve((1, 0), t)
        assert ut[0] == math.cos(t)
        assert ut[1] == -math.sin(t)


def test_evolution_satisfies_the_equation():
    # central difference of u(t) against -i B u(t)
    u0 = (0.8, 0.35j)
    h = 1e-6
    for t in (0.0, 0.4, 1.3):
        du = (evolve(u0, t + h) - evolve(u0, t - h)) / (2.0 * h)
        rhs = -1j * (B @ evolve(u0, t))
        assert np.allclose(du, rhs, atol=1e-9)


def test_evolution_is_euclidean_unitary_but_not_a_isometric():
    u0 = np.array([1.0, 0.0], dtype=complex)
    t = 0.9
    ut = evolve(u0, t)
    assert np.linalg.norm(ut) == pytest.approx(1.0, abs=1e-14)
    # the indefinite norm genuinely moves
    assert a_product(ut, ut).real == pytest.approx(math.cos(2.0 * t), abs=1e-14)
    assert a_product(ut, ut).real != pytest.approx(1.0, abs=1e-3)


def test_positive_norm_is_lost_within_a_period():
    # (1, 0) starts strictly positive and reaches norm -1 at t = pi/2
    assert in_h_pos((1, 0))
    u_half = evolve((1, 0), math.pi / 2.0)
    assert a_product(u_half, u_half).real == pytest.approx(-1.0, abs=1e-14)
    assert not in_h_pos(u_half)


@settings(max_examples=60, deadline=None)
@given(a=bounded_complex, b=bounded_complex, t=st.floats(min_value=-7.0, max_value=7.0))
def test_closed_form_matches_direct_evolution(a, b, t):
    direct = a_product(evolve((a, b), t), evolve((a, b), t)).real
    assert norm_along_evolution(a, b, t) == pytest.approx(direct, abs=1e-10)


def test_breakdown_search_default_sweep():
    report = positivity_breakdown_search()
    assert isinstance(report, BreakdownReport)
    assert report.n_samples == 10_000
    assert report.n_positive_initially == 10_000
    assert report.n_survivors == 0
    assert report.witness is not None
    a, b, q1, q3 = report.witness
    # the witness fails at one of the quarter periods by construction
    assert not (q1 > 0 and q3 > 0)
    assert q1 == pytest.approx(2.0 * (a.conjugate() * b).real)


def test_breakdown_search_explicit_samples():
    report = positivity_breakdown_search([(1.0, 0.0), (1.0, 0.5j)])
    assert report.n_samples == 2
    assert report.n_survivors == 0


def test_breakdown_search_rejects_nonpositive_initial_data():
    with pytest.raises(ValueError):
        positivity_breakdown_search([(0.5, 1.0)])


def test_quarter_period_values_are_opposite():
    # the mechanism of the breakdown: the two quarter-period norms are
    # exact negatives, so both positive is impossible
    rng = np.random.default_rng(8)
    for _ in range(100):
        a = complex(*rng.uniform(-1, 1, 2))
        b = 0.5 * complex(*rng.uniform(-1, 1, 2))
        if not abs(a) > abs(b):
            continue
        q1 = 2.0 * (a.conjugate() * b).real
        q3 = -q1
        assert not (q1 > 0 and q3 > 0)
        # and they agree with the closed form at the exact angles up to
        # the floating residue of cos^2 - sin^2 at pi/4
        assert norm_along_evolution(a, b, math.pi / 4.0) == pytest.approx(q1, abs=1e-15)
