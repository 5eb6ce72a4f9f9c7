import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spiral_minimal.errors import InvalidArgument, SolverDomainError
from spiral_minimal.functional import mean_curvature_of_jet
from spiral_minimal.geometry import immersion_jet
from spiral_minimal.grid import GridFunction
from spiral_minimal.operators import (
    base_jet,
    base_jet_via_frame,
    cumulative_from_origin,
    displacement_jet,
    graph_jet,
    l0_apply,
    l0_inverse,
    l_delta_apply,
    l_delta_displayed,
    q_operator,
    rotation_R,
)

S = 1.5


def grid(fn, n=201, half=S):
    return GridFunction.from_callable(fn, half, n)


def halving_orders(err, ns=(101, 201, 401, 801)):
    e = [err(n) for n in ns]
    return [math.log2(a / b) for a, b in zip(e, e[1:])]


def test_rotation_matrix_is_left_handed_frame():
    R = rotation_R(0.4)
    np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-15)
    assert np.linalg.det(R) == pytest.approx(-1.0)


def test_base_jet_at_origin():
    j = base_jet(0.0, 0.1)
    np.testing.assert_allclose(j.grad_s, [1, 0, 0])
    np.testing.assert_allclose(j.grad_t, [0, 0, 1])


def test_base_jet_at_s1():
    j = base_jet(1.0, 0.1)
    np.testing.assert_allclose(j.grad_t, [0.1 * math.sinh(1), math.sinh(1), 1])


@given(st.floats(-3, 3), st.floats(-10, 10), st.floats(1e-3, 0.2))
def test_base_jet_is_theta_free(s, theta, delta):
    a = base_jet_via_frame(s, theta, delta).as_array()
    b = base_jet(s, delta).as_array()
    np.testing.assert_allclose(a, b, atol=1e-12 * np.cosh(s) * (1 + abs(theta)))


def test_base_jet_zero_vs_full_turn():
    for s in (-2.0, 0.3, 2.5):
        a = base_jet_via_frame(s, 0.0, 0.05).as_array()
        b = base_jet_via_frame(s, 2 * math.pi, 0.05).as_array()
        np.testing.assert_allclose(a, b, atol=1e-13 * math.cosh(s))


def test_displacement_jet_zero_and_mode_check():
    z = displacement_jet(0.4, 0.0, 0.0, 0.0, 0.1)
    assert not np.any(z.as_array())
    with pytest.raises(InvalidArgument):
        displacement_jet(0.4, 1.0, 0.0, 0.0, 0.1, mode="other")


@given(st.floats(-3, 3), st.tuples(*[st.floats(-1, 1)] * 3), st.floats(1e-3, 0.2))
def test_displacement_jet_is_linear(s, u, delta):
    one = displacement_jet(s, *u, delta).as_array()
    two = displacement_jet(s, *(2 * x for x in u), delta).as_array()
    np.testing.assert_allclose(two, 2 * one, atol=1e-14)


@given(st.floats(-3, 3), st.tuples(*[st.floats(-1, 1)] * 3), st.floats(1e-3, 0.2))
def test_mode_difference_is_order_delta(s, u, delta):
    diff = displacement_jet(s, *u, delta) - displacement_jet(s, *u, delta, mode="zero")
    assert diff.norm() <= 3 * delta * (abs(u[0]) + abs(u[1]) + abs(u[2])) + 1e-15


@pytest.mark.parametrize("delta", [0.01, 0.05, 0.1, 0.2])
def test_q_of_zero_is_delta_tanh(delta):
    z = GridFunction.zeros(S, 401)
    np.testing.assert_allclose(q_operator(z, delta).values, delta * np.tanh(z.s), rtol=0, atol=1e-12)


def test_q_zero_mode_at_zero():
    z = GridFunction.zeros(S, 101)
    # the displacement carries no delta at u = 0 in either mode
    np.testing.assert_allclose(q_operator(z, 1e-3, mode="zero").values, 1e-3 * np.tanh(z.s), atol=1e-15)


def test_q_flags_high_defect_node():
    u = grid(lambda s: 5.0 * s**3)
    with pytest.raises(SolverDomainError) as info:
        q_operator(u, 0.05)
    assert info.value.node is not None


@pytest.mark.parametrize("theta", [0.0, 1.0, 2 * math.pi])
def test_theta_consistency(theta):
    delta = 0.05
    u = grid(lambda s: 0.01 * np.sin(s) ** 2)
    q = q_operator(u, delta)
    _, jet = graph_jet(u.s, theta, delta, u.values, u.d1(), u.d2())
    H = mean_curvature_of_jet(jet)
    # the world-frame path uses the right-handed normal, hence the sign
    expected = -np.exp(-delta * theta) * q.values / np.cosh(u.s) ** 2
    np.testing.assert_allclose(H, expected, rtol=0, atol=1e-10)


def test_graph_jet_with_zero_profile_is_immersion_jet():
    s = np.linspace(-1, 1, 5)
    p, j = graph_jet(s, 0.3, 0.1, 0 * s, 0 * s, 0 * s)
    p0, j0 = immersion_jet(s, 0.3, 0.1)
    np.testing.assert_array_equal(p, p0)
    np.testing.assert_array_equal(j.as_array(), j0.as_array())


def test_l0_examples():
    t = grid(np.tanh)
    assert np.abs(l0_apply(t).values[1:-1]).max() < 1e-4
    sq = grid(lambda s: s**2)
    np.testing.assert_allclose(l0_apply(sq).values, 2 + 2 * sq.s**2 / np.cosh(sq.s) ** 2, atol=1e-10)
    assert not np.any(l0_apply(GridFunction.zeros(S, 11)).values)


def test_l0_inverse_examples():
    assert not np.any(l0_inverse(GridFunction.zeros(S, 11)).values)
    f = grid(lambda s: 2 + 2 * s**2 / np.cosh(s) ** 2)
    np.testing.assert_allclose(l0_inverse(f).values, f.s**2, atol=1e-6)


def test_l0_inverse_vanishes_to_second_order():
    u = l0_inverse(grid(np.cos))
    assert u.values[u.center] == 0.0
    assert abs(u.slope_at_origin()) < 1e-12


def test_cumulative_integral_is_fourth_order():
    def err(n):
        s = np.linspace(-2, 2, n)
        return np.abs(cumulative_from_origin(np.cos(s), s[1] - s[0], n // 2) - np.sin(s)).max()

    assert min(halving_orders(err)) > 3.8


def test_right_inverse_order_two():
    def err(n):
        f = GridFunction.from_callable(np.cos, S, n)
        return np.abs(l0_apply(l0_inverse(f)).values - f.values)[1:-1].max()

    for p in halving_orders(err):
        assert p == pytest.approx(2.0, abs=0.3)


def test_left_inverse_order_two():
    def err(n):
        u = GridFunction.from_callable(lambda s: np.sin(s) ** 2 * np.cos(2 * s), S, n)
        return np.abs(l0_inverse(l0_apply(u)).values - u.values).max()

    for p in halving_orders(err):
        assert p == pytest.approx(2.0, abs=0.3)


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_l0_inverse_is_linear(a, b):
    f, g = grid(np.cos, 51), grid(np.exp, 51)
    lhs = l0_inverse(f * a + g * b).values
    rhs = (l0_inverse(f) * a + l0_inverse(g) * b).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * (1 + abs(a) + abs(b)) * 10)


def test_l_delta_reduces_to_l0():
    u = grid(lambda s: np.sin(2 * s))
    np.testing.assert_allclose(l_delta_apply(u, 0.0).values, l0_apply(u).values, atol=1e-12)


@pytest.mark.parametrize("delta", [0.01, 0.1])
def test_l_delta_of_one(delta):
    one = grid(np.ones_like)
    t, c2 = np.tanh(one.s), 1 / np.cosh(one.s) ** 2
    base = delta**2 - delta**2 * c2 + 2 * c2
    np.testing.assert_allclose(l_delta_apply(one, delta).values, base + delta**2 * t * t * c2, atol=1e-13)
    np.testing.assert_allclose(l_delta_displayed(one, delta).values, base + 2 * delta**2 * t * t * c2, atol=1e-13)


def _linearization_remainders(op, delta=0.05, ts=(4e-3, 2e-3, 1e-3, 5e-4)):
    v = grid(lambda s: np.sin(2 * s) * np.exp(-(s**2)), 401)
    z = GridFunction.zeros(v.half_width, v.n)
    q0 = q_operator(z, delta).values
    Lv = op(v, delta).values
    return [np.abs(q_operator(v * t, delta).values - q0 - t * Lv)[1:-1].max() for t in ts]


def test_l_delta_is_linearization_of_q():
    r = _linearization_remainders(l_delta_apply)
    for a, b in zip(r, r[1:]):
        assert a / b == pytest.approx(4.0, abs=0.5)


def test_coefficient_two_variant_leaves_first_order_remainder():
    r = _linearization_remainders(l_delta_displayed)
    # the ratio drifts to 2: a residual O(t) term
    assert r[-2] / r[-1] < 3.0
    assert r[-1] > 3 * _linearization_remainders(l_delta_apply)[-1]
