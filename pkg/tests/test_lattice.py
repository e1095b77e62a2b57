import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfourier.errors import ConvergenceWarning, NonConvergentError, WindowError
from qfourier.lattice import (
    Skeleton,
    Window,
    abs_integrable_check,
    basis,
    default_window,
    delta_value,
    finite_q_integral,
    jackson_integral,
    lattice_points,
    power_rule_coefficient,
    q_derivative,
    sample,
    seminorm,
    shift_lambda,
    skeletons_close,
    zeros,
)
from qfourier.qcore import QParams, qpoch_finite

gauss = lambda z: math.exp(-z * z)


# --- windows -----------------------------------------------------------------

def test_window_basics():
    w = Window(-3, 4)
    assert len(w) == 8 and 0 in w and 5 not in w
    assert w.intersect(Window(0, 10)) == Window(0, 4)
    assert w.shrink(1, 2) == Window(-2, 2)
    assert w.grow(2) == Window(-5, 6)
    with pytest.raises(WindowError):
        Window(3, 2)
    with pytest.raises(WindowError):
        Window(0.5, 2)


@pytest.mark.parametrize("q,want", [(0.5, Window(-24, 48)), (0.3, Window(-14, 28)), (0.7, Window(-47, 94))])
def test_default_window(q, want):
    assert default_window(QParams(q)) == want


# --- skeletons ---------------------------------------------------------------

def test_sample_examples(p05):
    w = Window(-2, 5)
    one = sample(lambda z: 1.0, w, p05)
    assert np.all(one.pos == 1) and np.all(one.neg == 1)
    g = sample(gauss, w, p05)
    assert g.value(0) == pytest.approx(math.exp(-1), rel=1e-15)
    odd = sample(lambda z: z ** 3 - z, w, p05)
    assert np.array_equal(odd.neg, -odd.pos)


def test_sample_reports_failing_point(p05):
    def f(z):
        if z == 1:
            raise ZeroDivisionError("pole")
        return z

    with pytest.raises(ValueError, match="lattice point"):
        sample(f, Window(-1, 1), p05)


def test_skeleton_validates(p05):
    with pytest.raises(WindowError):
        Skeleton(p05, Window(0, 2), np.zeros(2), np.zeros(3))
    with pytest.raises(ValueError):
        Skeleton(p05, Window(0, 0), [np.inf], [0])


def test_skeleton_arithmetic(p05):
    w = Window(0, 4)
    a = sample(lambda z: z, w, p05)
    b = sample(lambda z: 2 * z, w, p05)
    assert skeletons_close(a + a, b, 0)
    assert skeletons_close(b - a, a, 0)
    assert skeletons_close(2 * a, b, 0)
    assert skeletons_close(-a + b, a, 0)
    assert skeletons_close(a * a, sample(lambda z: z * z, w, p05), 1e-16)
    with pytest.raises(WindowError):
        a + sample(lambda z: z, Window(0, 3), p05)
    with pytest.raises(ValueError):
        a + sample(lambda z: z, w, QParams(0.3))


def test_skeleton_immutable(p05):
    s = zeros(Window(0, 2), p05)
    with pytest.raises(ValueError):
        s.pos[0] = 1


def test_times_coordinate_and_conj(p05):
    w = Window(-3, 6)
    phi = sample(lambda z: complex(gauss(z), z), w, p05)
    assert skeletons_close(phi.times_coordinate(2), sample(lambda z: z * z * complex(gauss(z), z), w, p05), 1e-15)
    assert skeletons_close(phi.conj(), sample(lambda z: complex(gauss(z), -z), w, p05), 0)


def test_value_and_restrict(p05):
    phi = sample(lambda z: z, Window(-2, 3), p05)
    assert phi.value(1, -1) == -0.25
    with pytest.raises(WindowError):
        phi.value(4)
    r = phi.restrict(Window(0, 1))
    assert list(r.pos) == [1, 0.25]
    with pytest.raises(WindowError):
        phi.restrict(Window(-3, 0))


@given(st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
                min_size=6, max_size=6), st.integers(-20, 20))
def test_json_roundtrip(vals, m0):
    p = QParams(0.5)
    s = Skeleton(p, Window(m0, m0 + 2), vals[:3], vals[3:])
    back = Skeleton.from_json(s.to_json())
    assert back.window == s.window and back.params == p
    assert np.array_equal(back.pos, s.pos) and np.array_equal(back.neg, s.neg)


def test_json_rejections(p05):
    s = zeros(Window(0, 1), p05)
    with pytest.raises(ValueError, match="q="):
        Skeleton.from_json(s.to_json(), QParams(0.3))
    with pytest.raises(ValueError, match="malformed"):
        Skeleton.from_json('{"q": 0.5, "m_min": 0}')


def test_basis(p05):
    b = basis(0, 1, Window(-2, 2), p05)
    assert b.value(0) == 1 and np.count_nonzero(b.pos) == 1 and not np.any(b.neg)
    with pytest.raises(WindowError):
        basis(5, 1, Window(-2, 2), p05)
    with pytest.raises(ValueError):
        basis(0, 0, Window(-2, 2), p05)


# --- shift and difference ------------------------------------------------------

def test_shift_lambda(p05):
    w = Window(-3, 6)
    b = basis(2, 1, w, p05)
    assert skeletons_close(shift_lambda(b, 0), b, 0)
    shifted = shift_lambda(b, 1)
    assert shifted.window == Window(-3, 5)
    assert shifted.value(1) == 1 and np.count_nonzero(shifted.pos) == 1
    with pytest.raises(WindowError):
        shift_lambda(b, 20)


@given(st.integers(-3, 3))
def test_shift_lambda_is_dilation(k):
    p = QParams(0.7)
    w = Window(-6, 10)
    phi = sample(gauss, w, p)
    got = shift_lambda(phi, k)
    want = sample(lambda z: gauss(p.q2 ** k * z), got.window, p)
    assert skeletons_close(got, want, 1e-14)


def test_q_derivative_examples(p05):
    w = Window(-4, 10)
    assert not np.any(q_derivative(sample(lambda z: 1.0, w, p05)).pos)
    d = q_derivative(sample(lambda z: z, w, p05))
    assert np.allclose(d.pos, 1, rtol=1e-14) and np.allclose(d.neg, 1, rtol=1e-14)
    d2 = q_derivative(sample(lambda z: z * z, w, p05))
    assert skeletons_close(d2, sample(lambda z: 1.25 * z, d2.window, p05), 1e-14)
    dinv = q_derivative(sample(lambda z: 1 / z, w, p05))
    assert skeletons_close(dinv, sample(lambda z: -4 / z ** 2, dinv.window, p05), 1e-14)


def test_q_derivative_window_errors(p05):
    with pytest.raises(WindowError):
        q_derivative(zeros(Window(0, 1), p05), 2)
    with pytest.raises(ValueError):
        q_derivative(zeros(Window(0, 1), p05), -1)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(-4, 5) if n for k in range(1, 4) if n < 0 or k <= n])
def test_power_rule(params, n, k):
    w = Window(-4, 8)
    d = q_derivative(sample(lambda z: z ** n, w, params), k)
    c = power_rule_coefficient(n, k, params.q)
    assert skeletons_close(d, sample(lambda z: c * z ** (n - k), d.window, params), 1e-12)


def test_power_rule_coefficient_closed_forms():
    q = 0.5
    q2 = q * q
    assert power_rule_coefficient(2, 1, q) == pytest.approx(1 + q2)
    assert power_rule_coefficient(3, 5, q) == 0.0
    assert power_rule_coefficient(-1, 1, q) == pytest.approx(-q ** -2)
    # two steps of z^-1: -q^-2 then -q^-2 (1+q^-2)
    assert power_rule_coefficient(-1, 2, q) == pytest.approx(q ** -2 * (q ** -2 + q ** -4))
    assert power_rule_coefficient(4, 4, q) == pytest.approx(qpoch_finite(q2, q2, 4) / (1 - q2) ** 4)


def test_leibniz_rule(params):
    """d(fg)(z) = d f(z) g(z) + f(q^2 z) d g(z)."""
    w = Window(-4, 12)
    f = sample(gauss, w, params)
    g = sample(lambda z: z ** 3 + 2j, w, params)
    lhs = q_derivative(f * g)
    win = lhs.window
    rhs = q_derivative(f) * g.restrict(win) + shift_lambda(f, 1).restrict(win) * q_derivative(g)
    assert skeletons_close(lhs, rhs, 1e-13)


# --- integrals ------------------------------------------------------------------

def test_jackson_examples(p05):
    w = Window(-10, 60)
    odd = sample(lambda z: z * gauss(z), w, p05)
    assert jackson_integral(odd) == 0
    n = 3
    assert jackson_integral(basis(n, 1, w, p05)) == pytest.approx(0.75 * 0.25 ** n, rel=1e-15)


def test_jackson_gauss_window_stable(params):
    w = default_window(params)
    a = jackson_integral(sample(gauss, w, params))
    b = jackson_integral(sample(gauss, w.grow(8), params))
    assert abs(a - b) < 1e-12 * abs(a)


def test_jackson_warns_and_reports_tails(p05):
    phi = sample(lambda z: 1 / (1 + z * z), Window(-5, 5), p05)
    with pytest.warns(ConvergenceWarning):
        value, info = jackson_integral(phi, full_output=True)
    assert not info.converged and info.head > 0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        jackson_integral(basis(0, 1, Window(-5, 5), p05))


def test_jackson_integral_of_derivative_vanishes(params):
    w = default_window(params)
    phi = sample(lambda z: (1 + z) * gauss(z - 0.5), w, params)
    assert abs(jackson_integral(q_derivative(phi))) < 1e-12


@pytest.mark.parametrize("f,a,b,want", [
    (lambda z: 1.0, 0, 1, 1.0),
    (lambda z: z, 0, 1, 0.8),
    (lambda z: 1.0, -2, 3, 5.0),
    (lambda z: z, 1, 2, 0.8 * 3),
])
def test_finite_q_integral(p05, f, a, b, want):
    assert finite_q_integral(f, a, b, p05) == pytest.approx(want, rel=1e-14)


def test_finite_q_integral_diverges(p05):
    with pytest.raises(NonConvergentError):
        finite_q_integral(lambda z: z ** -2, 0, 1, p05)


def test_finite_q_integral_fundamental_theorem(params):
    """The q-integral of d f from 0 to b is f(b) - f(0)."""
    f = lambda z: math.sin(z) + z ** 3
    a = params.a
    df = lambda z: (f(z) - f(params.q2 * z)) / (a * z)
    assert finite_q_integral(df, 0, 1.3, params) == pytest.approx(f(1.3) - f(0), rel=1e-13)


def test_abs_integrable(p05):
    w = default_window(p05)
    assert abs_integrable_check(sample(gauss, w, p05)).integrable
    assert not abs_integrable_check(sample(lambda z: 1 / z, w, p05)).integrable
    assert abs_integrable_check(basis(3, -1, w, p05)).integrable


def test_seminorm(p05):
    w = Window(-4, 10)
    assert seminorm(sample(lambda z: 1.0, w, p05), 0, 1) == 0
    assert math.isfinite(seminorm(basis(0, 1, w, p05), 3, 2))
    assert seminorm(sample(lambda z: z, w, p05), 0, 0) == pytest.approx(256)
    with pytest.raises(ValueError):
        seminorm(basis(0, 1, w, p05), -1, 0)


def test_delta_value(p05):
    phi = sample(lambda z: 1 / (1 + z * z), default_window(p05), p05)
    assert delta_value(phi) == pytest.approx(1.0, abs=1e-15)


def test_lattice_points(p05):
    assert list(lattice_points(Window(-1, 1), p05)) == [4.0, 1.0, 0.25]
