import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracle_values import ORACLE

from qfourier.distributions import (
    Delta,
    Derivative,
    Linear,
    PowDelta,
    PowInt,
    PowMinusNu,
    PowPlusNu,
    PowSign,
    Regular,
    SignS,
    ThetaMinus,
    ThetaPlus,
    c_nu,
    delta_is_trustworthy,
    dist_derivative,
    fourier_numeric,
    fourier_table,
    nu_prefactor,
    pair,
    parseval_check,
    parseval_sides,
    prop_c2_direct,
    scale,
    table_rows,
)
from qfourier.errors import (
    ConvergenceWarning,
    InvalidNuError,
    NonIntegrableError,
    OutOfStripError,
    UnsupportedDistributionError,
)
from qfourier.lattice import Window, basis, default_window, jackson_integral, sample, zeros
from qfourier.qcore import QParams, e_q2, theta0
from qfourier.verify import transform_window

gauss = lambda z: math.exp(-z * z)


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        yield


# --- records -------------------------------------------------------------------

def test_labels():
    assert PowInt(0).label == "1" and PowInt(-2).label == "z^-2"
    assert PowPlusNu(0.5).label == "z_+^(0.5)"
    assert PowDelta(0).label == "delta" and PowSign(2).label == "z^2 sign"
    assert Derivative(Delta()).label == "d(delta)"
    assert Linear(()).label == "0"


@pytest.mark.parametrize("nu,k", [(-1.0, 0), (-3.0, 2), (0.0, 1), (1.0, 3), (0.5, -1)])
def test_invalid_nu(nu, k):
    with pytest.raises(InvalidNuError):
        PowPlusNu(nu, k)


def test_pow_delta_sign_reject_negative():
    with pytest.raises(ValueError):
        PowDelta(-1)
    with pytest.raises(ValueError):
        PowSign(-1)


def test_linear_flattens():
    inner = Linear(((2, Delta()),))
    outer = Linear(((3j, inner), (1, SignS())))
    assert outer.terms == ((6j, Delta()), (1, SignS()))


# --- pairing ---------------------------------------------------------------------

def test_delta_pairing(p05):
    phi = sample(lambda z: 1 / (1 + z * z), default_window(p05), p05)
    assert pair(Delta(), phi) == pytest.approx(1.0, abs=1e-14)
    assert delta_is_trustworthy(phi)


def test_delta_warns_on_shallow_window(p05):
    phi = sample(lambda z: 1 / (1 + z * z), Window(-4, 3), p05)
    assert not delta_is_trustworthy(phi)
    with pytest.warns(ConvergenceWarning):
        pair(Delta(), phi)


def test_theta_difference_on_odd(params, quiet):
    w = default_window(params)
    phi = sample(lambda z: z * gauss(z), w, params)
    half = params.a * math.fsum(x * v.real for x, v in zip(phi.points, phi.pos))
    got = pair(Linear(((1, ThetaPlus()), (-1, ThetaMinus()))), phi)
    assert got == pytest.approx(2 * half, rel=1e-14)
    assert pair(SignS(), phi) == pytest.approx(got, rel=1e-14)


def test_inverse_power_on_even_vanishes(params):
    phi = sample(gauss, default_window(params), params)
    assert pair(PowInt(-1), phi) == 0


def test_nonnegative_powers_are_regular(p05, quiet):
    w = default_window(p05)
    phi = sample(lambda z: (1 + z) * gauss(z), w, p05)
    for n in range(4):
        want = jackson_integral(phi.times_coordinate(n))
        assert pair(PowInt(n), phi) == pytest.approx(want, rel=1e-13)


def test_pairing_is_conjugate_linear(p05, quiet):
    phi = sample(lambda z: gauss(z - 0.2), default_window(p05), p05)
    f = Linear(((2j, Delta()), (1 - 1j, ThetaPlus())))
    want = -2j * pair(Delta(), phi) + (1 + 1j) * pair(ThetaPlus(), phi)
    assert pair(f, phi) == pytest.approx(want, rel=1e-15)


def test_regular_pairing(p05, quiet):
    w = default_window(p05)
    phi = sample(gauss, w, p05)
    f = Regular(lambda z: 1j * z * z)
    assert pair(f, phi) == pytest.approx(-1j * pair(PowInt(2), phi), rel=1e-14)
    skel = Regular(sample(lambda z: 1j * z * z, Window(-3, 60), p05))
    assert pair(skel, phi) == pytest.approx(pair(f, phi), rel=1e-12)


@pytest.mark.parametrize("nu", [0.3, 0.5, 1.7])
def test_half_line_powers_unregularised(p05, nu, quiet):
    w = default_window(p05)
    phi = sample(lambda z: gauss(z - 0.5), w, p05)
    x = phi.points
    want_p = p05.a * math.fsum((x ** (nu + 1) * phi.pos).real)
    want_m = p05.a * math.fsum((x ** (nu + 1) * phi.neg).real)
    assert pair(PowPlusNu(nu), phi) == pytest.approx(want_p, rel=1e-13)
    assert pair(PowMinusNu(nu), phi) == pytest.approx(want_m, rel=1e-13)


@pytest.mark.parametrize("k", [1, 2])
def test_regularised_power_matches_plain_sum_when_convergent(params, k, quiet):
    """For nu - k > -1 the regularised pairing equals the plain one."""
    nu = k + 0.4
    w = transform_window(params)
    phi = sample(lambda z: z ** 3 * gauss(z - 0.3), w, params)
    plain = pair(PowPlusNu(nu - k), phi)
    assert pair(PowPlusNu(nu, k), phi) == pytest.approx(plain, rel=1e-9)
    plain = pair(PowMinusNu(nu - k), phi)
    assert pair(PowMinusNu(nu, k), phi) == pytest.approx(plain, rel=1e-9)


def test_unsupported_pairing(p05):
    with pytest.raises(UnsupportedDistributionError):
        pair(object(), zeros(Window(0, 2), p05))


# --- derivatives -------------------------------------------------------------------

def test_derivative_of_zero(p05):
    phi = sample(gauss, default_window(p05), p05)
    assert pair(dist_derivative(Regular(lambda z: 0.0)), phi) == 0


def test_derivative_distributes_over_linear():
    d = dist_derivative(Linear(((2, Delta()), (1, SignS()))))
    assert d.terms == ((2, Derivative(Delta())), (1, Derivative(SignS())))


def test_derivative_of_sign_is_twice_delta(params, quiet):
    phi = sample(lambda z: gauss(z - 0.4), default_window(params), params)
    assert pair(dist_derivative(SignS()), phi) == pytest.approx(2 * pair(Delta(), phi), rel=1e-12)


def test_derivative_of_regular_power(params, quiet):
    phi = sample(lambda z: (1 + z) * gauss(z), default_window(params), params)
    lhs = pair(dist_derivative(PowInt(2)), phi)
    assert lhs == pytest.approx((1 + params.q2) * pair(PowInt(1), phi), rel=1e-12)


# --- numeric transforms -----------------------------------------------------------

def test_fourier_numeric_basis(p05):
    # one Jackson term: (1-q^2)/(2 Theta0) times the kernel at z = 1
    w = Window(-4, 8)
    g = fourier_numeric(Regular(basis(0, 1, w, p05)), w, p05)
    want = sample(lambda s: p05.a / (2 * theta0(p05)) * e_q2(1j * p05.a * s, p05), w, p05)
    assert np.allclose(g.pos, want.pos, rtol=1e-15, atol=0)
    assert np.allclose(g.neg, want.neg, rtol=1e-15, atol=0)


def test_fourier_numeric_zero(p05):
    w = Window(-2, 4)
    assert fourier_numeric(Regular(zeros(w, p05)), w, p05).max_abs() == 0


def test_fourier_numeric_inverse_power(params, quiet):
    w = transform_window(params)
    g = fourier_numeric(PowInt(-1), w, params, out_window=Window(0, 6))
    assert np.allclose(g.pos, 1j, atol=1e-9)
    assert np.allclose(g.neg, -1j, atol=1e-9)


def test_fourier_numeric_rejects_growth(p05):
    with pytest.raises(NonIntegrableError):
        fourier_numeric(PowInt(0), Window(-6, 12), p05)
    with pytest.raises(UnsupportedDistributionError):
        fourier_numeric(Delta(), Window(-6, 12), p05)


# --- closed forms -------------------------------------------------------------------

@pytest.mark.parametrize("q", ["0.3", "0.5", "0.7"])
@pytest.mark.parametrize("nu", ["0.3", "0.5", "0.7"])
def test_c_nu_against_oracle(q, nu):
    got = c_nu(float(nu), QParams(float(q)))
    want = ORACLE[("c_nu", q, nu)]
    assert abs(got - want) < 1e-12 * abs(want)


@given(st.floats(0.05, 0.95))
def test_c_nu_conjugate_symmetry(nu):
    p = QParams(0.5)
    a = p.a
    c = c_nu(nu, p)
    conj = math.fsum(
        (p.q ** (2 * nu * m) * (p.q ** (-2 * m) - 1j * a) / (p.q ** (-2 * m) / a + a * p.q ** (2 * m))).imag
        for m in range(-400, 401)
    )
    assert abs(c.conjugate().imag - conj) < 1e-10 * max(1.0, abs(c))


@pytest.mark.parametrize("nu", [0.0, 1.0, 1.5, -0.2])
def test_c_nu_strip(p05, nu):
    with pytest.raises(OutOfStripError):
        c_nu(nu, p05)
    with pytest.raises(OutOfStripError):
        prop_c2_direct(nu, p05)


@pytest.mark.parametrize("nu", [0.3, 0.5, 0.7])
def test_c2_identity(params, nu):
    """Direct nu transform at s = 1 equals the closed form prefactor times c_nu."""
    direct = prop_c2_direct(nu, params)
    closed = nu_prefactor(nu, params) * c_nu(nu, params)
    assert abs(direct - closed) < 1e-9 * abs(closed)


def test_table_constants(p05):
    t0 = theta0(p05)
    assert fourier_table(Delta(), p05).normalization == pytest.approx(0.58786, abs=1e-5)
    assert fourier_table(ThetaPlus(), p05).normalization == pytest.approx(1j / (2 * t0))
    assert fourier_table(ThetaMinus(), p05).normalization == pytest.approx(-1j / (2 * t0))
    assert fourier_table(SignS(), p05).normalization == pytest.approx(1j / t0)
    q = 0.5
    want = 2 * (1j ** 2) * q ** -6 * (1 - q ** 2) * (1 - q ** 4) / (1 - q ** 2) ** 2
    row = fourier_table(PowInt(2), p05)
    assert row.normalization == pytest.approx(want, rel=1e-15)
    assert row.image == scale(want, PowDelta(2))
    inv = fourier_table(PowInt(-1), p05)
    assert inv.normalization == 1j and inv.image == scale(1j, PowSign(0))


def test_table_rows_shape(p05):
    assert len(table_rows(p05)) == 5
    rows = table_rows(p05, 0.5)
    assert len(rows) == 7 and rows[-1].nu == 0.5


def test_table_rejects(p05):
    with pytest.raises(UnsupportedDistributionError):
        fourier_table(Regular(gauss), p05)
    with pytest.raises(OutOfStripError):
        fourier_table(PowPlusNu(0.6), p05)


# --- Parseval -----------------------------------------------------------------------

TESTS = {
    "gauss": gauss,
    "odd_gauss": lambda z: (z + 0.3) * gauss(z),
    "complex_gauss": lambda z: (1 + 0.5j * z) * math.exp(-z * z / 2),
}


@pytest.mark.parametrize("dist", [Delta(), ThetaPlus(), ThetaMinus(), SignS(), PowInt(-1)],
                         ids=lambda d: d.label)
@pytest.mark.parametrize("name", sorted(TESTS))
def test_parseval_rows(params, dist, name, quiet):
    psi = sample(TESTS[name], transform_window(params), params)
    assert parseval_check(fourier_table(dist, params), psi) < 1e-6


@pytest.mark.parametrize("nu", [0.3, 0.7])
def test_parseval_nu_rows(params, nu, quiet):
    psi = sample(TESTS["complex_gauss"], transform_window(params), params)
    for row in table_rows(params, nu)[5:]:
        assert parseval_check(row, psi) < 1e-6


def test_parseval_constant_row(params, quiet):
    """<2 delta, psi> equals the Jackson integral of the inverse transform of psi."""
    psi = sample(TESTS["complex_gauss"], transform_window(params), params)
    row = fourier_table(PowInt(0), params)
    assert row.normalization == 2
    assert parseval_check(row, psi) < 1e-6


def test_forward_route_constant_row_doubles(p05, quiet):
    """(F phi)(0) is the Jackson integral of phi, so the forward route is off by exactly 2.

    This is the same failure of F^-1 F = id that the round-trip criterion reports.
    """
    phi = sample(TESTS["gauss"], transform_window(p05), p05)
    lhs, rhs = parseval_sides(fourier_table(PowInt(0), p05), phi, route="forward")
    assert rhs == pytest.approx(jackson_integral(phi), rel=1e-15)
    assert lhs == pytest.approx(2 * rhs, rel=1e-12)


def test_parseval_zero_entry(p05, quiet):
    row = fourier_table(Linear(()), p05)
    psi = sample(gauss, transform_window(p05), p05)
    assert parseval_check(row, psi) == 0


def test_parseval_bad_route(p05):
    with pytest.raises(ValueError):
        parseval_sides(fourier_table(Delta(), p05), zeros(Window(0, 3), p05), route="sideways")


@pytest.mark.parametrize("n", [-2, -3])
def test_negative_power_regularisation_matches_direct_sum(params, n, quiet):
    """On functions vanishing to high order at 0 the regularised z^n pairing is the plain Jackson sum."""
    w = transform_window(params)
    phi = sample(lambda z: z ** 4 * gauss(z - 0.3), w, params)
    direct = jackson_integral(phi.times_coordinate(n))
    assert pair(PowInt(n), phi) == pytest.approx(direct, rel=1e-10)
