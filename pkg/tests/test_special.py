import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special as sp

from betaensemble.errors import InvalidInputError, InvalidParameterError
from betaensemble.special import (
    ScaledReal,
    airy,
    airy_prime,
    equilibrium_potential,
    hermite_function,
    hermite_function_table,
    hermite_poly,
    hermite_poly_complex,
    hermite_ratio,
    hermite_zero_prediction,
    hermite_zeros,
    phase_phi,
    pr_oscillatory,
    pr_transition,
    semicircle_cdf,
    semicircle_density,
    semicircle_stieltjes,
    semicircle_tail,
    semiclassical_location,
    tail_inverse,
)


@pytest.mark.parametrize("n", [0, 1, 5, 30, 100])
def test_hermite_poly_matches_scipy(n):
    x = np.linspace(-8, 8, 41)
    got = hermite_poly(n, x).to_float()
    want = sp.eval_hermite(n, x)
    assert np.allclose(got, want, rtol=1e-11, atol=1e-300)


def test_hermite_poly_large_degree_log_magnitude():
    # log|H_n(x)| from scipy's log-space Hermite function for n beyond overflow
    n, x = 400, 3.7
    got = hermite_poly(n, x)
    # psi_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi))
    psi = _psi(n, x)
    want = math.log(abs(psi)) + x * x / 2 + 0.5 * (n * math.log(2) + math.lgamma(n + 1) + 0.5 * math.log(math.pi))
    assert got.log_magnitude == pytest.approx(want, rel=1e-12)
    assert got.sign == np.sign(psi)


def _psi(n, x):
    # orthonormal Hermite function via the stable normalised recurrence, independent of the package
    p0, p1 = math.pi ** -0.25 * math.exp(-x * x / 2), 0.0
    for j in range(n):
        p0, p1 = math.sqrt(2.0 / (j + 1)) * x * p0 - math.sqrt(j / (j + 1)) * p1, p0
    return p0


def test_hermite_poly_complex_matches_polyval():
    z = np.array([0.3 + 0.2j, -1.5 + 0.7j])
    c = np.zeros(21)
    c[20] = 1
    want = np.polynomial.hermite.hermval(z, c)
    got = hermite_poly_complex(20, z).to_complex()
    assert np.allclose(got, want, rtol=1e-11)


def test_hermite_ratio_matches_direct():
    z = np.array([0.4 + 0.1j, 2.0 + 1j])
    c10, c11 = np.zeros(11), np.zeros(12)
    c10[10], c11[11] = 1, 1
    want = np.polynomial.hermite.hermval(z, c10) / np.polynomial.hermite.hermval(z, c11)
    assert np.allclose(hermite_ratio(11, z), want, rtol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 7, 50, 200])
def test_hermite_zeros_match_gauss_hermite_nodes(n):
    nodes, _ = sp.roots_hermite(n)
    assert np.allclose(hermite_zeros(n), nodes, atol=1e-12 * max(1, math.sqrt(n)))


def test_hermite_function_orthonormal_by_quadrature():
    # E_k(x) = 2^{1/4} psi_k(sqrt 2 x) is orthonormal in L^2(dx)
    for j, k in [(0, 0), (3, 3), (3, 5), (20, 20), (20, 22)]:
        val = integrate.quad(lambda x: hermite_function(j, x) * hermite_function(k, x), -12, 12, limit=200)[0]
        assert val == pytest.approx(1.0 if j == k else 0.0, abs=1e-10)


def test_hermite_function_against_scipy_formula():
    x = np.linspace(-4, 4, 17)
    for k in (0, 1, 6, 25):
        u = math.sqrt(2) * x
        psi = sp.eval_hermite(k, u) * np.exp(-u * u / 2) / math.sqrt(2.0 ** k * math.factorial(k) * math.sqrt(math.pi))
        assert np.allclose(hermite_function(k, x), 2 ** 0.25 * psi, rtol=1e-10, atol=1e-14)


def test_hermite_function_table_rows():
    x = np.array([0.1, 1.3])
    t = hermite_function_table(12, x)
    for j in (0, 5, 12):
        assert np.allclose(t[j], hermite_function(j, x), rtol=1e-13)


@pytest.mark.parametrize("x", [-9.0, -5.5, -2.0, 0.0, 0.7, 3.0, 5.99, 6.01, 12.0])
def test_airy_matches_scipy(x):
    ai, aip, _, _ = sp.airy(x)
    assert airy(x) == pytest.approx(ai, rel=1e-8, abs=1e-10)
    assert airy_prime(x) == pytest.approx(aip, rel=1e-8, abs=1e-10)


def test_semicircle_pieces_consistent():
    x = np.linspace(-0.99, 0.99, 11)
    for a in x:
        mass = integrate.quad(semicircle_density, -1, a)[0]
        assert semicircle_cdf(a) == pytest.approx(mass, abs=1e-10)
        assert semicircle_tail(a) == pytest.approx(1 - mass, abs=1e-10)


@pytest.mark.parametrize("z", [0.3 + 0.5j, -0.8 + 0.01j, 2.0 + 0.0j, 1j])
def test_semicircle_stieltjes_matches_quadrature(z):
    f = lambda x, part: part(semicircle_density(x) / (x - z))
    want = complex(integrate.quad(f, -1, 1, args=(np.real,), limit=400, points=[z.real] if abs(z.real) < 1 else None)[0],
                   integrate.quad(f, -1, 1, args=(np.imag,), limit=400, points=[z.real] if abs(z.real) < 1 else None)[0])
    assert semicircle_stieltjes(z) == pytest.approx(want, abs=1e-7)


def test_semicircle_stieltjes_rejects_support():
    with pytest.raises(InvalidInputError):
        semicircle_stieltjes(0.5 + 0j)


def test_equilibrium_potential_closed_form():
    # for real z > 1: g(z) = z^2 - z sqrt(z^2-1) + log(z + sqrt(z^2-1)) - log 2 - 1/2
    for z in (1.5, 2.0, 5.0):
        r = math.sqrt(z * z - 1)
        want = z * z - z * r + math.log(z + r) - math.log(2) - 0.5
        assert equilibrium_potential(z + 0j).real == pytest.approx(want, abs=1e-10)


def test_equilibrium_potential_derivative_is_stieltjes():
    z, h = 0.3 + 0.4j, 1e-4
    d = (equilibrium_potential(z + h) - equilibrium_potential(z - h)) / (2 * h)
    assert d == pytest.approx(-semicircle_stieltjes(z), abs=1e-6)


def test_phase_phi_region():
    with pytest.raises(InvalidInputError):
        phase_phi(0.2 - 0.1j)
    with pytest.raises(InvalidInputError):
        phase_phi(1.5 + 0.1j)
    assert np.isfinite(phase_phi(0.2 + 0.1j))


def test_pr_oscillatory_accuracy_improves_with_k():
    errs = []
    for k in (100, 400):
        x = np.linspace(-0.7, 0.7, 301) * math.sqrt(k)
        errs.append(np.max(np.abs(pr_oscillatory(k, x) - hermite_function(k, x))))
    assert errs[1] < errs[0] < 0.01


def test_pr_transition_matches_near_edge():
    k = 400
    x = np.linspace(0.85, 1.15, 101) * math.sqrt(k)
    err = np.max(np.abs(pr_transition(k, x) - hermite_function(k, x)))
    amp = np.max(np.abs(hermite_function(k, x)))
    assert err < 0.02 * amp


def test_tail_inverse_and_locations():
    t = np.array([0.1, 0.5, 0.9])
    assert np.allclose(semicircle_tail(tail_inverse(t)), t, atol=1e-13)
    assert semiclassical_location(50, 100) == 0.0
    assert semicircle_cdf(semiclassical_location(17, 100)) == pytest.approx(0.17, abs=1e-12)
    with pytest.raises(InvalidParameterError):
        semiclassical_location(0, 100)


def test_zero_prediction_close_to_true_zeros():
    n = 200
    true = (hermite_zeros(n) / math.sqrt(2 * n))[::-1]
    k = np.arange(10, n - 9)
    assert np.max(np.abs(hermite_zero_prediction(k, n) - true[k - 1])) < 1e-4
    with pytest.raises(InvalidParameterError):
        hermite_zero_prediction(5, n)


_moderate = st.floats(-1e30, 1e30, allow_nan=False).filter(lambda v: v == 0 or abs(v) > 1e-200)


@settings(max_examples=60, deadline=None)
@given(_moderate, _moderate)
def test_scaled_real_arithmetic(a, b):
    sa, sb = ScaledReal.from_float(a), ScaledReal.from_float(b)
    assert (sa * sb).to_float() == pytest.approx(a * b, rel=1e-12, abs=1e-300)
    assert (sa + sb).to_float() == pytest.approx(a + b, rel=1e-9, abs=1e-9 * (abs(a) + abs(b)) + 1e-300)
    if b != 0:
        assert (sa / sb).to_float() == pytest.approx(a / b, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.95, 0.95), st.floats(0.01, 3.0))
def test_semicircle_stieltjes_self_consistency(e, eta):
    # s_sc solves s^2/4 + z s + 1 = 0 under this normalisation, with Im s > 0
    z = complex(e, eta)
    s = semicircle_stieltjes(z)
    assert s.imag > 0
    assert abs(s * s / 4 + z * s + 1) < 1e-10


def test_phase_phi_against_mpmath_and_boundary_slope():
    mp = pytest.importorskip("mpmath")

    def phi(z):
        return -1j * z * mp.sqrt(1 - z) * mp.sqrt(1 + z) - 2j * mp.asin(z) + 1j * mp.pi

    for z in (0.3 + 0.2j, -0.7 + 0.05j):
        assert phase_phi(z) == pytest.approx(complex(phi(mp.mpc(z))), abs=1e-12)
    # Re phi(E + i eta) / eta at eta -> 0 equals d/deta Re phi, taken numerically with mpmath
    e = 0.3
    slope = mp.diff(lambda h: mp.re(phi(mp.mpc(e, h))), 0)
    assert phase_phi(complex(e, 1e-6)).real / 1e-6 == pytest.approx(float(slope), rel=1e-5)
    assert float(slope) == pytest.approx((3 - 2 * e * e) / math.sqrt(1 - e * e), rel=1e-10)
