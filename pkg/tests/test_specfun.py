import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from helmlab import specfun
from helmlab.errors import InputError, RangeError, SingularityError

ARG_MAX = math.pi / 2 - 0.05


def series_i(n, x, terms=80):
    """Power series of I_n at a real point, summed with math.fsum."""
    term = math.exp(n * math.log(x / 2) - math.lgamma(n + 1))
    terms_ = [term]
    for k in range(1, terms):
        term *= (x / 2) ** 2 / (k * (k + n))
        terms_.append(term)
    return math.fsum(terms_)


def integral_k0(x):
    # the integrand is below 1e-300 once x cosh(t) > 700
    upper = math.acosh(max(700.0 / x, 1.0))
    val, _ = integrate.quad(lambda t: math.exp(-x * math.cosh(t)), 0, upper,
                            epsabs=0, epsrel=1e-13, limit=200)
    return val


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("n, z, expected", [(0, 0.0, 1.0), (1, 0.0, 0.0), (5, 0.0, 0.0)])
def test_bessel_i_at_origin(n, z, expected):
    assert specfun.bessel_i(n, z) == expected


def test_bessel_i0_at_one_matches_series():
    assert rel(specfun.bessel_i(0, 1.0).real, series_i(0, 1.0)) < 1e-14
    assert abs(specfun.bessel_i(0, 1.0) - 1.26606587775201) < 1e-13


@pytest.mark.parametrize("n", [0, 1, 2, 7, 20, 60])
@pytest.mark.parametrize("x", [0.01, 0.3, 1.0, 4.5, 12.0])
def test_bessel_i_series_oracle(n, x):
    assert rel(specfun.bessel_i(n, x).real, series_i(n, x, terms=120)) < 1e-11


@pytest.mark.parametrize("n, z", [(0, 1 + 1j), (3, 2 - 1j), (17, 40 + 30j), (64, 100 + 50j),
                                  (128, 3 + 0.1j), (200, 500 + 0j), (9, 9000 + 10j)])
def test_log_bessel_against_mpmath(n, z):
    # compare logs: some of these values under- or overflow as plain complex numbers
    with mp.workdps(40):
        li = complex(mp.log(mp.besseli(n, mp.mpc(z))))
        lk = complex(mp.log(mp.besselk(n, mp.mpc(z))))
    for got, ref in ((specfun.log_bessel_i(n, z), li), (specfun.log_bessel_k(n, z), lk)):
        assert abs(got.real - ref.real) <= 1e-11 * max(1.0, abs(ref.real))
        assert abs(math.remainder(got.imag - ref.imag, 2 * math.pi)) < 1e-9


def test_bessel_i_prime_examples():
    assert specfun.bessel_i_prime(0, 0.0) == 0
    assert specfun.bessel_i_prime(1, 0.0) == 0.5
    assert abs(specfun.bessel_i_prime(0, 1.0) - 0.56515910399249) < 1e-13


@pytest.mark.parametrize("n, z", [(0, 0.7), (2, 1.5 + 0.5j), (10, 30 - 20j), (40, 5.0)])
def test_bessel_i_prime_recurrence(n, z):
    lhs = specfun.bessel_i_prime(n, z)
    rhs = 0.5 * (specfun.bessel_i(abs(n - 1), z) + specfun.bessel_i(n + 1, z))
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_bessel_k_integral_oracle():
    assert rel(specfun.bessel_k(0, 1.0).real, integral_k0(1.0)) < 1e-12
    assert abs(specfun.bessel_k(0, 1.0) - 0.42102443824071) < 1e-13
    assert abs(specfun.bessel_k_prime(0, 1.0) + 0.60190723019723) < 1e-13


@pytest.mark.parametrize("x", [0.05, 0.5, 2.0, 10.0, 40.0])
def test_bessel_k0_integral_oracle_grid(x):
    assert rel(specfun.bessel_k(0, x).real, integral_k0(x)) < 1e-10


def test_k_singular_at_origin():
    with pytest.raises(SingularityError):
        specfun.bessel_k(0, 0.0)


@pytest.mark.parametrize("n, z", [(-1, 1.0), (257, 1.0), (0, 2e4), (0, -1.0), (1, -0.5 + 1j)])
def test_range_errors(n, z):
    with pytest.raises(RangeError):
        specfun.bessel_i(n, z)


@pytest.mark.parametrize("z", [float("nan"), complex(1, float("inf"))])
def test_nonfinite_input(z):
    with pytest.raises(InputError):
        specfun.bessel_i(0, z)


def test_overflow_requires_scaled_form():
    with pytest.raises(RangeError):
        specfun.bessel_i(0, 800.0)
    scaled = specfun.bessel_i(0, 800.0, scaled=True).real
    assert rel(scaled, 1 / math.sqrt(2 * math.pi * 800) * (1 + 1 / 6400)) < 1e-6


@pytest.mark.parametrize("n, z, bound", [(0, 1.0, 1e-12), (64, 100 + 50j, 1e-10),
                                         (5, 0.01, 1e-10), (3, 2 + 1j, 1e-12)])
def test_wronskian_examples(n, z, bound):
    assert specfun.wronskian_residual(n, z) < bound


@settings(max_examples=300, deadline=None)
@given(n=st.integers(0, 128),
       logmod=st.floats(math.log(1e-3), math.log(500.0)),
       arg=st.floats(-ARG_MAX, ARG_MAX))
def test_wronskian_and_recurrence_grid(n, logmod, arg):
    z = complex(math.exp(logmod) * math.cos(arg), math.exp(logmod) * math.sin(arg))
    assert specfun.wronskian_residual(n, z) < 1e-10
    assert specfun.recurrence_residual(max(n, 1), z) < 1e-9


@settings(max_examples=100, deadline=None)
@given(n=st.integers(0, 256), x=st.floats(0.0, 1e4), y=st.floats(-1e3, 1e3))
def test_conjugation_symmetry(n, x, y):
    z = complex(x, y)
    if z == 0 or abs(z) > 1e4 or abs(math.atan2(y, x)) >= math.pi / 2:
        return
    a = specfun.log_bessel_i(n, z)
    b = specfun.log_bessel_i(n, z.conjugate())
    assert abs(a.real - b.real) <= 1e-13 * max(1.0, abs(a.real))
    assert abs(math.remainder(a.imag + b.imag, 2 * math.pi)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(n=st.integers(0, 256), x=st.floats(1e-6, 1e4))
def test_positivity_on_real_axis(n, x):
    # K_n(x) leaves the double range for large n / small x, so check the log form:
    # a real, finite logarithm means a positive value
    for f in (specfun.log_bessel_i, specfun.log_bessel_k):
        v = f(n, x)
        assert v.imag == 0 and math.isfinite(v.real)


@pytest.mark.parametrize("n, x", [(0, 1e-6), (3, 0.5), (40, 30.0), (256, 1e4)])
def test_positivity_of_values(n, x):
    assert specfun.bessel_i(n, x, scaled=True).real > 0
    assert specfun.bessel_k(n, x, scaled=True).real > 0


def test_ratio_small_argument_is_exact_power():
    # I_n(z/2) / I_n(z) -> 2^-n for small z
    assert rel(specfun.ratio_i(128, 0.005, 0.01).real, 0.5 ** 128) < 1e-6


@pytest.mark.parametrize("n, z", [(0, 0.5), (3, 0.1 + 0.2j), (30, 2.0), (5, 200 + 100j)])
def test_log_derivatives_against_mpmath(n, z):
    with mp.workdps(40):
        zz = mp.mpc(z)
        di = mp.diff(lambda t: mp.besseli(n, t), zz) / mp.besseli(n, zz)
        dk = mp.diff(lambda t: mp.besselk(n, t), zz) / mp.besselk(n, zz)
        d2i = mp.diff(lambda t: mp.besseli(n, t), zz, 2) / mp.besseli(n, zz)
        d2k = mp.diff(lambda t: mp.besselk(n, t), zz, 2) / mp.besselk(n, zz)
    for got, ref in ((specfun.dlog_i(n, z), di), (specfun.dlog_k(n, z), dk),
                     (specfun.d2log_i(n, z), d2i), (specfun.d2log_k(n, z), d2k)):
        assert abs(got - complex(ref)) <= 1e-10 * max(1.0, abs(complex(ref)))


def test_vectorised_matches_scalar():
    z = np.array([0.001, 0.5 + 0.5j, 30.0, 900 - 10j])
    vec = specfun.log_bessel_i(7, z)
    for zi, vi in zip(z, vec):
        assert vi == specfun.log_bessel_i(7, zi)
