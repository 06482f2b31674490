import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cwchaos import specfn
from cwchaos.errors import DomainError


def test_log_gamma_known_values():
    assert specfn.log_gamma(1.0) == 0.0
    assert specfn.log_gamma(0.5) == pytest.approx(0.572364942925, abs=1e-12)
    assert specfn.log_gamma(10.0) == pytest.approx(math.log(math.factorial(9)), rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        specfn.log_gamma(x)


def test_log_gamma_matches_mpmath_over_range():
    mpmath.mp.dps = 30
    for x in np.geomspace(1e-3, 1e9, 200):
        exact = float(mpmath.loggamma(mpmath.mpf(float(x))))
        # Absolute floor near the zeros of ln Gamma at 1 and 2.
        assert abs(specfn.log_gamma(float(x)) - exact) <= 1e-12 * max(abs(exact), 1e-3)


def test_log_binomial_examples():
    assert specfn.log_binomial(4, 2) == pytest.approx(math.log(6), rel=1e-15)
    assert specfn.log_binomial(17, 0) == 0.0
    assert specfn.log_binomial(52, 5) == pytest.approx(math.log(math.comb(52, 5)), rel=1e-14)
    assert specfn.log_binomial(5, -1) == -math.inf
    assert specfn.log_binomial(5, 6) == -math.inf


@pytest.mark.parametrize("n", [30, 100, 1000, 10**4, 10**6])
def test_log_binomial_large_n_exact_integers(n):
    for k in (1, 3, n // 7, n // 2, n - 2):
        exact = math.log(math.comb(n, k)) if n <= 1000 else float(mpmath.log(mpmath.binomial(n, k)))
        assert specfn.log_binomial(n, k) == pytest.approx(exact, rel=2e-15, abs=1e-14)


def test_pascal_rule():
    for n in range(1, 61):
        for k in range(n + 1):
            lhs = math.exp(specfn.log_binomial(n, k))
            rhs = math.exp(specfn.log_binomial(n - 1, k - 1)) + math.exp(specfn.log_binomial(n - 1, k))
            assert lhs == pytest.approx(rhs, rel=1e-10)


def test_log_beta_examples():
    assert specfn.log_beta(1, 1) == 0.0
    exact = Fraction(math.factorial(1) * math.factorial(2), math.factorial(4))
    assert specfn.log_beta(2, 3) == pytest.approx(math.log(exact), rel=1e-14)
    assert specfn.log_beta(0.5, 0.5) == pytest.approx(math.log(math.pi), rel=1e-14)
    with pytest.raises(DomainError):
        specfn.log_beta(0, 1)


@given(st.floats(1e-3, 1e6), st.floats(1e-3, 1e6))
def test_log_beta_symmetric_bitwise(a, b):
    assert specfn.log_beta(a, b) == specfn.log_beta(b, a)


def test_gaussian_pdf():
    assert specfn.gaussian_pdf(0, 0, 1) == pytest.approx(0.398942280, abs=1e-9)
    assert specfn.gaussian_pdf(3.0, 3.0, 4.0) == pytest.approx(1 / (2 * math.sqrt(2 * math.pi)))
    assert specfn.gaussian_pdf(1.7, 1.0, 0.3) == pytest.approx(specfn.gaussian_pdf(0.3, 1.0, 0.3))
    with pytest.raises(DomainError):
        specfn.gaussian_pdf(0, 0, 0)


def test_std_normal_cdf():
    assert specfn.std_normal_cdf(0.0) == 0.5
    assert specfn.std_normal_cdf(math.inf) == 1.0
    assert specfn.std_normal_cdf(-math.inf) == 0.0
    # Frozen from scipy.integrate.quad of the density.
    assert specfn.std_normal_cdf(1.96) == pytest.approx(0.9750021048517798, abs=1e-12)
    assert specfn.std_normal_cdf(1.96) == pytest.approx(0.975002, abs=1e-6)


@given(st.floats(-40, 40))
def test_std_normal_cdf_symmetry(t):
    assert abs(specfn.std_normal_cdf(t) + specfn.std_normal_cdf(-t) - 1.0) <= 1e-12


def test_log_sum_exp():
    assert specfn.log_sum_exp([0.0, 0.0]) == pytest.approx(math.log(2))
    assert specfn.log_sum_exp([-3.25]) == -3.25
    assert specfn.log_sum_exp([math.log(0.25), math.log(0.25), math.log(0.5)]) == pytest.approx(0, abs=1e-15)
    assert specfn.log_sum_exp([]) == -math.inf
    assert specfn.log_sum_exp([1000.0, 1000.0]) == pytest.approx(1000 + math.log(2))
    assert specfn.log_sum_exp([-math.inf, -math.inf]) == -math.inf


def test_binomial_normalization_large_n():
    for n in (10, 1000, 10**4):
        j = np.arange(n + 1)
        for p in (0.01, 0.3, 0.5, 0.77):
            terms = np.exp(specfn.log_binomial_row(n) + j * math.log(p) + (n - j) * math.log1p(-p))
            assert abs(math.fsum(terms) - 1.0) <= 1e-12


def test_adaptive_simpson_polynomial_and_gaussian():
    assert specfn.adaptive_simpson(lambda x: x ** 3 - x, -1.0, 2.0) == pytest.approx(2.25, abs=1e-12)
    val = specfn.adaptive_simpson(lambda x: math.exp(-x * x / 2), -20, 20, tol=1e-12)
    assert val == pytest.approx(math.sqrt(2 * math.pi), abs=1e-11)
    assert specfn.adaptive_simpson(abs, -1.0, 3.0) == pytest.approx(5.0, abs=1e-10)


def test_log_beta_matches_mpmath():
    mpmath.mp.dps = 40
    rng = np.random.default_rng(7)
    for a, b in 10 ** rng.uniform(-3, 6, size=(500, 2)):
        exact = float(mpmath.log(mpmath.beta(a, b)))
        assert specfn.log_beta(a, b) == pytest.approx(exact, rel=1e-13, abs=1e-13)
