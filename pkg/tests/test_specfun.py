"""
Test Script for the Special Function Kernel
Validates zeta, Bessel and Legendre evaluations against independent oracles
"""

import sys
import os
import math
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest
from fractions import Fraction
from scipy import special

from src.specfun import (
    riemann_zeta, hurwitz_zeta_deriv, riemann_zeta_deriv, log_glaisher,
    barnes_zeta2, barnes_zeta2_deriv, basic_constants, bernoulli_numbers,
    bernoulli_at_half, PrecisionConfig,
    ZeroKind, bessel_j, bessel_j_derivative, bessel_j_zeros, bessel_j_zeros_below,
    legendre_p, legendre_p_theta,
)
from src.utils.errors import (
    PoleError, ValidationError, UnsupportedConfigurationError
)


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def test_zeta_classical_values():
    """Test Riemann and Hurwitz zeta at classical points."""
    print("\n" + "="*50)
    print("Testing Hurwitz Zeta Classical Values")
    print("="*50)

    assert _rel(riemann_zeta(2.0), math.pi ** 2 / 6) < 1e-13
    print(f"✓ zeta(2) = {riemann_zeta(2.0):.12f}")

    assert abs(riemann_zeta(0.0, 0.5)) < 1e-14
    assert abs(riemann_zeta(0.0, 0.3) - 0.2) < 1e-14
    print("✓ zeta(0, a) = 1/2 - a")

    assert abs(riemann_zeta(-1.0) + 1.0 / 12.0) < 1e-14
    print(f"✓ zeta(-1) = {riemann_zeta(-1.0):.15f}")

    for s, a in [(1.5, 0.7), (3.0, 2.5), (2.2, 0.1), (6.0, 1.0)]:
        assert _rel(riemann_zeta(s, a), float(special.zeta(s, a))) < 1e-12
    print("✓ Agrees with scipy Hurwitz zeta for s > 1")

    with pytest.raises(PoleError):
        riemann_zeta(1.0)
    with pytest.raises(ValidationError):
        riemann_zeta(2.0, -0.5)
    print("✓ Pole and domain errors raised")

    return True


def test_zeta_identities():
    """Test the Hurwitz recurrence and duplication formula."""
    print("\n" + "="*50)
    print("Testing Hurwitz Zeta Identities")
    print("="*50)

    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 100:
        s = rng.uniform(-2.5, 4.0)
        a = rng.uniform(0.5, 4.0)
        if abs(s - 1.0) < 0.1:
            continue
        lhs = riemann_zeta(s, a) - riemann_zeta(s, a + 1.0)
        assert _rel(lhs, a ** (-s)) < 1e-10, (s, a)
        checked += 1
    print(f"✓ Recurrence holds at {checked} random points")

    for s in (-3.0, -2.0, 2.0, 3.0, 4.0):
        lhs = riemann_zeta(s, 0.5)
        rhs = (2.0 ** s - 1.0) * riemann_zeta(s)
        assert abs(lhs - rhs) <= 1e-12 * max(abs(rhs), 1e-300) or abs(lhs - rhs) < 1e-15
    print("✓ Duplication formula zeta(s, 1/2) = (2^s - 1) zeta(s)")

    return True


def test_zeta_derivatives():
    """Test zeta'(0), zeta'(-1) and the Euler-Maclaurin derivative."""
    print("\n" + "="*50)
    print("Testing Zeta Derivatives")
    print("="*50)

    assert riemann_zeta_deriv(0.0) == -0.5 * math.log(2 * math.pi)
    assert riemann_zeta_deriv(0.0) == riemann_zeta_deriv(0.0)
    print(f"✓ zeta'(0) = {riemann_zeta_deriv(0.0):.10f}")

    assert abs(riemann_zeta_deriv(-1.0) - (-0.1654211437)) < 1e-10
    assert abs(log_glaisher() - 0.2487544770) < 1e-10
    print(f"✓ zeta'(-1) = {riemann_zeta_deriv(-1.0):.10f}")

    # zeta'(2) = -0.9375482543...
    assert abs(riemann_zeta_deriv(2.0) + 0.9375482543158437) < 1e-11
    # d/ds zeta(s, a) at s=0 is log Gamma(a) - log(2 pi)/2
    for a in (0.5, 1.5, 2.7):
        expected = math.lgamma(a) - 0.5 * math.log(2 * math.pi)
        assert abs(hurwitz_zeta_deriv(0.0, a) - expected) < 1e-12
    print("✓ Hurwitz derivative matches Lerch's formula")

    with pytest.raises(UnsupportedConfigurationError):
        riemann_zeta_deriv(25.0)
    print("✓ Out-of-range derivative rejected")

    return True


def _barnes_brute_force(s: float, a: float, terms: int = 20000) -> float:
    """Sum over N of (N+1)(a+N)^-s with an Euler-Maclaurin tail."""
    n = np.arange(terms, dtype=float)
    head = math.fsum(((n + 1.0) * (a + n) ** (-s)).tolist())
    x = a + terms
    integral = x ** (2 - s) / (s - 2) + (1 - a) * x ** (1 - s) / (s - 1)
    f_m = (terms + 1.0) * x ** (-s)
    df_m = x ** (-s) - s * (terms + 1.0) * x ** (-s - 1)
    return head + integral + 0.5 * f_m - df_m / 12.0


def test_barnes_zeta():
    """Test the Barnes double zeta function."""
    print("\n" + "="*50)
    print("Testing Barnes Double Zeta")
    print("="*50)

    assert _rel(barnes_zeta2(4.0, 1.0), 1.2020569031595942) < 1e-12
    print(f"✓ zeta_2(4, 1) = zeta(3) = {barnes_zeta2(4.0, 1.0):.10f}")

    for s in (3.0, 4.0):
        for a in (0.5, 1.0, 1.5, 2.0):
            assert _rel(barnes_zeta2(s, a), _barnes_brute_force(s, a)) < 1e-8, (s, a)
    print("✓ Matches tail-corrected direct double sum")

    eps = 1e-6
    residue = 0.5 * eps * (barnes_zeta2(2.0 + eps, 1.5) - barnes_zeta2(2.0 - eps, 1.5))
    assert abs(residue - 1.0) < 1e-5
    print(f"✓ Residue at s = 2 is {residue:.8f}")

    step = 1e-5
    numeric = (barnes_zeta2(0.3 + step, 0.5) - barnes_zeta2(0.3 - step, 0.5)) / (2 * step)
    assert abs(numeric - barnes_zeta2_deriv(0.3, 0.5)) < 1e-8
    print("✓ Analytic derivative matches central difference")

    with pytest.raises(PoleError):
        barnes_zeta2(2.0, 0.5)
    return True


def test_constants():
    """Test Euler's constant and the Bernoulli numbers."""
    print("\n" + "="*50)
    print("Testing Basic Constants")
    print("="*50)

    constants = basic_constants()
    assert constants.bernoulli[0] == 1
    assert constants.bernoulli[1] == Fraction(-1, 2)
    assert constants.bernoulli[2] == Fraction(1, 6)
    assert constants.bernoulli[4] == Fraction(-1, 30)
    assert constants.bernoulli[20] == Fraction(-174611, 330)
    assert all(constants.bernoulli[k] == 0 for k in range(3, 21, 2))
    print("✓ Bernoulli numbers exact")

    assert bernoulli_at_half(2) == Fraction(-1, 12)
    print("✓ B_2(1/2) = -1/12")

    # Harmonic partial sum with Euler-Maclaurin correction
    n = 1000
    harmonic = math.fsum(1.0 / k for k in range(1, n + 1))
    gamma = harmonic - math.log(n) - 1.0 / (2 * n) + 1.0 / (12 * n ** 2) - 1.0 / (120 * n ** 4)
    assert abs(constants.gamma_euler - gamma) < 1e-12
    assert abs(constants.gamma_euler - 0.5772156649) < 1e-10
    assert abs(constants.log2 - 0.693147180560) < 1e-12
    print(f"✓ gamma = {constants.gamma_euler:.10f}")

    with pytest.raises(ValidationError):
        PrecisionConfig(abs_tol=0.0)
    print("✓ PrecisionConfig validation")
    return True


def test_bessel_values():
    """Test Bessel J evaluation."""
    print("\n" + "="*50)
    print("Testing Bessel J")
    print("="*50)

    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert abs(bessel_j(0, 2.4048255577)) < 1e-10
    assert abs(bessel_j_derivative(0, 1.3) + bessel_j(1, 1.3)) < 1e-14
    print("✓ Special values and J_0' = -J_1")

    with pytest.raises(ValidationError):
        bessel_j(250, 1.0)
    with pytest.raises(ValidationError):
        bessel_j(1, 2e4)
    print("✓ Range validation")
    return True


def test_bessel_zeros():
    """Test certified zeros of J_m and J'_m."""
    print("\n" + "="*50)
    print("Testing Bessel Zeros")
    print("="*50)

    assert abs(bessel_j_zeros(0, ZeroKind.FUNCTION, 1)[0] - 2.4048255577) < 1e-10
    assert abs(bessel_j_zeros(1, ZeroKind.FUNCTION, 1)[0] - 3.8317059702) < 1e-10
    print("✓ First zeros of J_0 and J_1")

    first = bessel_j_zeros(0, ZeroKind.DERIVATIVE, 1)[0]
    assert abs(first - 3.8317059702) < 1e-10
    print("✓ J_0' skips the zero at the origin")

    for m in (0, 1, 5, 20):
        zeros = bessel_j_zeros(m, ZeroKind.FUNCTION, 40)
        assert np.all(np.diff(zeros) > 0)
        assert np.max(np.abs(special.jv(m, zeros))) < 1e-9
        if m <= 5:
            gaps = np.diff(zeros[20:])
            assert np.all(np.abs(gaps - math.pi) < 0.01 * math.pi)
        dzeros = bessel_j_zeros(m, ZeroKind.DERIVATIVE, 40)
        assert np.max(np.abs(special.jvp(m, dzeros))) < 1e-9
    print("✓ Residuals, ordering and asymptotic spacing")

    for m in (0, 1, 3, 12):
        assert np.allclose(bessel_j_zeros(m, ZeroKind.FUNCTION, 25), special.jn_zeros(m, 25),
                           rtol=0, atol=1e-10)
        assert np.allclose(bessel_j_zeros(m, ZeroKind.DERIVATIVE, 25), special.jnp_zeros(m, 25),
                           rtol=0, atol=1e-10)
    below = bessel_j_zeros_below(1, ZeroKind.DERIVATIVE, 30.0)
    reference = special.jnp_zeros(1, 20)
    assert np.allclose(below, reference[reference <= 30.0], rtol=0, atol=1e-10)
    print("✓ Agreement with scipy's jn_zeros and jnp_zeros")

    for m in range(6):
        lower = bessel_j_zeros(m, ZeroKind.FUNCTION, 10)
        upper = bessel_j_zeros(m + 1, ZeroKind.FUNCTION, 10)
        assert np.all(lower < upper)
        assert np.all(upper[:-1] < lower[1:])
    print("✓ Interlacing j_{m,k} < j_{m+1,k} < j_{m,k+1}")

    below = bessel_j_zeros_below(3, ZeroKind.FUNCTION, 50.0)
    assert below[-1] <= 50.0
    assert bessel_j_zeros(3, ZeroKind.FUNCTION, len(below) + 1)[-1] > 50.0
    assert len(bessel_j_zeros_below(60, ZeroKind.FUNCTION, 50.0)) == 0
    print(f"✓ {len(below)} zeros of J_3 below 50")
    return True


def test_legendre():
    """Test associated Legendre functions of real degree."""
    print("\n" + "="*50)
    print("Testing Legendre Functions")
    print("="*50)

    assert abs(legendre_p(-0.5, 0.5, 0.0) - math.sqrt(2 / math.pi)) < 1e-14
    print("✓ P^{-1/2}_{1/2}(0) = sqrt(2/pi)")

    # Ferrers P^{-1}_nu from scipy's integer-order lpmv
    for n in (0, 1, 2):
        nu = n + 1.0
        for x in (-0.7, 0.1, 0.85):
            expected = -math.gamma(nu) / math.gamma(nu + 2) * special.lpmv(1, nu, x)
            assert abs(legendre_p(-1.0, nu, x) - expected) < 1e-13
    print("✓ Matches scipy lpmv for integer order")

    # Non-terminating case via the defining series
    value = legendre_p(-0.5, 0.3, 0.2)
    z = 0.4
    terms, term = [], 1.0
    for j in range(200):
        terms.append(term)
        term *= (-0.3 + j) * (1.3 + j) / ((1.5 + j) * (j + 1)) * z
    series = (0.8 / 1.2) ** 0.25 / math.gamma(1.5) * math.fsum(terms)
    assert abs(value - series) < 1e-13
    print("✓ Non-terminating series")

    for k in (0.5, 1.0, 1.5):
        limit = 1.0 / (2 ** k * math.gamma(k + 1))
        for n in (0, 1, 2):
            for x in (1 - 1e-8, -(1 - 1e-8)):
                ratio = legendre_p(-k, n + k, x) / (1 - x * x) ** (k / 2)
                sign = (-1) ** n if x < 0 else 1
                assert _rel(ratio, sign * limit) < 1e-6
            theta = 1e-6
            ratio = legendre_p_theta(-k, n + k, theta) / math.sin(theta) ** k
            assert _rel(ratio, limit) < 1e-10
    print("✓ Pole limits")

    for k in (0.5, 1.0, 1.5):
        for n in (0, 1, 2, 3):
            for x in (0.2, 0.55, 0.9):
                assert abs(legendre_p(-k, n + k, -x) - (-1) ** n * legendre_p(-k, n + k, x)) < 1e-13
    print("✓ Parity under x -> -x")

    with pytest.raises(ValidationError):
        legendre_p(-1.0, 2.0, 1.0)
    with pytest.raises(ValidationError):
        legendre_p(0.5, 2.0, 0.3)
    return True


def run_all_tests():
    """Run all special-function tests."""
    print("\n" + "="*60)
    print("SPECIAL FUNCTION KERNEL - TEST SUITE")
    print("="*60)

    tests = [
        ("Zeta Classical Values", test_zeta_classical_values),
        ("Zeta Identities", test_zeta_identities),
        ("Zeta Derivatives", test_zeta_derivatives),
        ("Barnes Zeta", test_barnes_zeta),
        ("Constants", test_constants),
        ("Bessel Values", test_bessel_values),
        ("Bessel Zeros", test_bessel_zeros),
        ("Legendre Functions", test_legendre),
    ]

    results = []
    for name, test_func in tests:
        try:
            result = test_func()
            results.append((name, result))
        except Exception as e:
            print(f"\n✗ {name} FAILED: {str(e)}")
            results.append((name, False))

    print("\n" + "="*60)
    print("TEST SUMMARY")
    print("="*60)

    passed = sum(1 for _, r in results if r)
    total = len(results)

    for name, result in results:
        status = "✓ PASSED" if result else "✗ FAILED"
        print(f"  {name}: {status}")

    print(f"\nTotal: {passed}/{total} tests passed")
    return passed == total


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
