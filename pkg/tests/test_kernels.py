"""
Test Script for Kernel Traces and Fits
Validates heat/cylinder traces, the hemisphere factorization and asymptotic coefficient extraction
"""

import sys
import os
import math
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from src.spectra import (
    Spectrum, BoundaryCondition, IntervalProblem, HalfDiscProblem, HemisphereProblem,
    wavenumbers, half_disc_spectrum, hemisphere_spectrum,
)
from src.kernels import (
    TraceKind, TraceSamples, trace, hemisphere_cylinder_factorized, interval_cylinder_trace,
    ExpansionBasis, fit_expansion, log_detection,
)
from src.utils.errors import ValidationError, IllConditionedError, InsufficientCutoffError
from src.utils.helpers import log_spaced_grid

D = BoundaryCondition.dirichlet()
N = BoundaryCondition.neumann()

SQRT_PI = math.sqrt(math.pi)

# t^(-1/2), constant and t^(1/2) coefficients of the half-disc heat traces
HALF_DISC_TERMS = {
    "DD": (-(2 + math.pi) / (8 * SQRT_PI), 5 / 24, (math.pi + 16) / (256 * SQRT_PI)),
    "ND": ((2 - math.pi) / (8 * SQRT_PI), -1 / 24, (math.pi - 16) / (256 * SQRT_PI)),
    "NN": ((2 + math.pi) / (8 * SQRT_PI), 5 / 24, (5 * math.pi + 48) / (256 * SQRT_PI)),
    "DN": (-(2 - math.pi) / (8 * SQRT_PI), -1 / 24, (5 * math.pi - 48) / (256 * SQRT_PI)),
}


def test_elementary_traces():
    """Test traces with closed forms."""
    print("\n" + "="*50)
    print("Testing Elementary Traces")
    print("="*50)

    single = Spectrum(eigenvalues=np.array([1.0]), degeneracies=np.array([1]), cutoff=math.inf)
    samples = trace(single, [1.0])
    assert abs(samples.k_values[0] - math.exp(-1.0)) < 1e-16
    assert samples.truncation_bound == 0.0
    print(f"✓ K(1) = {samples.k_values[0]:.7f}")

    dn = wavenumbers(IntervalProblem(D, N), 60).to_spectrum()
    value = trace(dn, [1.0], kind=TraceKind.CYLINDER).k_values[0]
    assert abs(value - math.exp(-0.5) / (1 - math.exp(-1.0))) < 1e-13
    assert abs(value - 0.9595174) < 1e-7
    print(f"✓ (D,N) cylinder T(1) = {value:.7f}")

    nn = wavenumbers(IntervalProblem(N, N), 60).to_spectrum()
    value = trace(nn, [50.0]).k_values[0]
    assert abs(value - 1.0) < 1e-15
    print("✓ Zero mode contributes 1 at every t")

    dd = wavenumbers(IntervalProblem(D, D), 200).to_spectrum()
    t_grid = [0.1, 0.3, 1.0, 3.0]
    direct = trace(dd, t_grid).k_values
    for t, value in zip(t_grid, direct):
        # Jacobi imaginary transformation of theta_3
        n = np.arange(-20, 21)
        theta3 = math.sqrt(math.pi / t) * math.fsum(np.exp(-math.pi ** 2 * n ** 2 / t).tolist())
        assert abs(value - 0.5 * (theta3 - 1.0)) < 1e-12
    print("✓ (D,D) heat trace matches the theta-function form")
    return True


def test_trace_checks():
    """Test tail certification and sample records."""
    print("\n" + "="*50)
    print("Testing Trace Certification")
    print("="*50)

    spectrum = half_disc_spectrum(HalfDiscProblem.from_pair("DD"), 200.0)
    with pytest.raises(InsufficientCutoffError):
        trace(spectrum, [0.005, 0.01])
    print("✓ Small cutoff at small t is rejected")

    samples = trace(spectrum, [0.5, 1.0, 2.0])
    assert samples.is_monotone()
    assert samples.truncation_bound < 1e-8 * samples.k_values.min()
    restored = TraceSamples.from_record(samples.to_record())
    assert np.array_equal(restored.t_values, samples.t_values)
    assert restored.kind == TraceKind.HEAT
    print("✓ Certified samples restore from their record")

    with pytest.raises(ValidationError):
        trace(spectrum, [0.0, 1.0])
    return True


def test_half_disc_partial_sum():
    """Test the DD heat trace against its leading expansion."""
    print("\n" + "="*50)
    print("Testing Half-Disc Partial Sum")
    print("="*50)

    spectrum = half_disc_spectrum(HalfDiscProblem.from_pair("DD"), 8000.0)
    t = 0.05
    value = trace(spectrum, [t]).k_values[0]
    b_half, b_zero, b_one_half = HALF_DISC_TERMS["DD"]
    partial = 1 / (8 * t) + b_half / math.sqrt(t) + b_zero + b_one_half * math.sqrt(t)
    assert abs(value - partial) < 10 * t ** 1.5
    print(f"✓ K_DD(0.05) = {value:.6f}, partial sum {partial:.6f}")
    return True


def test_factorization():
    """Test the hemisphere cylinder factorization."""
    print("\n" + "="*50)
    print("Testing Hemisphere Factorization")
    print("="*50)

    value = hemisphere_cylinder_factorized(0.0, "D", 1.0)
    expected = math.exp(-0.5) / (1 - math.exp(-1.0)) / (2 * math.sinh(0.5))
    assert abs(value - expected) < 1e-14
    assert abs(value - 0.9206736) < 1e-7
    print(f"✓ (D, h=0) T(1) = {value:.7f}")

    for length, t in ((100.0, 0.1), (math.pi, 0.01), (0.5, 0.02)):
        value = interval_cylinder_trace(IntervalProblem(N, N, length=length), t)
        expected = -1.0 / math.expm1(-math.pi * t / length)
        assert abs(value - expected) < 1e-12 * expected, (length, t)
    print("✓ Interval cylinder trace sums enough roots on long intervals")

    with pytest.raises(InsufficientCutoffError):
        interval_cylinder_trace(IntervalProblem(D, N), 1e-4)
    assert abs(interval_cylinder_trace(IntervalProblem(N, N), 1e-4, count=200) -
               (1 + sum(math.exp(-m * 1e-4) for m in range(1, 201)))) < 1e-9
    print("✓ Too small t without an explicit count is rejected")

    t_grid = [0.5, 1.0, 2.0, 5.0]
    for bc0 in ("D", "N"):
        for h in (0.0, 0.3, -0.3):
            spectrum = hemisphere_spectrum(HemisphereProblem(bc0, h), 1.0e4)
            direct = trace(spectrum, t_grid, kind=TraceKind.CYLINDER).k_values
            for t, value in zip(t_grid, direct):
                assert abs(value - hemisphere_cylinder_factorized(h, bc0, t)) < 1e-12, (bc0, h, t)
    print("✓ Direct double sum equals T_I/(2 sinh(t/2)) to 1e-12")
    return True


def test_synthetic_fits():
    """Test exact recovery, pinning and conditioning."""
    print("\n" + "="*50)
    print("Testing Synthetic Fits")
    print("="*50)

    t = log_spaced_grid(0.005, 0.1, 60)
    samples = TraceSamples(t, 1 / (8 * t) - 1 / (4 * np.sqrt(t)) + 5 / 24, TraceKind.HEAT)
    basis = ExpansionBasis((-1, -0.5, 0))
    fit = fit_expansion(samples, basis)
    for exponent, expected in ((-1, 0.125), (-0.5, -0.25), (0, 5 / 24)):
        assert abs(fit.coefficient(exponent) - expected) < 1e-10
    print("✓ Recovered (0.125, -0.25, 0.2083333)")

    values = 0.5 / t + 0.1 + 0.02 * np.log(t) + 0.3 * t
    samples = TraceSamples(t, values, TraceKind.HEAT)
    fit = fit_expansion(samples, ExpansionBasis((-1, 0, 1), (0,)), pinned={-1: 0.5})
    assert abs(fit.coefficient(0) - 0.1) < 1e-9
    assert abs(fit.coefficient(0, log=True) - 0.02) < 1e-9
    assert abs(fit.coefficient(1) - 0.3) < 1e-9
    assert fit.pinned == {-1.0: 0.5}
    print("✓ Pinned fit with a log column")

    auto = fit_expansion(samples, ExpansionBasis((-1, 0, 1), (0,)), window="auto")
    assert auto.window == (float(t[0]), float(t[-1]))
    print("✓ Auto window keeps the full range on exact data")

    with pytest.raises(IllConditionedError):
        fit_expansion(samples, basis, condition_limit=1.5)
    with pytest.raises(ValidationError):
        ExpansionBasis((0,), (-1,))
    with pytest.raises(ValidationError):
        ExpansionBasis((0, -1))
    with pytest.raises(ValidationError):
        fit_expansion(samples.window(0.005, 0.006), basis)
    print("✓ Ill-conditioned, invalid and undersampled fits rejected")
    return True


def test_half_disc_fits():
    """Test peel-off extraction of the half-disc constants and t^(1/2) terms."""
    print("\n" + "="*50)
    print("Testing Half-Disc Coefficient Extraction")
    print("="*50)

    t = log_spaced_grid(0.005, 0.08, 60)
    basis = ExpansionBasis((-1, -0.5, 0, 0.5, 1, 1.5, 2))
    for pair, (b_half, b_zero, b_one_half) in HALF_DISC_TERMS.items():
        spectrum = half_disc_spectrum(HalfDiscProblem.from_pair(pair), 8000.0)
        fit = fit_expansion(trace(spectrum, t), basis, pinned={-1: 0.125, -0.5: b_half})
        assert abs(fit.coefficient(0) - b_zero) < 5e-3, (pair, fit.coefficient(0))
        assert abs(fit.coefficient(0.5) / b_one_half - 1.0) < 0.1, (pair, fit.coefficient(0.5))
        print(f"✓ {pair}: constant {fit.coefficient(0):.5f}, t^1/2 {fit.coefficient(0.5):.5f}")
    return True


def test_log_detection():
    """Test detection of the t^0 log t term on the Robin hemisphere."""
    print("\n" + "="*50)
    print("Testing Log-Term Detection")
    print("="*50)

    t = log_spaced_grid(0.005, 0.1, 60)
    basis = ExpansionBasis((-1, -0.5, 0, 1, 2))

    spectrum = hemisphere_spectrum(HemisphereProblem("D", 0.5), 8000.0)
    report = log_detection(trace(spectrum, t), basis, (0, 1), pinned={-1: 0.5})
    coefficient = report.with_log.coefficient(0, log=True)
    assert abs(coefficient / (-0.5 / (2 * math.pi)) - 1.0) < 0.1
    assert report.ratio > 10 and report.raw_ratio > 10
    assert report.detected
    print(f"✓ h=0.5: log coefficient {coefficient:.5f}, ratio {report.ratio:.3g}")

    spectrum = hemisphere_spectrum(HemisphereProblem("D", 0.0), 8000.0)
    report = log_detection(trace(spectrum, t), basis, (0, 1), pinned={-1: 0.5})
    assert abs(report.with_log.coefficient(0, log=True)) < 1e-3
    assert report.ratio < 2
    assert not report.detected
    print(f"✓ h=0: no log term, ratio {report.ratio:.3g}")
    return True


def run_all_tests():
    """Run all kernel tests."""
    print("\n" + "="*60)
    print("KERNEL TRACES AND FITS - TEST SUITE")
    print("="*60)

    tests = [
        ("Elementary Traces", test_elementary_traces),
        ("Trace Certification", test_trace_checks),
        ("Half-Disc Partial Sum", test_half_disc_partial_sum),
        ("Hemisphere Factorization", test_factorization),
        ("Synthetic Fits", test_synthetic_fits),
        ("Half-Disc Fits", test_half_disc_fits),
        ("Log Detection", test_log_detection),
    ]

    results = []
    for name, test_func in tests:
        try:
            results.append((name, test_func()))
        except Exception as e:
            print(f"\n✗ {name} FAILED: {str(e)}")
            results.append((name, False))

    print("\n" + "="*60)
    print("TEST SUMMARY")
    print("="*60)
    passed = sum(1 for _, r in results if r)
    for name, result in results:
        print(f"  {name}: {'✓ PASSED' if result else '✗ FAILED'}")
    print(f"\nTotal: {passed}/{len(results)} tests passed")
    return passed == len(results)


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
