"""
Test Script for Casimir Energies
Validates the finite-part, perturbative and exact-integral routes and the C_1 bridge
"""

import sys
import os
import math
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest
from scipy import integrate

from src.casimir import (
    casimir_finite_part, casimir_perturbative, casimir_exact_integral, exact_correction_integral,
    c1_from_casimir, casimir_from_c1, functional_relation_probe, sqrt_coefficient_fit,
    small_h_slope, CasimirRoute,
)
from src.coeffs import c1_geometry, load_geometry
from src.specfun import EULER_GAMMA, LOG2
from src.utils.errors import PoleError, ValidationError

PI = math.pi


def _cas3(h):
    return 1.0 / 48 - h / (2 * PI) * (EULER_GAMMA - 1 + 2 * LOG2)


def _enr1(h):
    return -1.0 / 24 - h / (2 * PI) * (EULER_GAMMA - 1)


def test_standard_energies():
    """Test the h = 0 energies by finite part and perturbation theory."""
    print("\n" + "="*50)
    print("Testing Standard Casimir Energies")
    print("="*50)

    for pair, value in (("DD", -1 / 24), ("NN", -1 / 24), ("DN", 1 / 48), ("ND", 1 / 48)):
        result = casimir_finite_part(pair)
        assert result.route == CasimirRoute.FINITE_PART
        assert abs(result.energy - value) < 1e-8, pair
        assert abs(casimir_perturbative(pair).energy - value) < 1e-15
    print("✓ E(D,D) = E(N,N) = -1/24, E(D,N) = 1/48")

    assert abs(casimir_finite_part("DR", 0.0).energy - 1 / 48) < 1e-8
    assert abs(casimir_finite_part("NR", 0.0).energy + 1 / 24) < 1e-8
    assert abs(casimir_exact_integral("NR", 0.0).energy + 1 / 24) < 1e-12
    print("✓ Robin pairs at h = 0 reduce to the standard values")

    with pytest.raises(ValidationError):
        casimir_finite_part("DD", 0.1)
    with pytest.raises(ValidationError):
        casimir_finite_part("DR", 0.1, count=50)
    with pytest.raises(ValidationError):
        casimir_finite_part("DR", 1.5)
    return True


def test_robin_finite_part():
    """Test small-h Robin energies against the first-order formulas."""
    print("\n" + "="*50)
    print("Testing Robin Finite Parts")
    print("="*50)

    h = 1e-3
    dr = casimir_finite_part("DR", h)
    assert abs(dr.energy - _cas3(h)) < 1e-6
    assert abs(dr.residue + h / (2 * PI)) < 1e-8
    print(f"✓ E(D,R) at h={h}: {dr.energy:.10f} vs {_cas3(h):.10f}")

    nr = casimir_finite_part("NR", h)
    assert abs(nr.energy - _enr1(h)) < 1e-6
    assert abs(casimir_perturbative("NR", h).energy - _enr1(h)) < 1e-15
    print("✓ E(N,R) for h > 0 matches the first-order formula")

    nr_neg = casimir_finite_part("NR", -h)
    expected = _enr1(-h) + 0.5 * math.sqrt(h / PI)
    assert abs(nr_neg.energy - expected) < 2e-5
    assert abs(casimir_perturbative("NR", -h).energy - expected) < 1e-15
    print("✓ E(N,R) for h < 0 carries (1/2) sqrt(-h/pi)")

    strong = casimir_finite_part("DR", 0.5)
    assert "excluded" in " ".join(strong.notes)
    assert strong.details["c0"] == 1.5
    print("✓ Imaginary mode excluded for h >= 1/pi")
    return True


def test_exact_integral():
    """Test the exact-integral energies for h <= 0."""
    print("\n" + "="*50)
    print("Testing Exact Casimir Integral")
    print("="*50)

    integral, error = exact_correction_integral("DR", 0.0)
    # log coth(pi k) = sum over odd n of 2 e^(-2 pi n k)/n, integrating to pi/8
    assert abs(integral - 1.0 / 16.0) < 1e-10
    assert error < 1e-9
    reference, _ = integrate.quad(lambda k: math.log(1.0 / math.tanh(PI * k)), 0, np.inf)
    assert abs(reference - PI / 8) < 1e-7
    offset = casimir_exact_integral("DR", 0.0).energy - 1 / 48
    assert abs(offset) < 1e-10
    print("✓ D,R integral at h = 0 is 1/16 and cancels the -1/16: E(D,R) -> E(D,N)")

    small = casimir_exact_integral("NR", -1e-8).energy + 1 / 24
    assert abs(small - 0.5 * math.sqrt(1e-8 / PI)) < 1e-6
    print("✓ N,R correction -> (1/2) sqrt(-h/pi) as h -> 0")

    with pytest.raises(PoleError):
        casimir_exact_integral("NR", 0.01)
    with pytest.raises(ValidationError):
        casimir_exact_integral("DD", -0.01)
    return True


def test_c1_bridge():
    """Test the energy to hemisphere C_1 map."""
    print("\n" + "="*50)
    print("Testing C1 From Casimir")
    print("="*50)

    assert abs(c1_from_casimir(1 / 48) + PI / 3) < 1e-14
    assert abs(c1_from_casimir(-1 / 24) - PI / 6) < 1e-14
    assert abs(c1_from_casimir(1 / 48) - c1_geometry(load_geometry("hemisphere-DN"))) < 1e-14
    assert abs(c1_from_casimir(-1 / 24) - c1_geometry(load_geometry("hemisphere-NN"))) < 1e-14
    assert abs(c1_from_casimir(-1 / 24) - c1_geometry(load_geometry("hemisphere-DD"))) < 1e-14
    print("✓ Standard energies map to hemisphere C1 -pi/3 and pi/6")

    for h in (1e-3, -2e-3, 0.05):
        assert abs(c1_from_casimir(_cas3(h), h) - (-PI / 3 + 8 * h * LOG2)) < 1e-14
        assert abs(casimir_from_c1(c1_from_casimir(0.123, h), h) - 0.123) < 1e-15
    print("✓ E(D,R) maps to -pi/3 + 8 h log 2; inverse roundtrips")
    return True


def test_small_h_structure():
    """Test the sqrt(-h) coefficient, the slope report and the functional-relation probe."""
    print("\n" + "="*50)
    print("Testing Small-h Structure")
    print("="*50)

    fit = sqrt_coefficient_fit()
    assert fit.relative_error < 0.02
    print(f"✓ sqrt(-h) coefficient {fit.sqrt_coefficient:.6f} vs 1/(2 sqrt pi)")

    slope = small_h_slope("DR")
    assert math.isfinite(slope["exact_slope"])
    assert set(slope) >= {"perturbative_slope", "relative_difference", "agrees"}
    print(f"✓ D,R slope reported (relative difference {slope['relative_difference']:.3f})")

    grid = [-1e-3, -2e-3, -4e-3, -8e-3]
    report = functional_relation_probe("NR", grid, threads=2)
    assert {c.scale for c in report.checks} == {2.0, 4.0}
    assert len(report.checks) == 5
    assert all(math.isfinite(c.deviation) for c in report.checks)
    assert all(abs(h * f) < 0.1 for h, f in zip(report.h_grid, report.f_values))
    again = functional_relation_probe("NR", grid, threads=1)
    assert again.to_record() == report.to_record()
    print(f"✓ Probe deterministic; max deviation {report.max_deviation:.3g}")

    with pytest.raises(ValidationError):
        functional_relation_probe("NR", grid[:3])
    with pytest.raises(ValidationError):
        functional_relation_probe("NR", [-1e-3, -3e-3, -5e-3, -7e-3])
    with pytest.raises(ValidationError):
        functional_relation_probe("DR", [-1e-3, -2e-3, -4e-3, 0.01])
    return True


def run_all_tests():
    """Run all Casimir tests."""
    print("\n" + "="*60)
    print("CASIMIR ENERGIES - TEST SUITE")
    print("="*60)

    tests = [
        ("Standard Energies", test_standard_energies),
        ("Robin Finite Part", test_robin_finite_part),
        ("Exact Integral", test_exact_integral),
        ("C1 Bridge", test_c1_bridge),
        ("Small-h Structure", test_small_h_structure),
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
