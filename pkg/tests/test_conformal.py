"""
Test Script for Conformal Transformations
Validates the stereographic factor, cocycle quadrature and the ND disc effective action
"""

import sys
import os
import math
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from src.conformal import (
    ConformalPair, stereographic_omega, stereographic_pair, zero_pair, cocycle_eval,
    cocycle_breakdown, nd_disc_effective_action,
)
from src.utils.errors import ValidationError

LOG2 = math.log(2.0)


def test_stereographic_omega():
    """Test the hemisphere to disc conformal factor."""
    print("\n" + "="*50)
    print("Testing Stereographic Factor")
    print("="*50)

    omega, normal = stereographic_omega(1.0)
    assert abs(omega) < 1e-15 and normal == -1.0
    assert abs(stereographic_omega(0.0)[0] - LOG2) < 1e-16
    print("✓ omega(1) = 0, omega(0) = log 2")

    pair = stereographic_pair()
    assert all(abs(v) < 1e-15 for v in pair.corner_values())
    theta = np.linspace(0.05, 1.5, 7)
    r = np.tan(0.5 * theta)
    for t, radius in zip(theta, r):
        assert abs(pair.omega(np.array([t]))[0] - stereographic_omega(float(radius))[0]) < 1e-14
    print("✓ omega_k = 0 at the ND points; theta and r forms agree")

    with pytest.raises(ValidationError):
        stereographic_omega(1.5)
    return True


def test_cocycle_values():
    """Test cocycle quadrature against closed forms."""
    print("\n" + "="*50)
    print("Testing Cocycle Values")
    print("="*50)

    pair = stereographic_pair()
    dirichlet = cocycle_eval(pair, "allD")
    neumann = cocycle_eval(pair, "allN_nozero")
    mixed = cocycle_eval(pair, "ND")
    assert abs(dirichlet - (LOG2 / 6 - 1.0 / 3)) < 1e-6
    assert abs(neumann - (2 * LOG2 / 3 + 1.0 / 6)) < 1e-6
    assert abs(mixed - 0.5 * (dirichlet + neumann)) < 1e-15
    assert abs(mixed - 0.2054780) < 1e-6
    print(f"✓ W_D = {dirichlet:.7f}, W_N = {neumann:.7f}, W_ND = {mixed:.7f}")

    parts = cocycle_breakdown(pair, "allN_nozero")
    assert abs(parts.zero_mode - 0.5 * LOG2) < 1e-14
    assert abs(parts.normal - 0.25) < 1e-14
    print("✓ Zero-mode and normal-derivative parts")

    for layout in ("allD", "allN_nozero", "ND"):
        assert abs(cocycle_eval(zero_pair(), layout)) < 1e-14
    print("✓ omega = 0 gives zero for every layout")

    shifted = ConformalPair(omega=lambda t: np.full_like(t, 0.1), omega_theta=np.zeros_like,
                            box_omega=np.zeros_like)
    with pytest.raises(ValidationError):
        cocycle_eval(shifted, "ND")
    with pytest.raises(ValidationError):
        cocycle_eval(pair, "allR")
    return True


def test_disc_effective_action():
    """Test the two routes to the ND disc effective action."""
    print("\n" + "="*50)
    print("Testing ND Disc Effective Action")
    print("="*50)

    result = nd_disc_effective_action()
    assert abs(result.hemisphere_action - 0.0711706) < 1e-7
    assert abs(result.closed_form - 0.2766486) < 1e-6
    assert result.difference < 1e-6
    print(f"✓ Closed form {result.closed_form:.7f}, via cocycle {result.via_cocycle:.7f}")

    assert abs(result.printed_form - 0.1933154) < 1e-6
    assert abs(result.to_record()["printed_offset"] + 1.0 / 12.0) < 1e-15
    print("✓ -1/24 form reported, 1/12 below both routes")
    return True


def run_all_tests():
    """Run all conformal tests."""
    print("\n" + "="*60)
    print("CONFORMAL TRANSFORMATIONS - TEST SUITE")
    print("="*60)

    tests = [
        ("Stereographic Omega", test_stereographic_omega),
        ("Cocycle Values", test_cocycle_values),
        ("Disc Effective Action", test_disc_effective_action),
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
