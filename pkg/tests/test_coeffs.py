"""
Test Script for Heat-Kernel Coefficients
Validates wedge and geometry C_1 values, corner weights, the cylinder/heat bridge and log terms
"""

import sys
import os
import math
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from src.coeffs import (
    Piece, GeometrySpec, c1_wedge, c1_geometry, c32_corner_structure, load_geometry,
    preset_names, UNDETERMINED, CoefficientTable, bridge_a_to_b, bridge_b_to_a,
    robin_interval_bk, interval_log_series, hemisphere_log_series, log_closed_forms,
    is_determined, lune_geometry,
)
from src.kernels import TraceKind
from src.utils.errors import ValidationError, UnsupportedConfigurationError, MissingInputError

PI = math.pi


def test_wedge_coefficients():
    """Test the wedge formulas and the angle-doubling identity."""
    print("\n" + "="*50)
    print("Testing Wedge Coefficients")
    print("="*50)

    assert c1_wedge(PI, "DD") == 0.0
    assert abs(c1_wedge(PI, "DN") + PI / 4) < 1e-15
    assert abs(c1_wedge(PI / 2, "DD") - PI / 4) < 1e-15
    assert abs(c1_wedge(PI / 2, "DN") + PI / 4) < 1e-15
    assert c1_wedge(1.0, "ND") == c1_wedge(1.0, "DN")
    print("✓ Spot values")

    for beta in np.linspace(0.1, PI, 20):
        lhs = c1_wedge(beta, "DN")
        rhs = c1_wedge(2 * beta, "DD") - c1_wedge(beta, "DD")
        assert abs(lhs - rhs) < 1e-14 * max(1.0, abs(lhs))
    print("✓ C1_DN(beta) = C1_DD(2 beta) - C1_DD(beta) at 20 angles")

    with pytest.raises(ValidationError):
        c1_wedge(0.0, "DD")
    with pytest.raises(ValidationError):
        c1_wedge(1.0, "DR")
    return True


def test_geometry_presets():
    """Test C_1 of the shipped geometries."""
    print("\n" + "="*50)
    print("Testing Geometry C1")
    print("="*50)

    value = c1_geometry(load_geometry("3ball-DN"))
    assert abs(value - (8 * PI / 3 - PI ** 2 / 2)) < 1e-14
    assert abs(value - 3.4427782) < 1e-7
    print(f"✓ 3-ball hybrid C1 = {value:.7f}")

    assert abs(c1_geometry(load_geometry("square-D")) - PI) < 1e-14
    assert abs(c1_geometry(load_geometry("disc-D")) - 2 * PI / 3) < 1e-14
    print("✓ Square and disc")

    assert abs(c1_geometry(load_geometry("hemisphere-DN")) + PI / 3) < 1e-14
    assert abs(c1_geometry(load_geometry("hemisphere-DD")) - PI / 6) < 1e-14
    assert abs(c1_geometry(load_geometry("hemisphere-NN")) - PI / 6) < 1e-14
    print("✓ Hemispheres: -pi/3 (DN), pi/6 (DD, NN)")

    for pair, constant in (("DD", 5 / 24), ("ND", -1 / 24), ("NN", 5 / 24), ("DN", -1 / 24)):
        value = c1_geometry(load_geometry(f"half-disc-{pair}")) / (4 * PI)
        assert abs(value - constant) < 1e-15
    print("✓ Half-disc constant terms C1/(4 pi)")

    lune = lune_geometry(PI / 2, "DD")
    assert len(lune.corners) == 2 and lune.xi == 0.125
    assert abs(c1_geometry(lune) - 7 * PI / 12) < 1e-14
    assert abs(c1_geometry(lune_geometry(PI / 2, "ND")) + 5 * PI / 12) < 1e-14
    with pytest.raises(ValidationError):
        lune_geometry(PI / 2, "NN")
    print("✓ Lunes: 7 pi/12 (DD), -5 pi/12 (ND) at beta = pi/2")

    assert "3ball-DN" in preset_names()
    with pytest.raises(ValidationError):
        load_geometry("torus")
    return True


def test_robin_reductions():
    """Test Robin pieces and corners."""
    print("\n" + "="*50)
    print("Testing Robin Reductions")
    print("="*50)

    neumann = GeometrySpec(0.0, pieces=(Piece("D", 0.0), Piece("N", PI)),
                           corners=load_geometry("half-disc-DN").corners)
    robin = GeometrySpec(0.0, pieces=(Piece("D", 0.0), Piece("R", PI, s_integral=0.0)),
                         corners=tuple(type(c)(c.beta, "DR") for c in neumann.corners))
    assert c1_geometry(robin) == c1_geometry(neumann)
    print("✓ S = 0 Robin reproduces Neumann")

    shifted = GeometrySpec(0.0, pieces=(Piece("R", 0.0, s_integral=0.25),))
    assert c1_geometry(shifted) == -0.5
    with pytest.raises(ValidationError):
        Piece("R", 0.0)
    with pytest.raises(ValidationError):
        Piece("D", 0.0, s_integral=1.0)
    print("✓ -2 int S term and Robin piece validation")
    return True


def test_corner_structure():
    """Test right-angle C_{3/2} corner weights."""
    print("\n" + "="*50)
    print("Testing C3/2 Corner Weights")
    print("="*50)

    assert c32_corner_structure("ND") == 3.0
    assert c32_corner_structure("DD") == -3.0
    assert c32_corner_structure("NN") == 9.0
    assert c32_corner_structure("DN") == -9.0
    with pytest.raises(UnsupportedConfigurationError):
        c32_corner_structure("DD", beta=PI / 3)
    print("✓ lambda(pi/2) values")
    return True


def test_bridge():
    """Test the cylinder/heat bridge."""
    print("\n" + "="*50)
    print("Testing Coefficient Bridge")
    print("="*50)

    h = 0.2
    assert abs(robin_interval_bk(h, 1) - h / math.sqrt(PI)) < 1e-16
    assert abs(robin_interval_bk(h, 2) - h ** 2 / 2) < 1e-16
    assert robin_interval_bk(0.0, 5) == 0.0
    print("✓ Robin interval b_k")

    heat = bridge_a_to_b(interval_log_series(h), d=1)
    assert abs(heat.plain(1) - h / math.sqrt(PI)) < 1e-16
    assert heat.plain(1) == pytest.approx(robin_interval_bk(h, 1), rel=1e-15)
    assert all(heat.log(k) == 0.0 for k in (1, 3, 5, 7))
    assert heat.plain(2) is UNDETERMINED
    print("✓ b_1 = h/sqrt(pi) from a'_1 = -h/pi; b'_k = 0 for odd k")

    with pytest.raises(MissingInputError):
        bridge_a_to_b(interval_log_series(h), d=1, strict=True)

    # (D,N) interval: T = 1/(2 sinh(t/2)), heat trace sqrt(pi)/(2 sqrt(t)) with no corrections
    dn = CoefficientTable(TraceKind.CYLINDER, 1)
    for k, a in ((-1, 1.0), (0, 0.0), (1, -1 / 24), (2, 0.0), (3, 7 / 5760)):
        dn.set(k, a, 0.0 if k >= 1 else None)
    heat = bridge_a_to_b(dn, d=1, strict=True)
    assert abs(heat.plain(-1) - math.sqrt(PI) / 2) < 1e-15
    assert all(heat.plain(k) == 0.0 for k in (0, 1, 2, 3))
    print("✓ (D,N) interval cylinder coefficients map to sqrt(pi)/(2 sqrt t)")

    table = hemisphere_log_series(h, order=4)
    heat = bridge_a_to_b(table, d=2)
    assert abs(heat.log(0) + h / (2 * PI)) < 1e-16
    assert abs(heat.log(2) + (h ** 3 / (6 * PI) + h / (24 * PI))) < 1e-16
    assert heat.log(1) == 0.0 and heat.log(3) == 0.0
    print("✓ Hemisphere b'_0 = -h/(2 pi), b'_2 = -(h^3/(6 pi) + h/(24 pi))")

    zeros = CoefficientTable(TraceKind.CYLINDER, 2)
    for k in range(0, 5):
        zeros.set(k, UNDETERMINED, 0.0)
    assert all(bridge_a_to_b(zeros, d=2).log(k) == 0.0 for k in range(0, 5))
    print("✓ Zero log inputs give zero log outputs")
    return True


def test_bridge_roundtrip():
    """Test a -> b -> a on every determined entry."""
    print("\n" + "="*50)
    print("Testing Bridge Roundtrip")
    print("="*50)

    rng = np.random.default_rng(7)
    table = CoefficientTable(TraceKind.CYLINDER, 2)
    for k in range(-2, 6):
        plain = UNDETERMINED if (k > 0 and k % 2) else float(rng.normal())
        table.set(k, plain, float(rng.normal()) if k >= 0 else None)
    back = bridge_b_to_a(bridge_a_to_b(table, d=2), d=2)
    compared = 0
    for k in table.indices:
        for original, restored in ((table.plain(k), back.plain(k)), (table.log(k), back.log(k))):
            if is_determined(original) and is_determined(restored):
                assert restored == pytest.approx(original, rel=1e-15, abs=1e-16)
                compared += 1
    assert compared == 11
    assert back.plain(1) is UNDETERMINED and back.plain(3) is UNDETERMINED
    print(f"✓ {compared} determined entries restored; odd a_k stay undetermined")

    with pytest.raises(ValidationError):
        CoefficientTable(TraceKind.HEAT, 2).set(-1, 0.0, 0.0)
    return True


def test_log_terms():
    """Test closed forms against the a' series."""
    print("\n" + "="*50)
    print("Testing Log Terms")
    print("="*50)

    h = 0.3
    table = interval_log_series(h, order=21)
    assert abs(table.log(1) + h / PI) < 1e-16
    assert abs(table.log(3) - h ** 3 / (6 * PI)) < 1e-16
    for t in (0.1, 1.0, 3.0):
        series = sum(table.log(k) * t ** k for k in table.indices) * math.log(t)
        assert abs(series - log_closed_forms(h, t)) < 1e-15
    print("✓ Interval a' series sums to the closed form for |h| t <= 1")

    t = 1e-3
    ratio = log_closed_forms(h, t, which="hemisphere") / math.log(t)
    assert abs(ratio / (-h / PI) - 1.0) < 1e-6
    gaussian = log_closed_forms(h, t, which="hemisphere", form="gaussian") / math.log(t)
    assert abs(gaussian / (-h / PI) - 1.0) < 1e-6
    print("✓ Hemisphere leading behaviour -(h/pi) log t in both forms")

    hemi = hemisphere_log_series(h, order=12)
    t = 0.5
    series = sum(hemi.log(k) * t ** k for k in hemi.indices) * math.log(t)
    assert abs(series - log_closed_forms(h, t, which="hemisphere")) < 1e-10
    assert all(hemi.log(k) == 0.0 for k in (1, 3, 5))
    print("✓ Hemisphere a' series is even and sums to the closed form")

    assert log_closed_forms(0.0, 0.5) == 0.0
    with pytest.raises(ValidationError):
        log_closed_forms(h, -1.0)
    return True


def run_all_tests():
    """Run all coefficient tests."""
    print("\n" + "="*60)
    print("HEAT-KERNEL COEFFICIENTS - TEST SUITE")
    print("="*60)

    tests = [
        ("Wedge Coefficients", test_wedge_coefficients),
        ("Geometry Presets", test_geometry_presets),
        ("Robin Reductions", test_robin_reductions),
        ("Corner Structure", test_corner_structure),
        ("Bridge", test_bridge),
        ("Bridge Roundtrip", test_bridge_roundtrip),
        ("Log Terms", test_log_terms),
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
