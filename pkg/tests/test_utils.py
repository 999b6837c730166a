"""
Test Script for Configuration and Utilities
Validates settings resolution, error records, serialization helpers and the audit trail
"""

import sys
import os
import io
import json
import math
import tempfile
from datetime import datetime, timedelta
from fractions import Fraction
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pandas as pd
import pytest

from config.settings import DEFAULTS, resolve_settings, load_config_file
from src.kernels import TraceKind
from src.utils.audit_logger import AuditLogger
from src.utils.errors import (SpectralError, ValidationError, ComputationError, PoleError,
                              UnsupportedConfigurationError)
from src.utils.helpers import (relative_error, log_spaced_grid, to_serializable, to_json,
                               calculate_params_hash, records_to_csv, records_to_table,
                               format_value, format_status, truncate_text)


def test_settings_resolution():
    """Test defaults < config file < flags precedence."""
    print("\n" + "="*50)
    print("Testing Settings Resolution")
    print("="*50)

    assert resolve_settings() == DEFAULTS
    print("✓ No file and no flags gives the defaults")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "spectral.env")
        with open(path, "w") as f:
            f.write("# tolerances\nSPECTRAL_CUTOFF=2000\npoints=30\n")
        assert load_config_file(path) == {"cutoff": 2000.0, "points": 30}
        settings = resolve_settings(path, {"points": 40, "count": None})
        assert settings["cutoff"] == 2000.0
        assert settings["points"] == 40
        assert settings["count"] == DEFAULTS["count"]
        print("✓ File overrides defaults, flags override the file, unset flags ignored")

        with open(path, "w") as f:
            f.write("points=many\n")
        with pytest.raises(ValidationError):
            load_config_file(path)

    with pytest.raises(ValidationError):
        load_config_file("/nonexistent/spectral.env")
    with pytest.raises(ValidationError):
        resolve_settings(overrides={"colour": "blue"})
    print("✓ Bad values, missing files and unknown keys rejected")
    return True


def test_error_records():
    """Test the exception hierarchy and exit statuses."""
    print("\n" + "="*50)
    print("Testing Error Records")
    print("="*50)

    error = PoleError("zeta has a pole at s=1", details={"s": 1.0})
    assert isinstance(error, ComputationError) and isinstance(error, ArithmeticError)
    assert error.to_record() == {"error": "PoleError", "message": "zeta has a pole at s=1",
                                 "details": {"s": 1.0}, "exit_status": 1}
    print("✓ Computation errors exit 1")

    unsupported = UnsupportedConfigurationError("two Robin ends")
    assert isinstance(unsupported, ValidationError) and isinstance(unsupported, ValueError)
    assert unsupported.exit_status == 2
    assert unsupported.details == {}
    assert SpectralError("generic").exit_status == 1
    print("✓ Validation errors exit 2")
    return True


def test_helpers():
    """Test serialization and formatting helpers."""
    print("\n" + "="*50)
    print("Testing Helpers")
    print("="*50)

    assert relative_error(1.01, 1.0) == pytest.approx(0.01)
    assert relative_error(1e-310, 0.0) == 1e-310
    grid = log_spaced_grid(0.01, 1.0, 3)
    assert np.allclose(grid, [0.01, 0.1, 1.0])
    with pytest.raises(ValidationError):
        log_spaced_grid(0.1, 0.01, 10)
    print("✓ Relative errors and log grids")

    data = {1.0: Fraction(1, 6), "kind": TraceKind.HEAT, "values": np.array([1.5, 2.5]),
            "n": np.int64(3), "big": math.inf}
    assert to_serializable(data) == {"1": "1/6", "kind": "heat", "values": [1.5, 2.5],
                                     "n": 3, "big": "inf"}
    assert json.loads(to_json(data))["big"] == "inf"
    print("✓ Fractions, enums, arrays and infinities serialize")

    first = calculate_params_hash({"pair": "DN", "h": 0.1})
    assert first == calculate_params_hash({"h": 0.1, "pair": "DN"})
    assert first != calculate_params_hash({"pair": "DN", "h": 0.2})
    assert len(first) == 16
    print("✓ Parameter hash ignores key order")

    rows = [{"k": 1.0 / 3.0, "index": 0}, {"k": 2.0, "index": 1}]
    frame = pd.read_csv(io.StringIO(records_to_csv(rows)))
    assert frame["k"].iloc[0] == 1.0 / 3.0
    assert records_to_csv([]) == ""
    assert "index" in records_to_table(rows)
    assert records_to_table([]) == "(no rows)"
    print("✓ CSV keeps full precision")

    assert format_value(None) == "-"
    assert format_value(math.pi, 4) == "3.142"
    assert format_status(True) == "PASS" and format_status(False) == "FAIL"
    assert format_status(False, informational=True) == "INFO"
    assert truncate_text("x" * 10, 5) == "xx..."
    print("✓ Formatting helpers")
    return True


def test_audit_queries():
    """Test audit history, reports, exports and retention."""
    print("\n" + "="*50)
    print("Testing Audit Queries")
    print("="*50)

    with tempfile.TemporaryDirectory() as tmp:
        audit = AuditLogger(tmp)
        params = {"target": "riemann", "s": 2.0}
        audit.log_computation("zeta", params, 0, "value=1.644934067")
        audit.log_computation("zeta", params, 0, "value=1.644934067")
        audit.log_error("casimir", "ValidationError", "h must be 0 for DD", {"pair": "DD"}, 2)
        audit.log_export("verify", "pdf", os.path.join(tmp, "report.pdf"))

        history = audit.get_params_history(calculate_params_hash(params))
        assert len(history) == 2
        assert audit.get_recent_logs(1)[0]["action_type"] == "EXPORT"
        today = datetime.now().strftime("%Y%m%d")
        assert audit.generate_audit_report(today, today)["total_entries"] == 4
        assert audit.generate_audit_report(end_date="20000101")["total_entries"] == 0
        print("✓ History, recent and date-range queries")

        report = audit.generate_audit_report()
        assert report["total_entries"] == 4
        assert report["action_counts"] == {"COMPUTE": 2, "ERROR": 1, "EXPORT": 1}
        assert report["subcommand_counts"]["zeta"] == 2
        assert report["error_count"] == 1
        assert report["unique_sessions"] == 1
        print("✓ Summary report")

        frame = pd.read_csv(io.StringIO(audit.export_logs("csv")))
        assert len(frame) == 4
        assert frame["exit_status"].tolist() == [0, 0, 2, 0]
        assert len(json.loads(audit.export_logs("json"))) == 4
        with pytest.raises(ValidationError):
            audit.export_logs("xml")
        print("✓ JSON and CSV exports")

        stale = (datetime.now() - timedelta(days=200)).strftime("%Y%m%d")
        with open(os.path.join(tmp, f"audit_{stale}.json"), "w") as f:
            json.dump([], f)
        assert audit.clear_old_logs(days_to_keep=90) == [f"audit_{stale}.json"]
        assert not os.path.exists(os.path.join(tmp, f"audit_{stale}.json"))
        assert os.path.exists(os.path.join(tmp, f"audit_{today}.json"))
        print("✓ Old daily files removed")

        long_entry = audit.log_action("COMPUTE", "trace", details={"values": list(range(50)),
                                                                   "note": "y" * 900})
        assert len(long_entry.details["values"]) == 20
        assert len(long_entry.details["note"]) == 500
        print("✓ Large details sanitized")
    return True


def test_audit_storage():
    """Test atomic writes and the handling of a damaged day file."""
    print("\n" + "="*50)
    print("Testing Audit Storage")
    print("="*50)

    with tempfile.TemporaryDirectory() as tmp:
        audit = AuditLogger(tmp)
        audit.log_computation("zeta", {"s": 2.0}, 0, "ok")
        audit.log_computation("zeta", {"s": 3.0}, 0, "ok")
        assert sorted(os.listdir(tmp)) == [audit.current_log_file.name]
        print("✓ No temporary files left behind")

        with open(audit.current_log_file) as f:
            original = f.read()
        damaged = original[:-25]
        with open(audit.current_log_file, "w") as f:
            f.write(damaged)

        assert audit.get_recent_logs(5) == []
        assert os.path.exists(audit.current_log_file)
        print("✓ Queries skip a damaged file without moving it")

        audit.log_computation("zeta", {"s": 4.0}, 0, "ok")
        moved = [name for name in os.listdir(tmp) if ".corrupt-" in name]
        assert len(moved) == 1
        assert moved[0].startswith(audit.current_log_file.name)
        with open(os.path.join(tmp, moved[0])) as f:
            assert f.read() == damaged
        with open(audit.current_log_file) as f:
            entries = json.load(f)
        assert len(entries) == 1 and entries[0]["details"]["params"] == {"s": 4.0}
        print("✓ Damaged file kept aside byte for byte; a fresh file is started")

        assert len(audit.get_recent_logs(10)) == 1
        print("✓ Moved file is outside the audit_*.json pattern")
    return True


def run_all_tests():
    """Run all utility tests."""
    print("\n" + "="*60)
    print("CONFIGURATION & UTILITIES - TEST SUITE")
    print("="*60)

    tests = [
        ("Settings Resolution", test_settings_resolution),
        ("Error Records", test_error_records),
        ("Helpers", test_helpers),
        ("Audit Queries", test_audit_queries),
        ("Audit Storage", test_audit_storage),
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
