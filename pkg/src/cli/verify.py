"""
Verification Suite Module
Runs the acceptance checks of every module and collects a pass/fail report
"""

import math
import time
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from config.settings import DEFAULT_CUTOFF
from src.casimir import (
    casimir_exact_integral, casimir_finite_part, c1_from_casimir, functional_relation_probe,
    sqrt_coefficient_fit
)
from src.coeffs import (
    UNDETERMINED, CoefficientTable, bridge_a_to_b, bridge_b_to_a, c1_geometry, c1_wedge, hemisphere_log_series,
    interval_log_series, is_determined, load_geometry
)
from src.conformal import cocycle_eval, nd_disc_effective_action, stereographic_pair
from src.kernels import ExpansionBasis, TraceKind, fit_expansion, hemisphere_cylinder_factorized, \
    log_detection, trace
from src.spectra import (
    BoundaryCondition, HalfDiscProblem, HemisphereProblem, IntervalProblem, half_disc_spectrum,
    hemisphere_spectrum, mode_integral_checks, perturbation_delta, robin_residuals,
    union_identity_check, wavenumbers
)
from src.specfun import EULER_GAMMA, LOG2
from src.utils.errors import SpectralError, ValidationError
from src.utils.helpers import format_status, log_spaced_grid, relative_error
from src.zetafns import hemisphere_zeta_routes, lune_c1_cross_check, lune_corner_identity, \
    lune_zeta_zero

logger = logging.getLogger(__name__)

PI = math.pi
SQRT_PI = math.sqrt(PI)


class CheckStatus(Enum):
    """Outcome of a single acceptance check."""
    PASSED = "passed"
    FAILED = "failed"
    INFORMATIONAL = "informational"
    ERROR = "error"


@dataclass
class CheckResult:
    """One observed value against its expected value."""
    tag: str
    name: str
    observed: Optional[float]
    expected: Optional[float]
    tolerance: float
    status: CheckStatus
    relative: bool = False
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status in (CheckStatus.PASSED, CheckStatus.INFORMATIONAL)

    def to_record(self) -> Dict:
        return {
            "tag": self.tag,
            "check": self.name,
            "observed": self.observed,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "comparison": "relative" if self.relative else "absolute",
            "status": format_status(self.status == CheckStatus.PASSED,
                                    self.status == CheckStatus.INFORMATIONAL),
            "message": self.message,
        }


@dataclass
class VerificationReport:
    """Complete verification run."""
    checks: List[CheckResult]
    tag: Optional[str] = None
    tags_run: List[str] = field(default_factory=list)
    elapsed: Dict[str, float] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return len(self.checks)

    @property
    def passed_count(self) -> int:
        return sum(1 for c in self.checks if c.passed)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def to_records(self) -> List[Dict]:
        return [c.to_record() for c in self.checks]

    def to_record(self) -> Dict:
        return {
            "tag": self.tag,
            "tags_run": self.tags_run,
            "passed": self.passed_count,
            "total": self.total,
            "all_passed": self.all_passed,
            "checks": self.to_records(),
        }


def _compare(tag: str, name: str, observed: float, expected: float, tolerance: float,
             relative: bool = False, informational: bool = False) -> CheckResult:
    error = relative_error(observed, expected) if relative else abs(observed - expected)
    if informational:
        status = CheckStatus.INFORMATIONAL
    else:
        status = CheckStatus.PASSED if error <= tolerance else CheckStatus.FAILED
    return CheckResult(tag=tag, name=name, observed=float(observed), expected=float(expected),
                       tolerance=tolerance, status=status, relative=relative,
                       message=f"error {error:.3g}")


def _bound(tag: str, name: str, observed: float, tolerance: float,
           informational: bool = False) -> CheckResult:
    """Quantity that should be at most tolerance (reported against 0)."""
    return _compare(tag, name, observed, 0.0, tolerance, informational=informational)


# ----------------------------------------------------------------------
# Checks, one function per tag


def _check_union(settings: Dict) -> List[CheckResult]:
    results = []
    for length, count in ((PI, 100), (2.0, 50)):
        report = union_identity_check(length, count)
        for identity in report.identities:
            result = _bound("union", f"{identity.name} (L={length:.6g})", identity.max_mismatch,
                            1e-14)
            if not identity.passed:
                result.status = CheckStatus.FAILED
            results.append(result)
    return results


def _check_wedge(settings: Dict) -> List[CheckResult]:
    worst = 0.0
    for beta in np.linspace(0.1, PI, 20):
        lhs = c1_wedge(float(beta), "DN")
        rhs = c1_wedge(2.0 * float(beta), "DD") - c1_wedge(float(beta), "DD")
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return [
        _bound("wedge", "C1_DN(b) = C1_DD(2b) - C1_DD(b) at 20 angles", worst, 1e-14),
        _compare("wedge", "C1_DN(pi)", c1_wedge(PI, "DN"), -PI / 4, 1e-14),
        _compare("wedge", "C1_DD(pi/2)", c1_wedge(PI / 2, "DD"), PI / 4, 1e-14),
    ]


def _check_geometry(settings: Dict) -> List[CheckResult]:
    return [_compare("geometry", "3-ball hybrid C1", c1_geometry(load_geometry("3ball-DN")),
                     8 * PI / 3 - PI ** 2 / 2, 1e-14)]


# t^(-1/2), constant and t^(1/2) heat coefficients of the half-discs
HALF_DISC_TERMS = {
    "DD": (-(2 + PI) / (8 * SQRT_PI), 5 / 24, (PI + 16) / (256 * SQRT_PI)),
    "ND": ((2 - PI) / (8 * SQRT_PI), -1 / 24, (PI - 16) / (256 * SQRT_PI)),
    "NN": ((2 + PI) / (8 * SQRT_PI), 5 / 24, (5 * PI + 48) / (256 * SQRT_PI)),
    "DN": (-(2 - PI) / (8 * SQRT_PI), -1 / 24, (5 * PI - 48) / (256 * SQRT_PI)),
}


def _check_half_disc(settings: Dict) -> List[CheckResult]:
    t = log_spaced_grid(0.005, 0.08, 60)
    basis = ExpansionBasis((-1, -0.5, 0, 0.5, 1, 1.5, 2))
    threads = settings.get("threads")
    results = []
    for pair, (b_half, b_zero, b_one_half) in HALF_DISC_TERMS.items():
        spectrum = half_disc_spectrum(HalfDiscProblem.from_pair(pair), DEFAULT_CUTOFF,
                                      threads=threads)
        samples = trace(spectrum, t, threads=threads)
        fit = fit_expansion(samples, basis, pinned={-1: 0.125, -0.5: b_half})
        results.append(_compare("half-disc", f"{pair} constant term", fit.coefficient(0),
                                b_zero, 5e-3))
        results.append(_compare("half-disc", f"{pair} t^1/2 coefficient", fit.coefficient(0.5),
                                b_one_half, 0.1, relative=True))
    return results


def _check_lune(settings: Dict) -> List[CheckResult]:
    worst = max(lune_corner_identity(float(b))["max_error"] for b in np.linspace(0.2, PI, 12))
    results = [
        _compare("lune", "zeta_pi^DD(0)", lune_zeta_zero(PI, "DD"), 1 / 24, 1e-15),
        _bound("lune", "ND per-corner identity", worst, 1e-14),
    ]
    for pair in ("DD", "ND"):
        check = lune_c1_cross_check(pair, count=10)
        results.append(_bound("lune", f"4 pi zeta(0) = C1 ({pair}, 10 angles)", check.max_error,
                              1e-12))
    return results


def _check_hemisphere_zeta(settings: Dict) -> List[CheckResult]:
    nd = hemisphere_zeta_routes("ND")
    results = [
        _compare("hemisphere-zeta", "ND zeta'(0) closed form", nd.closed_form, -0.1423411, 1e-7),
        _compare("hemisphere-zeta", "ND Barnes route", nd.barnes, nd.closed_form,
                 settings.get("route_tol", 1e-6)),
    ]
    for pair in ("DD", "NN"):
        routes = hemisphere_zeta_routes(pair)
        results.append(_compare("hemisphere-zeta", f"{pair} series route", routes.series,
                                routes.closed_form, 1e-8))
    return results


def _check_disc(settings: Dict) -> List[CheckResult]:
    pair = stereographic_pair()
    action = nd_disc_effective_action(tolerance=math.inf)
    return [
        _compare("disc", "ND disc action, hemisphere + cocycle", action.via_cocycle,
                 action.closed_form, 1e-6),
        _compare("disc", "form with -1/24 (reported)", action.printed_form, action.closed_form,
                 1e-6, informational=True),
        _compare("disc", "cocycle allD", cocycle_eval(pair, "allD"), LOG2 / 6 - 1 / 3, 1e-6),
        _compare("disc", "cocycle allN_nozero", cocycle_eval(pair, "allN_nozero"),
                 2 * LOG2 / 3 + 1 / 6, 1e-6),
    ]


def _check_robin(settings: Dict) -> List[CheckResult]:
    D, N = BoundaryCondition.dirichlet(), BoundaryCondition.neumann()
    worst = 0.0
    for end in (D, N):
        for h in (0.1, -0.1, 0.5):
            problem = IntervalProblem(end, BoundaryCondition.robin(h))
            values = wavenumbers(problem, 50).values
            worst = max(worst, float(np.max(np.abs(robin_residuals(problem, values)))))
    results = [_bound("robin", "transcendental residuals", worst, 1e-10)]

    h = 1e-6
    for m in range(4):
        plus = wavenumbers(IntervalProblem(D, BoundaryCondition.robin(h)), 5).values[m]
        minus = wavenumbers(IntervalProblem(D, BoundaryCondition.robin(-h)), 5).values[m]
        results.append(_compare("robin", f"root slope m={m}", (plus - minus) / (2 * h),
                                -2.0 / (PI * (2 * m + 1)), 1e-5, relative=True))
    for m in range(3):
        for n in range(3):
            results.append(_compare("robin", f"first-order shift m={m} n={n}",
                                    perturbation_delta(m, n, 1e-3),
                                    -2e-3 / (PI * (2 * m + 1)), 1e-4, relative=True))
    return results


def _check_modes(settings: Dict) -> List[CheckResult]:
    results = []
    for k in (0.5, 1.0, 1.5):
        for n in (0, 1, 2):
            report = mode_integral_checks(k, n)
            results.append(_compare("modes", f"normalization k={k:g} n={n}", report.norm.numeric,
                                    report.norm.expected, 1e-8, relative=True))
            results.append(_compare("modes", f"Barnes integral k={k:g} n={n}",
                                    report.barnes.numeric, report.barnes.expected, 1e-8,
                                    relative=True))
    return results


def _check_factorization(settings: Dict) -> List[CheckResult]:
    t_grid = [0.5, 1.0, 2.0, 5.0]
    results = []
    for bc0 in ("D", "N"):
        for h in (0.0, 0.3, -0.3):
            spectrum = hemisphere_spectrum(HemisphereProblem(bc0, h), 1.0e4)
            direct = trace(spectrum, t_grid, kind=TraceKind.CYLINDER,
                           threads=settings.get("threads")).k_values
            worst = max(abs(v - hemisphere_cylinder_factorized(h, bc0, t))
                        for t, v in zip(t_grid, direct))
            results.append(_bound("factorization", f"{bc0}, h={h:g}", worst, 1e-12))
    return results


def _check_log_terms(settings: Dict) -> List[CheckResult]:
    t = log_spaced_grid(0.005, 0.1, 60)
    basis = ExpansionBasis((-1, -0.5, 0, 1, 2))
    robin = hemisphere_spectrum(HemisphereProblem("D", 0.5), DEFAULT_CUTOFF)
    report = log_detection(trace(robin, t), basis, (0, 1), pinned={-1: 0.5})
    plain = hemisphere_spectrum(HemisphereProblem("D", 0.0), DEFAULT_CUTOFF)
    control = log_detection(trace(plain, t), basis, (0, 1), pinned={-1: 0.5})
    ratio = CheckResult(tag="log-terms", name="residual improvement ratio", observed=report.ratio,
                        expected=10.0, tolerance=0.0,
                        status=CheckStatus.PASSED if report.detected else CheckStatus.FAILED,
                        message="must reach the expected value")
    return [
        _compare("log-terms", "b'_0 at h=0.5", report.with_log.coefficient(0, log=True),
                 -0.5 / (2 * PI), 0.1, relative=True),
        ratio,
        _bound("log-terms", "log coefficient at h=0",
               abs(control.with_log.coefficient(0, log=True)), 1e-3),
    ]


def _check_bridge(settings: Dict) -> List[CheckResult]:
    h = 0.2
    heat = bridge_a_to_b(interval_log_series(h), d=1)
    odd_logs = max(abs(heat.log(k)) for k in (1, 3, 5, 7))

    rng = np.random.default_rng(7)
    table = CoefficientTable(TraceKind.CYLINDER, 2)
    for k in range(-2, 6):
        plain = UNDETERMINED if (k > 0 and k % 2) else float(rng.normal())
        table.set(k, plain, float(rng.normal()) if k >= 0 else None)
    back = bridge_b_to_a(bridge_a_to_b(table, d=2), d=2)
    worst = 0.0
    for k in table.indices:
        for original, restored in ((table.plain(k), back.plain(k)), (table.log(k), back.log(k))):
            if is_determined(original) and is_determined(restored):
                # error in units of the allowed 1e-15 relative + 1e-16 absolute
                allowed = 1e-15 * abs(original) + 1e-16
                worst = max(worst, abs(restored - original) / allowed)

    hemisphere = bridge_a_to_b(hemisphere_log_series(h, order=4), d=2)
    return [
        _compare("bridge", "b_1 = h/sqrt(pi) from a'_1 = -h/pi", heat.plain(1), h / SQRT_PI,
                 1e-16),
        _bound("bridge", "b'_k = 0 for odd k", odd_logs, 0.0),
        _bound("bridge", "a -> b -> a roundtrip (error / allowed)", worst, 1.0),
        _compare("bridge", "hemisphere b'_0 = -h/(2 pi)", hemisphere.log(0), -h / (2 * PI), 1e-16),
    ]


def _check_casimir(settings: Dict) -> List[CheckResult]:
    count = int(settings.get("count") or 10000)
    results = []
    for pair, value in (("DD", -1 / 24), ("NN", -1 / 24), ("DN", 1 / 48)):
        results.append(_compare("casimir", f"E({pair[0]},{pair[1]}) finite part",
                                casimir_finite_part(pair, count=count).energy, value, 1e-8))
    h = 1e-3
    expected = 1 / 48 - h / (2 * PI) * (EULER_GAMMA - 1 + 2 * LOG2)
    results.append(_compare("casimir", "E(D,R) at h=1e-3", casimir_finite_part("DR", h, count).energy,
                            expected, 1e-6))
    results.append(_compare("casimir", "C1 from E(D,N)", c1_from_casimir(1 / 48), -PI / 3, 1e-14))
    results.append(_compare("casimir", "C1 from E(D,D)", c1_from_casimir(-1 / 24), PI / 6, 1e-14))
    return results


def _check_casimir_integral(settings: Dict) -> List[CheckResult]:
    fit = sqrt_coefficient_fit(threads=settings.get("threads"))
    probe = functional_relation_probe("NR", [-1e-3, -2e-3, -4e-3, -8e-3],
                                      threads=settings.get("threads"))
    deviation = _bound("casimir-integral", "functional relation at lambda=2 (reported)",
                       probe.deviation_at(2.0), 3 * probe.quadrature_tolerance, informational=True)
    return [
        _compare("casimir-integral", "sqrt(-h) coefficient", fit.sqrt_coefficient,
                 fit.expected_sqrt, 0.02, relative=True),
        _compare("casimir-integral", "E(D,R) exact integral at h=0",
                 casimir_exact_integral("DR", 0.0).energy, 1 / 48, 1e-10),
        deviation,
    ]


VERIFY_CHECKS: List[tuple] = [
    ("union", _check_union),
    ("wedge", _check_wedge),
    ("geometry", _check_geometry),
    ("half-disc", _check_half_disc),
    ("lune", _check_lune),
    ("hemisphere-zeta", _check_hemisphere_zeta),
    ("disc", _check_disc),
    ("robin", _check_robin),
    ("modes", _check_modes),
    ("factorization", _check_factorization),
    ("log-terms", _check_log_terms),
    ("bridge", _check_bridge),
    ("casimir", _check_casimir),
    ("casimir-integral", _check_casimir_integral),
]


def verify_tags() -> List[str]:
    return [tag for tag, _ in VERIFY_CHECKS]


def verify_suite(tag: Optional[str] = None, settings: Optional[Dict] = None) -> VerificationReport:
    """
    Run the acceptance checks.

    A check that raises is recorded as an ERROR entry; the suite itself never
    raises on a failed check.

    Args:
        tag: Run only the checks with this tag
        settings: Resolved settings (threads, count, route_tol are used)

    Returns:
        VerificationReport in registry order
    """
    settings = settings or {}
    selected = [(t, func) for t, func in VERIFY_CHECKS if tag is None or t == tag]
    if not selected:
        raise ValidationError(f"Unknown verify tag '{tag}'", details={"tags": verify_tags()})

    checks: List[CheckResult] = []
    elapsed = {}
    for check_tag, func in selected:
        start = time.perf_counter()
        try:
            checks.extend(func(settings))
        except Exception as e:
            if not isinstance(e, SpectralError):
                logger.exception("Check %s failed unexpectedly", check_tag)
            logger.warning("Check %s raised %s: %s", check_tag, type(e).__name__, e)
            checks.append(CheckResult(tag=check_tag, name="(check raised)", observed=None,
                                      expected=None, tolerance=0.0, status=CheckStatus.ERROR,
                                      message=f"{type(e).__name__}: {e}"))
        elapsed[check_tag] = time.perf_counter() - start
        logger.info("Verify %s finished in %.2fs", check_tag, elapsed[check_tag])

    report = VerificationReport(checks=checks, tag=tag, tags_run=[t for t, _ in selected],
                                elapsed=elapsed)
    logger.info("Verification: %d/%d checks passed", report.passed_count, report.total)
    return report
