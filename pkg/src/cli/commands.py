"""
Command Dispatch Module
Validates CLI requests, runs the requested computation and serializes the result
"""

import math
import logging
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

from config.settings import AUDIT_ENABLED, DEFAULTS, OUTPUT_FORMATS
from src.casimir import (
    casimir_exact_integral, casimir_finite_part, casimir_perturbative, functional_relation_probe,
    small_h_slope, sqrt_coefficient_fit
)
from src.coeffs import (
    bridge_a_to_b, c1_breakdown, c1_wedge, c32_corner_structure, hemisphere_log_series,
    interval_log_series, load_geometry
)
from src.conformal import cocycle_breakdown, nd_disc_effective_action, stereographic_pair
from src.kernels import ExpansionBasis, TraceKind, fit_expansion, log_detection, trace
from src.spectra import (
    BoundaryCondition, HalfDiscProblem, HemisphereProblem, IntervalProblem, half_disc_spectrum,
    hemisphere_spectrum, perturbative_wavenumbers, wavenumbers
)
from src.specfun import PrecisionConfig, barnes_zeta2, riemann_zeta, riemann_zeta_deriv
from src.utils.audit_logger import AuditLogger, entry_row
from src.utils.errors import ComputationError, SpectralError, ValidationError
from src.utils.helpers import log_spaced_grid, records_to_csv, records_to_table, to_json, \
    to_serializable
from src.zetafns import (
    hemisphere_zeta, hemisphere_zeta_prime0, hemisphere_zeta_routes, lune_zeta_zero,
    nd_hemisphere_zeta, perturbative_interval_zeta
)
from .verify import verify_suite

logger = logging.getLogger(__name__)


class Subcommand(Enum):
    SPECTRUM = "spectrum"
    TRACE = "trace"
    FIT = "fit"
    COEFF = "coeff"
    ZETA = "zeta"
    CASIMIR = "casimir"
    DETERMINANT = "determinant"
    VERIFY = "verify"
    AUDIT = "audit"


def _choice(*options: str) -> Callable[[Any], str]:
    def coerce(value: Any) -> str:
        text = str(value)
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text
    return coerce


def _letter(value: Any) -> str:
    return _choice("D", "N", "R")(str(value).upper())


def _flag(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _float_list(value: Any) -> List[float]:
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(v) for v in str(value).split(",") if v.strip()]


def _pinned(value: Any) -> Dict[float, float]:
    """'-1:0.125,-0.5:0.3' -> {-1.0: 0.125, -0.5: 0.3}"""
    if isinstance(value, dict):
        return {float(k): float(v) for k, v in value.items()}
    pinned = {}
    for item in str(value).split(","):
        if item.strip():
            exponent, coefficient = item.split(":")
            pinned[float(exponent)] = float(coefficient)
    return pinned


def _window(value: Any):
    if value in (None, "auto"):
        return value
    if isinstance(value, (list, tuple)):
        low, high = value
    else:
        low, high = str(value).split(":")
    return float(low), float(high)


def _day(value: Any) -> str:
    text = str(value)
    datetime.strptime(text, "%Y%m%d")
    return text


_PROBLEM_PARAMS = {
    "problem": _choice("interval", "half-disc", "hemisphere"),
    "left": _letter,
    "right": _letter,
    "h": float,
    "length": float,
    "pair": lambda v: _choice("DD", "DN", "ND", "NN")(str(v).upper()),
    "bc0": lambda v: _choice("D", "N")(str(v).upper()),
}

PARAMETERS: Dict[Subcommand, Dict[str, Callable[[Any], Any]]] = {
    Subcommand.SPECTRUM: {**_PROBLEM_PARAMS, "count": int, "perturbative": _flag},
    Subcommand.TRACE: {**_PROBLEM_PARAMS, "kind": _choice("heat", "cylinder")},
    Subcommand.FIT: {**_PROBLEM_PARAMS, "kind": _choice("heat", "cylinder"),
                     "plain": _float_list, "log": _float_list, "pinned": _pinned,
                     "window": _window, "detect_log": _flag, "dimension": int},
    Subcommand.COEFF: {"c1": _flag, "geometry": str, "wedge": float, "pair": str,
                       "c32": _flag, "log_series": _choice("interval", "hemisphere"),
                       "h": float, "order": int, "bridge": _flag},
    Subcommand.ZETA: {"target": _choice("riemann", "riemann-deriv", "barnes", "hemisphere",
                                        "nd-hemisphere", "lune", "interval"),
                      "s": float, "a": float, "pair": str, "beta": float, "h": float},
    Subcommand.CASIMIR: {"pair": str, "h": float,
                         "route": _choice("finite-part", "perturbative", "exact-integral",
                                          "probe", "sqrt-fit", "slope"),
                         "h_grid": _float_list},
    Subcommand.DETERMINANT: {"target": _choice("hemisphere", "disc", "cocycle"), "pair": str,
                             "layout": _choice("allD", "allN_nozero", "ND")},
    Subcommand.VERIFY: {"tag": str, "pdf": str},
    Subcommand.AUDIT: {"action": _choice("report", "recent", "history", "export", "prune"),
                       "start": _day, "end": _day, "limit": int, "params_hash": str,
                       "days": int, "export_format": _choice("json", "csv"), "output": str,
                       "log_dir": str},
}


@dataclass
class CommandRequest:
    """
    One CLI invocation.

    params holds the subcommand flags; settings the resolved tolerances,
    cutoffs and windows (see config.resolve_settings).
    """
    subcommand: str
    params: Dict[str, Any] = field(default_factory=dict)
    output_format: str = "json"
    settings: Dict[str, Any] = field(default_factory=lambda: dict(DEFAULTS))

    def __post_init__(self):
        try:
            self.subcommand = Subcommand(self.subcommand)
        except ValueError:
            raise ValidationError(f"Unknown subcommand '{self.subcommand}'",
                                  details={"subcommands": [s.value for s in Subcommand]})
        if self.output_format not in OUTPUT_FORMATS:
            raise ValidationError(f"Unknown output format '{self.output_format}'",
                                  details={"formats": list(OUTPUT_FORMATS)})
        schema = PARAMETERS[self.subcommand]
        coerced = {}
        for key, value in self.params.items():
            if value is None:
                continue
            if key not in schema:
                raise ValidationError(f"Unknown parameter '{key}' for {self.subcommand.value}",
                                      details={"parameter": key, "allowed": sorted(schema)})
            try:
                coerced[key] = schema[key](value)
            except (TypeError, ValueError) as e:
                raise ValidationError(f"Invalid value for '{key}': {value!r} ({e})",
                                      details={"parameter": key, "value": value})
        self.params = coerced
        self.settings = {**DEFAULTS, **(self.settings or {})}

    def to_record(self) -> Dict:
        return {"subcommand": self.subcommand.value, "params": self.params,
                "output_format": self.output_format}


@dataclass
class CommandResult:
    """Computation output: the full record, flat rows for CSV/table output and a summary line."""
    record: Any
    rows: List[Dict]
    summary: str
    exit_status: int = 0
    attachments: Dict[str, Any] = field(default_factory=dict)


# ----------------------------------------------------------------------
# Problem construction


def _condition(letter: str, h: Optional[float]) -> BoundaryCondition:
    if letter == "R":
        if h is None:
            raise ValidationError("A Robin end needs --h")
        return BoundaryCondition.robin(h)
    return BoundaryCondition.from_record(letter)


def _interval_problem(params: Dict) -> IntervalProblem:
    return IntervalProblem(left=_condition(params.get("left", "D"), params.get("h")),
                           right=_condition(params.get("right", "N"), params.get("h")),
                           length=params.get("length", math.pi))


def _build_spectrum(params: Dict, settings: Dict):
    problem = params.get("problem", "interval")
    if problem == "interval":
        return wavenumbers(_interval_problem(params), int(settings["count"])).to_spectrum()
    if problem == "half-disc":
        return half_disc_spectrum(HalfDiscProblem.from_pair(params.get("pair", "DD")),
                                  settings["cutoff"], threads=settings.get("threads"))
    return hemisphere_spectrum(HemisphereProblem(params.get("bc0", "D"), params.get("h", 0.0)),
                               settings["cutoff"])


def _samples(params: Dict, settings: Dict):
    spectrum = _build_spectrum(params, settings)
    grid = log_spaced_grid(settings["t_min"], settings["t_max"], int(settings["points"]))
    return trace(spectrum, grid, kind=TraceKind(params.get("kind", "heat")),
                 tail_tol=settings["tail_tol"], threads=settings.get("threads"))


def _dimension(params: Dict) -> int:
    if "dimension" in params:
        return params["dimension"]
    return 1 if params.get("problem", "interval") == "interval" else 2


# ----------------------------------------------------------------------
# Handlers


def _run_spectrum(params: Dict, settings: Dict) -> CommandResult:
    problem = params.get("problem", "interval")
    if problem == "interval":
        interval = _interval_problem(params)
        count = params.get("count", 10)
        if params.get("perturbative"):
            values = perturbative_wavenumbers(interval, count)
            record = {"problem": interval.to_record(), "values": values, "route": "perturbative"}
            rows = [{"index": i, "k": float(k)} for i, k in enumerate(values)]
            return CommandResult(record, rows, f"{len(values)} perturbative wavenumbers")
        result = wavenumbers(interval, count)
        rows = [{"index": i, "k": float(k)} for i, k in enumerate(result.values)]
        return CommandResult(result.to_record(), rows,
                             f"{len(result)} wavenumbers of ({interval.pair})")
    spectrum = _build_spectrum(params, settings)
    return CommandResult(spectrum.to_record(), spectrum.to_records(),
                         f"{spectrum.mode_count} modes of {spectrum.label} below "
                         f"{spectrum.cutoff:g}")


def _run_trace(params: Dict, settings: Dict) -> CommandResult:
    samples = _samples(params, settings)
    return CommandResult(samples.to_record(), samples.to_records(),
                         f"{samples.kind.value} trace on {len(samples.t_values)} points, "
                         f"tail bound {samples.truncation_bound:.3g}")


def _run_fit(params: Dict, settings: Dict) -> CommandResult:
    samples = _samples(params, settings)
    dimension = _dimension(params)
    default_plain = (-0.5, 0, 0.5, 1) if dimension == 1 else (-1, -0.5, 0, 0.5, 1)
    basis = ExpansionBasis(tuple(params.get("plain", default_plain)), tuple(params.get("log", ())),
                           kind=params.get("kind", "heat"), dimension=dimension)
    pinned = params.get("pinned")
    if params.get("detect_log"):
        if not basis.log_exponents:
            raise ValidationError("--detect-log needs --log exponents")
        window = params.get("window")
        report = log_detection(samples, basis, basis.log_exponents, pinned=pinned,
                               window=None if window == "auto" else window)
        rows = [{"column": k, "coefficient": v}
                for k, v in report.to_record()["log_coefficients"].items()]
        rows.append({"column": "ratio", "coefficient": report.ratio})
        return CommandResult(report.to_record(), rows,
                             f"log terms {'detected' if report.detected else 'not detected'}"
                             f" (ratio {report.ratio:.3g})")
    fit = fit_expansion(samples, basis, pinned=pinned, window=params.get("window"),
                        condition_limit=settings["condition_limit"], tail_tol=settings["tail_tol"])
    record = fit.to_record()
    columns = {**record["coefficients"], **record["log_coefficients"]}
    rows = [{"column": k, "coefficient": v, "standard_error": record["standard_errors"].get(k)}
            for k, v in columns.items()]
    return CommandResult(record, rows, f"fit residual rms {fit.residual_rms:.3g}")


def _table_rows(table) -> List[Dict]:
    record = table.to_record()
    return [{"k": k, **entry} for k, entry in record["entries"].items()]


def _run_coeff(params: Dict, settings: Dict) -> CommandResult:
    if params.get("c1") or "geometry" in params:
        name = params.get("geometry")
        if not name:
            raise ValidationError("--c1 needs --geometry")
        breakdown = c1_breakdown(load_geometry(name))
        record = {"geometry": name, **breakdown.to_record()}
        rows = [{"part": k, "value": v} for k, v in breakdown.to_record().items() if k != "notes"]
        return CommandResult(record, rows, f"C1({name}) = {breakdown.total:.10g}")
    if "wedge" in params:
        pair = params.get("pair", "DD")
        value = c1_wedge(params["wedge"], pair)
        record = {"beta": params["wedge"], "pair": pair, "c1": value}
        return CommandResult(record, [record], f"C1 wedge {pair} = {value:.10g}")
    if params.get("c32"):
        pair = params.get("pair", "DD")
        value = c32_corner_structure(pair)
        record = {"pair": pair, "lambda": value}
        return CommandResult(record, [record], f"C3/2 corner weight {pair} = {value:g}")
    if "log_series" in params:
        h = params.get("h", 0.0)
        order = params.get("order", 6)
        if params["log_series"] == "interval":
            table, d = interval_log_series(h, order), 1
        else:
            table, d = hemisphere_log_series(h, order), 2
        if params.get("bridge"):
            table = bridge_a_to_b(table, d=d)
        return CommandResult(table.to_record(), _table_rows(table),
                             f"{params['log_series']} {table.side.value} log coefficients, h={h:g}")
    raise ValidationError("coeff needs one of --c1, --wedge, --c32 or --log-series")


def _run_zeta(params: Dict, settings: Dict) -> CommandResult:
    target = params.get("target", "hemisphere")
    s = params.get("s")

    def scalar(label: str, value: float) -> CommandResult:
        record = {"target": target, "s": s, "value": value, **{k: params[k] for k in
                                                              ("a", "pair", "beta", "h") if k in params}}
        return CommandResult(record, [record], f"{label} = {value:.12g}")

    if target in ("riemann", "riemann-deriv", "barnes", "nd-hemisphere", "interval") and s is None:
        raise ValidationError(f"zeta target '{target}' needs --s")
    if target == "riemann":
        precision = PrecisionConfig.from_settings(settings)
        return scalar("zeta_R(s, a)", riemann_zeta(s, params.get("a", 1.0), precision))
    if target == "riemann-deriv":
        return scalar("zeta_R'(s)", riemann_zeta_deriv(s))
    if target == "barnes":
        return scalar("zeta_2(s, a)", barnes_zeta2(s, params.get("a", 1.0)))
    if target == "nd-hemisphere":
        return scalar("zeta_ND(s)", nd_hemisphere_zeta(s))
    if target == "lune":
        if "beta" not in params:
            raise ValidationError("zeta target 'lune' needs --beta")
        return scalar("zeta_lune(0)", lune_zeta_zero(params["beta"], params.get("pair", "DD")))
    if target == "interval":
        value = perturbative_interval_zeta(params.get("pair", "DR"), params.get("h", 0.0), s)
        record = value.to_record()
        return CommandResult(record, [record], f"interval zeta at s={s:g}: {value.route}")
    pair = params.get("pair", "ND")
    if s is not None:
        return scalar(f"zeta_{pair}(s)", hemisphere_zeta(pair, s))
    routes = hemisphere_zeta_routes(pair)
    rows = [{"route": k, "zeta_prime_0": v} for k, v in routes.values.items()]
    return CommandResult(routes.to_record(), rows,
                         f"hemisphere {routes.pair} zeta'(0) = {routes.closed_form:.12g}")


def _run_casimir(params: Dict, settings: Dict) -> CommandResult:
    route = params.get("route", "finite-part")
    pair = params.get("pair", "DN")
    h = params.get("h", 0.0)
    threads = settings.get("threads")
    if route in ("finite-part", "perturbative", "exact-integral"):
        if route == "finite-part":
            result = casimir_finite_part(pair, h, count=int(settings["count"]))
        elif route == "perturbative":
            result = casimir_perturbative(pair, h)
        else:
            result = casimir_exact_integral(pair, h)
        record = result.to_record()
        return CommandResult(record, [{k: v for k, v in record.items()
                                       if not isinstance(v, (dict, list))}],
                             f"E({result.pair}, h={h:g}) = {result.energy:.12g} [{route}]")
    if route == "probe":
        grid = params.get("h_grid", [-1e-3, -2e-3, -4e-3, -8e-3])
        report = functional_relation_probe(pair, grid, threads=threads)
        return CommandResult(report.to_record(), [c.to_record() for c in report.checks],
                             f"functional relation max deviation {report.max_deviation:.3g}")
    if route == "sqrt-fit":
        report = sqrt_coefficient_fit(params.get("h_grid"), threads=threads)
        rows = [{"column": k, "coefficient": v} for k, v in report.coefficients.items()]
        return CommandResult(report.to_record(), rows,
                             f"sqrt(-h) coefficient {report.sqrt_coefficient:.6g} "
                             f"(expected {report.expected_sqrt:.6g})")
    report = small_h_slope(pair, h if h else -1e-4)
    return CommandResult(report, [report], f"slope agreement: {report['agrees']}")


def _run_determinant(params: Dict, settings: Dict) -> CommandResult:
    target = params.get("target", "disc")
    if target == "hemisphere":
        pair = params.get("pair", "ND")
        value = hemisphere_zeta_prime0(pair, tolerance=settings["route_tol"])
        record = {"pair": pair, "zeta_prime_0": value, "log_det": -value,
                  "effective_action": -0.5 * value}
        return CommandResult(record, [record], f"hemisphere {pair} log det = {-value:.12g}")
    if target == "cocycle":
        result = cocycle_breakdown(stereographic_pair(), params.get("layout", "ND"))
        record = result.to_record()
        return CommandResult(record, [{k: v for k, v in record.items() if k != "notes"}],
                             f"cocycle {result.layout.value} = {result.value:.12g}")
    result = nd_disc_effective_action(tolerance=settings["route_tol"])
    record = result.to_record()
    return CommandResult(record, [record], f"ND disc effective action = {result.value:.12g}")


def _run_verify(params: Dict, settings: Dict) -> CommandResult:
    report = verify_suite(params.get("tag"), settings)
    result = CommandResult(report.to_record(), report.to_records(),
                           f"{report.passed_count}/{report.total} checks passed",
                           exit_status=0 if report.all_passed else 1)
    result.attachments["report"] = report
    return result


def _run_audit(params: Dict, settings: Dict) -> CommandResult:
    audit = AuditLogger(params.get("log_dir"))
    action = params.get("action", "report")
    if action == "report":
        report = audit.generate_audit_report(params.get("start"), params.get("end"))
        rows = [{"action_type": action_type, "count": count}
                for action_type, count in sorted(report["action_counts"].items())]
        return CommandResult(report, rows, f"{report['total_entries']} audit entries, "
                                           f"{report['error_count']} errors")
    if action == "recent":
        entries = audit.get_recent_logs(params.get("limit", 20))
        return CommandResult(entries, [entry_row(e) for e in entries],
                             f"{len(entries)} most recent audit entries")
    if action == "history":
        if "params_hash" not in params:
            raise ValidationError("audit --action history needs --params-hash")
        entries = audit.get_params_history(params["params_hash"])
        return CommandResult(entries, [entry_row(e) for e in entries],
                             f"{len(entries)} runs with parameters {params['params_hash']}")
    if action == "prune":
        removed = audit.clear_old_logs(params.get("days", 90))
        return CommandResult({"removed": removed}, [{"file": name} for name in removed],
                             f"Removed {len(removed)} audit files")

    if "output" not in params:
        raise ValidationError("audit --action export needs --output")
    export_format = params.get("export_format", "json")
    content = audit.export_logs(export_format)
    with open(params["output"], "w") as f:
        f.write(content)
    audit.log_export("audit", export_format, params["output"])
    record = {"path": params["output"], "export_format": export_format}
    return CommandResult(record, [record], f"Audit trail written to {params['output']}")


HANDLERS: Dict[Subcommand, Callable[[Dict, Dict], CommandResult]] = {
    Subcommand.SPECTRUM: _run_spectrum,
    Subcommand.TRACE: _run_trace,
    Subcommand.FIT: _run_fit,
    Subcommand.COEFF: _run_coeff,
    Subcommand.ZETA: _run_zeta,
    Subcommand.CASIMIR: _run_casimir,
    Subcommand.DETERMINANT: _run_determinant,
    Subcommand.VERIFY: _run_verify,
    Subcommand.AUDIT: _run_audit,
}


# ----------------------------------------------------------------------
# Output


def render(result: CommandResult, output_format: str) -> str:
    """Serialize a result as JSON, CSV rows or a human-readable table."""
    if output_format == "csv":
        return records_to_csv(result.rows)
    if output_format == "human":
        return f"{result.summary}\n\n{records_to_table(result.rows)}"
    return to_json(result.record)


def render_error(error: SpectralError, output_format: str) -> str:
    record = error.to_record()
    if output_format == "csv":
        flat = {k: v for k, v in record.items() if k != "details"}
        flat["details"] = to_json(record["details"], indent=None)
        return records_to_csv([flat])
    if output_format == "human":
        return f"Error ({record['error']}): {record['message']}"
    return to_json({"error": record})


def _write_pdf(report, path: str, audit: Optional[AuditLogger]):
    from src.document import VerificationReportGenerator

    content = VerificationReportGenerator().generate(report)
    with open(path, "wb") as f:
        f.write(content)
    logger.info("Verification report written to %s", path)
    if audit:
        audit.log_export("verify", "pdf", path)


def run(request: CommandRequest, audit: Optional[AuditLogger] = None,
        audit_enabled: bool = AUDIT_ENABLED) -> Tuple[int, str]:
    """
    Execute a request.

    Args:
        request: Validated request
        audit: Audit logger; one is created when auditing is enabled and none is given
        audit_enabled: Record the run in the audit trail

    Returns:
        (exit status, serialized output): 0 ok, 1 computation error or failed
        verification, 2 validation error
    """
    # Queries of the trail are not themselves recorded
    if request.subcommand == Subcommand.AUDIT:
        audit = None
    elif audit is None and audit_enabled:
        audit = AuditLogger()
    name = request.subcommand.value
    params = to_serializable(request.params)
    try:
        result = HANDLERS[request.subcommand](request.params, request.settings)
        if request.subcommand == Subcommand.VERIFY and "pdf" in request.params:
            _write_pdf(result.attachments["report"], request.params["pdf"], audit)
    except SpectralError as e:
        return _failed(e, name, params, request.output_format, audit)
    except Exception as e:
        logger.exception("%s raised an unexpected error", name)
        error = ComputationError(f"Unexpected {type(e).__name__}: {e}",
                                 details={"exception": type(e).__name__})
        return _failed(error, name, params, request.output_format, audit)

    if audit:
        if request.subcommand == Subcommand.VERIFY:
            report = result.attachments["report"]
            audit.log_verify(request.params.get("tag"), report.passed_count, report.total,
                             result.exit_status)
        else:
            audit.log_computation(name, params, result.exit_status, result.summary)
    logger.info("%s: %s", name, result.summary)
    return result.exit_status, render(result, request.output_format)


def _failed(e: SpectralError, name: str, params: Dict, output_format: str,
            audit: Optional[AuditLogger]) -> Tuple[int, str]:
    logger.error("%s failed: %s", name, e)
    if audit:
        audit.log_error(name, type(e).__name__, str(e), params=params,
                        exit_status=e.exit_status)
    return e.exit_status, render_error(e, output_format)


def build_request(subcommand: str, params: Dict[str, Any], output_format: str = "json",
                  settings: Optional[Dict[str, Any]] = None) -> Tuple[Optional[CommandRequest],
                                                                      Optional[str]]:
    """Construct a request, or return the rendered validation error instead."""
    try:
        return CommandRequest(subcommand, params, output_format, settings or dict(DEFAULTS)), None
    except ValidationError as e:
        fmt = output_format if output_format in OUTPUT_FORMATS else "json"
        return None, render_error(e, fmt)
