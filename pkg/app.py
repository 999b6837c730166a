"""
Hybrid Spectral Toolkit
Main Command-Line Application
"""

import argparse
import logging
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from config.settings import LOG_LEVEL, OUTPUT_FORMATS, resolve_settings
from src.cli import PARAMETERS, Subcommand, build_request, render_error, run, verify_tags
from src.utils.audit_logger import AuditLogger
from src.utils.errors import ValidationError

logger = logging.getLogger("spectral")


def _configure_logging(level):
    logging.basicConfig(level=level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                        stream=sys.stderr)


class _ArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors become validation errors instead of exiting."""

    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}",
                              details={"usage": self.format_usage().strip()})


def _requested_format(argv) -> str:
    """Output format named on the command line, read before full parsing succeeds."""
    argv = list(sys.argv[1:] if argv is None else argv)
    for i, arg in enumerate(argv):
        value = None
        if arg == "--format" and i + 1 < len(argv):
            value = argv[i + 1]
        elif arg.startswith("--format="):
            value = arg.split("=", 1)[1]
        if value in OUTPUT_FORMATS:
            return value
    return "json"


def _add_problem_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--problem", choices=["interval", "half-disc", "hemisphere"],
                        help="Eigenproblem (default interval)")
    parser.add_argument("--left", help="Left end condition D, N or R")
    parser.add_argument("--right", help="Right end condition D, N or R")
    parser.add_argument("--h", type=float, help="Robin parameter")
    parser.add_argument("--length", type=float, help="Interval length (default pi)")
    parser.add_argument("--pair", help="Condition pair, e.g. DN (half-disc: diameter then arc)")
    parser.add_argument("--bc0", help="Hemisphere condition on the phi=0 semicircle, D or N")


def _parse_args(argv=None):
    p = _ArgumentParser(
        description="Spectra, heat-kernel coefficients, zeta functions and Casimir energies "
                    "of hybrid Dirichlet/Neumann/Robin problems.")
    p.add_argument("--config", help="key=value file overriding the default tolerances")
    p.add_argument("--format", default="json", choices=OUTPUT_FORMATS, help="Output format")
    p.add_argument("--threads", type=int, help="Worker threads")
    p.add_argument("--cutoff", type=float, help="Eigenvalue cutoff for 2-d spectra")
    p.add_argument("--count", type=int, help="Wavenumber count for interval traces and Casimir sums")
    p.add_argument("--t-min", type=float, help="Smallest trace time")
    p.add_argument("--t-max", type=float, help="Largest trace time")
    p.add_argument("--points", type=int, help="Trace grid size")
    p.add_argument("--tail-tol", type=float, help="Allowed relative truncation bound")
    p.add_argument("--condition-limit", type=float, help="Largest acceptable fit condition number")
    p.add_argument("--route-tol", type=float, help="Allowed disagreement between routes")
    p.add_argument("--no-audit", action="store_true", help="Do not write the audit trail")
    p.add_argument("-v", "--verbose", action="count", default=0, help="Increase verbosity (-v, -vv)")
    sub = p.add_subparsers(dest="subcommand", required=True)

    spectrum = sub.add_parser("spectrum", help="Wavenumbers or eigenvalues")
    _add_problem_flags(spectrum)
    spectrum.add_argument("--count", dest="n_values", type=int, help="Number of wavenumbers")
    spectrum.add_argument("--perturbative", action="store_true", help="First-order Robin roots")

    for name, text in (("trace", "Heat or cylinder trace on a log grid"),
                       ("fit", "Short-time expansion fit of a trace")):
        cmd = sub.add_parser(name, help=text)
        _add_problem_flags(cmd)
        cmd.add_argument("--kind", choices=["heat", "cylinder"])
        if name == "fit":
            cmd.add_argument("--plain", help="Comma-separated power exponents")
            cmd.add_argument("--log", help="Comma-separated t^q log t exponents")
            cmd.add_argument("--pinned", help="exponent:value pairs held fixed, comma-separated")
            cmd.add_argument("--window", help="'auto' or t_min:t_max")
            cmd.add_argument("--detect-log", action="store_true",
                             help="Compare log columns against extra powers")
            cmd.add_argument("--dimension", type=int)

    coeff = sub.add_parser("coeff", help="Heat-kernel coefficients")
    coeff.add_argument("--c1", action="store_true", help="C_1 of a geometry preset")
    coeff.add_argument("--geometry", help="Preset name, e.g. 3ball-DN")
    coeff.add_argument("--wedge", type=float, help="Wedge angle beta")
    coeff.add_argument("--pair", help="Condition pair")
    coeff.add_argument("--c32", action="store_true", help="Right-angle C_3/2 corner weight")
    coeff.add_argument("--log-series", choices=["interval", "hemisphere"])
    coeff.add_argument("--h", type=float)
    coeff.add_argument("--order", type=int)
    coeff.add_argument("--bridge", action="store_true", help="Map cylinder coefficients to heat")

    zeta = sub.add_parser("zeta", help="Zeta functions")
    zeta.add_argument("--target", choices=["riemann", "riemann-deriv", "barnes", "hemisphere",
                                           "nd-hemisphere", "lune", "interval"])
    zeta.add_argument("--s", type=float)
    zeta.add_argument("--a", type=float)
    zeta.add_argument("--pair")
    zeta.add_argument("--beta", type=float)
    zeta.add_argument("--h", type=float)

    casimir = sub.add_parser("casimir", help="Casimir energies of the pi-interval")
    casimir.add_argument("--pair")
    casimir.add_argument("--h", type=float)
    casimir.add_argument("--route", choices=["finite-part", "perturbative", "exact-integral",
                                             "probe", "sqrt-fit", "slope"])
    casimir.add_argument("--h-grid", help="Comma-separated negative h values")

    determinant = sub.add_parser("determinant", help="Determinants and effective actions")
    determinant.add_argument("--target", choices=["hemisphere", "disc", "cocycle"])
    determinant.add_argument("--pair")
    determinant.add_argument("--layout", choices=["allD", "allN_nozero", "ND"])

    verify = sub.add_parser("verify", help="Run the acceptance checks")
    verify.add_argument("--tag", choices=verify_tags())
    verify.add_argument("--pdf", help="Also write a PDF report to this path")

    audit = sub.add_parser("audit", help="Query, export or prune the audit trail")
    audit.add_argument("--action", choices=["report", "recent", "history", "export", "prune"],
                       default="report")
    audit.add_argument("--start", help="First day, YYYYMMDD")
    audit.add_argument("--end", help="Last day, YYYYMMDD")
    audit.add_argument("--limit", type=int, help="Entries shown by --action recent")
    audit.add_argument("--params-hash", help="Parameter hash for --action history")
    audit.add_argument("--days", type=int, help="Days kept by --action prune")
    audit.add_argument("--export-format", choices=["json", "csv"])
    audit.add_argument("--output", help="Export destination")
    audit.add_argument("--log-dir", help="Audit directory (default AUDIT_LOG_DIR)")
    return p.parse_args(argv)


GLOBAL_KEYS = ("cutoff", "count", "t_min", "t_max", "points", "tail_tol", "condition_limit",
               "route_tol", "threads")


def _split_args(args: argparse.Namespace):
    """Separate setting overrides from subcommand parameters."""
    values = vars(args)
    overrides = {key: values.get(key) for key in GLOBAL_KEYS}
    schema = PARAMETERS[Subcommand(args.subcommand)]
    params = {}
    for key, value in values.items():
        if key in GLOBAL_KEYS:
            continue
        if key == "n_values":
            key = "count"
        if key in schema and value not in (None, False):
            params[key] = value
    return overrides, params


def main(argv=None) -> int:
    try:
        args = _parse_args(argv)
    except ValidationError as e:
        print(render_error(e, _requested_format(argv)))
        return e.exit_status
    _configure_logging(max(getattr(logging, LOG_LEVEL.upper(), logging.WARNING) - 10 * args.verbose,
                           logging.DEBUG))
    overrides, params = _split_args(args)
    try:
        settings = resolve_settings(args.config, overrides)
    except ValidationError as e:
        print(render_error(e, args.format))
        return e.exit_status

    request, error = build_request(args.subcommand, params, args.format, settings)
    if error is not None:
        print(error)
        return 2
    audit = None if args.no_audit or args.subcommand == "audit" else AuditLogger()
    status, output = run(request, audit=audit, audit_enabled=not args.no_audit)
    sys.stdout.write(output if output.endswith("\n") else output + "\n")
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
