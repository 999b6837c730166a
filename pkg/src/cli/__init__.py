"""Command-Line Interface Module"""
from .commands import (
    Subcommand, PARAMETERS, CommandRequest, CommandResult, build_request, render, render_error, run
)
from .verify import CheckStatus, CheckResult, VerificationReport, verify_suite, verify_tags
