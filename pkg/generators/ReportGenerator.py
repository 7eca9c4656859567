"""ReportGenerator

Shared plumbing for every workbench subcommand: the parent argument parser, the exit-code table, and report emission.
A subcommand's build function returns an Outcome; ReportGenerator.dispatch turns it (or the error it raised) into a
JSON or CSV report and an exit status.
"""

import argparse, datetime, json, logging, os, sys, time
from dataclasses import dataclass
from typing import Callable, Optional
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import (WorkbenchError, InvalidArgumentError, ValidationError, BudgetExceededError,
                              UnsupportedSizeError, IndeterminateResultError, UndecidableError, InconsistencyError)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_MISSING_PATH = 3
EXIT_MALFORMED = 4
EXIT_BUDGET = 5
EXIT_UNSUPPORTED_SIZE = 6
EXIT_INDETERMINATE = 7
EXIT_UNDECIDABLE = 8
EXIT_INCONSISTENT = 9

# most specific first
ERROR_EXIT_CODES = [
    (FileNotFoundError, EXIT_MISSING_PATH),
    (InvalidArgumentError, EXIT_USAGE),
    (ValidationError, EXIT_MALFORMED),
    (BudgetExceededError, EXIT_BUDGET),
    (UnsupportedSizeError, EXIT_UNSUPPORTED_SIZE),
    (IndeterminateResultError, EXIT_INDETERMINATE),
    (UndecidableError, EXIT_UNDECIDABLE),
    (InconsistencyError, EXIT_INCONSISTENT),
]

EXIT_CODE_HELP = """
Exit Codes:
    0   success
    1   a status or lemma check failed
    2   usage error (bad flag values, K not a power of two without --allow-non-power-of-two)
    3   input path not found
    4   malformed or invalid instance, field or protocol file (including promise violations)
    5   search budget exhausted or verdict unknown
    6   unsupported size (2K > 64 for the profile search)
    7   indeterminate result (quadrature error bound too large)
    8   protocol undecidable (no decision table can be synthesized)
    9   internal inconsistency between independent computations
"""


def env_int(name, default):
    _value = os.getenv(name)
    if _value is None or _value == "":
        return default
    try:
        return int(float(_value))
    except ValueError:
        logger.warning(f"Ignoring non-numeric {name}={_value!r}, using {default}")
        return default


def positive_int(value):
    try:
        _parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer")
    if _parsed < 1:
        raise argparse.ArgumentTypeError(f"{value!r} must be a positive integer")
    return _parsed


def non_negative_int(value):
    try:
        _parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer")
    if _parsed < 0:
        raise argparse.ArgumentTypeError(f"{value!r} must not be negative")
    return _parsed


def non_negative_float(value):
    try:
        _parsed = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not a number")
    if not _parsed >= 0 or _parsed == float("inf"):
        raise argparse.ArgumentTypeError(f"{value!r} must be a finite non-negative number")
    return _parsed


@dataclass
class Outcome:
    payload: dict
    asserted: bool
    exit_code: int = EXIT_OK
    csv: Optional[str] = None
    metadata: Optional[dict] = None


class ReportGenerator():

    def generate_parent_parser() -> argparse.ArgumentParser:
        parent = argparse.ArgumentParser(add_help=False)
        parent.add_argument('-o', '--output-file',
            help="Destination file for the report.  The report will be output to stdout if left blank.")
        parent.add_argument('-f', '--format', choices=['json', 'csv'], default='json',
            help="Report format.  CSV is available for search only.")
        parent.add_argument('-w', '--workers', type=positive_int, default=env_int('WORKBENCH_WORKERS', 1),
            help="Number of worker processes; never changes a verdict. Attempts to load from the WORKBENCH_WORKERS environment variable if omitted.")
        parent.add_argument('--allow-non-power-of-two', action='store_true',
            help="Permit K values that are not powers of two.  Results are labeled exploratory.")
        parent.add_argument('--omit-metadata', action='store_true',
            help="Leave out timestamps and timings so replays produce byte-identical reports.")
        return parent


    def check_k(args, k):
        """Enforce K a power of two unless the exploratory override is set."""
        if k & (k - 1) != 0 and not getattr(args, 'allow_non_power_of_two', False):
            raise InvalidArgumentError(f"K={k} is not a power of two; pass --allow-non-power-of-two for exploratory runs")


    def exit_code_for(ex) -> int:
        for _type, _code in ERROR_EXIT_CODES:
            if isinstance(ex, _type):
                return _code
        return EXIT_INCONSISTENT


    def config_of(args) -> dict:
        return {k: v for k, v in sorted(vars(args).items()) if k not in ('func', 'csv_supported')}


    def render(args, outcome: Outcome, seconds: float) -> str:
        if getattr(args, 'format', 'json') == 'csv':
            return outcome.csv
        _report = {
            "config": ReportGenerator.config_of(args),
            "asserted": outcome.asserted,
            "result": outcome.payload
        }
        if not getattr(args, 'omit_metadata', False):
            _report["metadata"] = {
                "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
                "seconds": seconds,
                **(outcome.metadata or {})
            }
        return json.dumps(_report, sort_keys=True, indent=2)


    def render_error(args, ex, code) -> str:
        _report = {
            "error": {"type": type(ex).__name__, "message": str(ex), "exit_code": code},
            "config": ReportGenerator.config_of(args)
        }
        return json.dumps(_report, sort_keys=True, indent=2)


    def write(args, text):
        if getattr(args, 'output_file', None) is not None:
            with open(args.output_file, "w+") as f:
                f.write(text if text.endswith("\n") else text + "\n")
        else:
            print(text)


    def dispatch(args, build: Callable[[argparse.Namespace], Outcome]) -> int:
        """Run a subcommand's build function and emit its report; return the exit status.

        Required Arguments:
        args    -- parsed arguments carrying the parent parser's options
        build   -- function from args to an Outcome; domain errors it raises become error reports
        """
        _started = time.perf_counter()
        try:
            if getattr(args, 'format', 'json') == 'csv' and not getattr(args, 'csv_supported', False):
                raise InvalidArgumentError(f"CSV output is not available for {getattr(args, 'generator_name', 'this command')}")
            _outcome = build(args)
        except (WorkbenchError, FileNotFoundError) as ex:
            _code = ReportGenerator.exit_code_for(ex)
            logger.debug(f"{type(ex).__name__}: {ex}")
            ReportGenerator.write(args, ReportGenerator.render_error(args, ex, _code))
            return _code
        ReportGenerator.write(args, ReportGenerator.render(args, _outcome, time.perf_counter() - _started))
        return _outcome.exit_code
