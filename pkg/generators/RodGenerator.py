"""RodGenerator

An AbstractGenerator and ReportGenerator implementation for the classical rod: a real angle rotated section by section
with injected jitter.  Total jitter below a quarter rotation cannot flip the reading; larger jitter is exploratory.
"""

import os, sys, argparse
from generators import AbstractGenerator, ReportGenerator
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import InconsistencyError
from datamodel.qsim import QUARTER_ROTATION, run_rod
from datamodel.task import load_instance


class RodGenerator(AbstractGenerator.AbstractGenerator, ReportGenerator.ReportGenerator):

    def generate_subparser(subparser):
        """Static method to generate a subparser for the RodGenerator module.

        Required Argument:
        subparser -- an argparse.ArgumentParser object to extend with a new subparser.
        """
        subparser_name = 'rod'
        rod_parser = subparser.add_parser(subparser_name, parents=[ReportGenerator.ReportGenerator.generate_parent_parser()],
            help="Rotate a classical rod with per-section jitter and read the parity.",
            formatter_class=argparse.RawTextHelpFormatter,
            epilog="""
Example Usages:

    One noisy run:
        python3 workbench.py rod --instance instance.json --jitter 0.05 --seed 3

    Count flipped readings over 500 consecutive seeds:
        python3 workbench.py rod --instance instance.json --jitter 0.5 --seed 0 --sweep 500
""" + ReportGenerator.EXIT_CODE_HELP)
        rod_parser.add_argument('--instance', required=True, help="Instance file {\"K\": int, \"k\": [int, ...]}.")
        rod_parser.add_argument('--jitter', type=ReportGenerator.non_negative_float, default=0.0,
            help="Uniform jitter amplitude in radians added at every section.")
        rod_parser.add_argument('--seed', type=ReportGenerator.non_negative_int, default=ReportGenerator.env_int('WORKBENCH_SEED', 0),
            help="Jitter seed. Attempts to load from the WORKBENCH_SEED environment variable if omitted.")
        rod_parser.add_argument('--sweep', type=ReportGenerator.positive_int,
            help="Run this many consecutive seeds starting at --seed and count flipped readings.")
        rod_parser.set_defaults(func=RodGenerator.generate_rod_report_from_args)
        return subparser_name, rod_parser


    def generate_rod_report_from_args(args):
        exit(ReportGenerator.ReportGenerator.dispatch(args, RodGenerator.build))


    def build(args) -> ReportGenerator.Outcome:
        _instance = load_instance(args.instance)
        # worst-case accumulated jitter stays inside the quarter-rotation margin
        _guaranteed = _instance.n_parties * args.jitter < QUARTER_ROTATION
        _runs = [run_rod(_instance, args.jitter, args.seed + i) for i in range(args.sweep or 1)]
        _flipped = sum(1 for r in _runs if not r.correct)
        if _guaranteed and _flipped:
            raise InconsistencyError(f"{_flipped} readings flipped although N*jitter < pi/2")
        _payload = {
            "instance": _instance.to_dict(),
            "jitter": args.jitter,
            "margin_guaranteed": _guaranteed,
            "runs": len(_runs),
            "flipped": _flipped,
            "max_abs_injected_jitter": max(abs(r.injected_jitter) for r in _runs),
        }
        if args.sweep is None:
            _payload.update(_runs[0].to_dict())
        return ReportGenerator.Outcome(payload=_payload, asserted=_guaranteed)
