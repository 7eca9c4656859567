"""TeleportGenerator

An AbstractGenerator and ReportGenerator implementation that replaces every quantum hop of the chain with
teleportation and checks the parity over a batch of seeds, plus all four Bell branches at every hop.
"""

import os, sys, argparse
from generators import AbstractGenerator, ReportGenerator
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import InconsistencyError
from datamodel.qsim import QubitState, apply_section, run_chain
from datamodel.task import load_instance
from datamodel.teleport import run_teleport_chain, verify_branches

BRANCH_TOLERANCE = 1e-12


class TeleportGenerator(AbstractGenerator.AbstractGenerator, ReportGenerator.ReportGenerator):

    def generate_subparser(subparser):
        """Static method to generate a subparser for the TeleportGenerator module.

        Required Argument:
        subparser -- an argparse.ArgumentParser object to extend with a new subparser.
        """
        subparser_name = 'teleport'
        tp_parser = subparser.add_parser(subparser_name, parents=[ReportGenerator.ReportGenerator.generate_parent_parser()],
            help="Run the chain with every hop teleported over two classical bits.",
            formatter_class=argparse.RawTextHelpFormatter,
            epilog="""
Example Usages:

    100 teleported runs with seeds 5..104:
        python3 workbench.py teleport --instance instance.json --seed 5 --trials 100
""" + ReportGenerator.EXIT_CODE_HELP)
        tp_parser.add_argument('--instance', required=True, help="Instance file {\"K\": int, \"k\": [int, ...]}.")
        tp_parser.add_argument('--seed', type=ReportGenerator.non_negative_int, default=ReportGenerator.env_int('WORKBENCH_SEED', 0),
            help="First Bell-outcome seed. Attempts to load from the WORKBENCH_SEED environment variable if omitted.")
        tp_parser.add_argument('--trials', type=ReportGenerator.positive_int, default=1,
            help="Number of runs, with consecutive seeds.")
        tp_parser.set_defaults(func=TeleportGenerator.generate_teleport_report_from_args)
        return subparser_name, tp_parser


    def generate_teleport_report_from_args(args):
        exit(ReportGenerator.ReportGenerator.dispatch(args, TeleportGenerator.build))


    def branch_check(instance):
        """Largest outcome distance over all four Bell branches, at the state each hop actually sends."""
        _state = QubitState.up()
        _worst = 0.0
        for _k in instance.values[:-1]:
            _state = apply_section(_state, _k, instance.ring)
            _distance, _ = verify_branches(_state)
            _worst = max(_worst, _distance)
        return _worst


    def build(args) -> ReportGenerator.Outcome:
        _instance = load_instance(args.instance)
        _expected = run_chain(_instance, model="amplitude").parity
        if _expected != _instance.parity:
            raise InconsistencyError(f"direct chain read {_expected}, the instance is {_instance.parity}")
        _first = None
        for _seed in range(args.seed, args.seed + args.trials):
            _result = run_teleport_chain(_instance, _seed)
            if _result.parity != _expected:
                raise InconsistencyError(f"teleported chain read {_result.parity} with seed {_seed}, expected {_expected}")
            if _result.transcript.bit_count != 2 * (_instance.n_parties - 1):
                raise InconsistencyError(f"transcript carries {_result.transcript.bit_count} bits for N={_instance.n_parties}")
            if _first is None:
                _first = _result
        _worst = TeleportGenerator.branch_check(_instance)
        if _worst >= BRANCH_TOLERANCE:
            raise InconsistencyError(f"a Bell branch missed the input state by {_worst:.3g}")
        return ReportGenerator.Outcome(payload={
            "instance": _instance.to_dict(),
            "parity": _expected,
            "trials": args.trials,
            "bits_per_hop": 2,
            "max_branch_distance": _worst,
            "first_run": _first.to_dict()
        }, asserted=True)
