"""QuantumGenerator

An AbstractGenerator and ReportGenerator implementation that runs the quantum parity protocol: on one instance file,
on a continuous field, or over a seeded batch of random instances checked against a streaming-sum oracle.
"""

import os, sys, argparse
import numpy as np
from generators import AbstractGenerator, ReportGenerator
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import InvalidArgumentError, InconsistencyError
from datamodel.qsim import run_chain, run_continuous
from datamodel.task import Parity, load_instance, load_field, random_instance
from datamodel.zring import RingSize

# amplitude simulation must stay this close to a deterministic outcome
AMPLITUDE_ERROR_LIMIT = 1e-9


def streaming_parity(values, ring: RingSize) -> str:
    _sum = 0
    for _k in values:
        _sum = (_sum + _k) % ring.two_k
    return Parity.even if _sum == 0 else Parity.odd


class QuantumGenerator(AbstractGenerator.AbstractGenerator, ReportGenerator.ReportGenerator):

    def generate_subparser(subparser):
        """Static method to generate a subparser for the QuantumGenerator module.

        Required Argument:
        subparser -- an argparse.ArgumentParser object to extend with a new subparser.
        """
        subparser_name = 'quantum'
        qu_parser = subparser.add_parser(subparser_name, parents=[ReportGenerator.ReportGenerator.generate_parent_parser()],
            help="Carry a qubit through the chain and read the parity.",
            formatter_class=argparse.RawTextHelpFormatter,
            epilog="""
Example Usages:

    Run the exact angle model on an instance file:
        python3 workbench.py quantum --instance instance.json --model angle

    Integrate a piecewise field with 1000 midpoint steps:
        python3 workbench.py quantum --field field.json --k 4 --steps 1000 --model continuous

    Check 1000 seeded random instances against the streaming-sum oracle:
        python3 workbench.py quantum --trials 1000 --n 50 --k 16 --seed 7
""" + ReportGenerator.EXIT_CODE_HELP)
        qu_parser.add_argument('--instance', help="Instance file {\"K\": int, \"k\": [int, ...]}.")
        qu_parser.add_argument('--model', choices=['angle', 'amplitude', 'polarization', 'continuous'], default='angle',
            help="Simulation model; 'continuous' needs --field, --k and --steps.")
        qu_parser.add_argument('--field', help="Field file {\"alpha\": real, \"samples\": [[length, value], ...]}.")
        qu_parser.add_argument('--k', type=ReportGenerator.positive_int, help="K for --field and --trials runs.")
        qu_parser.add_argument('--steps', type=ReportGenerator.positive_int, default=1000,
            help="Midpoint-rule steps for the continuous model.")
        qu_parser.add_argument('--trials', type=ReportGenerator.positive_int, help="Number of random instances to check.")
        qu_parser.add_argument('--n', type=ReportGenerator.positive_int, help="Number of parties for --trials runs.")
        qu_parser.add_argument('--seed', type=ReportGenerator.non_negative_int, default=ReportGenerator.env_int('WORKBENCH_SEED', 0),
            help="Seed for --trials runs. Attempts to load from the WORKBENCH_SEED environment variable if omitted.")
        qu_parser.set_defaults(func=QuantumGenerator.generate_quantum_report_from_args)
        return subparser_name, qu_parser


    def generate_quantum_report_from_args(args):
        exit(ReportGenerator.ReportGenerator.dispatch(args, QuantumGenerator.build))


    def build(args) -> ReportGenerator.Outcome:
        _modes = [m for m in (args.instance, args.field, args.trials) if m is not None]
        if len(_modes) != 1:
            raise InvalidArgumentError("give exactly one of --instance, --field or --trials")
        if args.field is not None or args.model == 'continuous':
            if args.field is None or args.k is None:
                raise InvalidArgumentError("the continuous model needs --field and --k")
            _result = run_continuous(load_field(args.field), RingSize.from_k(args.k), args.steps)
            if _result.parity != _result.expected_parity:
                raise InconsistencyError(f"continuous run read {_result.parity} within bound {_result.error_bound:.3g}, "
                                         f"the field is {_result.expected_parity}")
            return ReportGenerator.Outcome(payload=_result.to_dict(), asserted=True)
        if args.instance is not None:
            _instance = load_instance(args.instance)
            _result = run_chain(_instance, model=args.model)
            if _result.parity != _instance.parity:
                raise InconsistencyError(f"{args.model} model read {_result.parity}, the instance is {_instance.parity}")
            return ReportGenerator.Outcome(payload={"instance": _instance.to_dict(), **_result.to_dict()}, asserted=True)
        if args.n is None or args.k is None:
            raise InvalidArgumentError("--trials needs --n and --k")
        return ReportGenerator.Outcome(payload=QuantumGenerator.oracle_sweep(args.trials, args.n, args.k, args.seed), asserted=True)


    def oracle_sweep(trials, n_parties, k, seed):
        """Run the angle and amplitude models on seeded random instances and compare both to the streaming sum."""
        _ring = RingSize.from_k(k)
        _rng = np.random.default_rng(seed)
        _seeds = _rng.integers(0, 2 ** 32, size=trials)
        _parities = _rng.integers(0, 2, size=trials)
        _max_error = 0.0
        _counts = {Parity.even: 0, Parity.odd: 0}
        for _seed, _odd in zip(_seeds, _parities):
            _instance = random_instance(n_parties, _ring, Parity.odd if _odd else Parity.even, int(_seed))
            _expected = streaming_parity(_instance.values, _ring)
            for _model in ('angle', 'amplitude'):
                _result = run_chain(_instance, model=_model)
                if _result.parity != _expected:
                    raise InconsistencyError(f"{_model} model read {_result.parity} on {_instance.to_dict()}, "
                                             f"streaming sum says {_expected}")
                if _model == 'amplitude':
                    _max_error = max(_max_error, _result.error_probability)
            _counts[_expected] += 1
        if _max_error >= AMPLITUDE_ERROR_LIMIT:
            raise InconsistencyError(f"amplitude wrong-outcome probability reached {_max_error:.3g}")
        return {"trials": trials, "n": n_parties, "k": k, "seed": seed, "agreements": trials,
                "parities": _counts, "max_amplitude_error": _max_error}
