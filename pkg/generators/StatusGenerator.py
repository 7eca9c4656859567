"""StatusGenerator

An AbstractGenerator and ReportGenerator implementation that runs the desk-scale acceptance checks and exits with 0 when
they pass and 1 otherwise.
"""

import itertools, os, sys, argparse
import numpy as np
from generators import AbstractGenerator, ReportGenerator
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel import ResultsAggregator as ra
from datamodel.errors import WorkbenchError
from datamodel.protocol import ProtocolTable, VerifyResult, decidable, decide_from_reach, verify
from datamodel.qsim import QubitState, run_chain
from datamodel.search import Verdict, exhaustive_exists, profile_exists
from datamodel.task import Parity, random_instance
from datamodel.teleport import run_teleport_chain, verify_branches
from datamodel.zring import RingSize, lemma_sweep


def _state(passed):
    return ra.ResultsAggregator.passed if passed else ra.ResultsAggregator.failed


class StatusGenerator(AbstractGenerator.AbstractGenerator, ReportGenerator.ReportGenerator):

    def __init__(self, passing_quality_gate=100, executed_quality_gate=100, seed=0, trials=200):
        """Create a StatusGenerator and run every check into a ResultsAggregator.

        Keyword Arguments:
        passing_quality_gate    --  a number between 0 and 100 that defines the percentage of asserted checks that must pass
        executed_quality_gate   --  a number between 0 and 100 that defines the percentage of checks that must be executed
        seed    --  seed for the randomized quantum and teleport checks
        trials  --  number of randomized instances per randomized check
        """
        self.passing_quality_gate = passing_quality_gate
        self.executed_quality_gate = executed_quality_gate
        self.seed = seed
        self.trials = trials
        self.aggregated_results = ra.ResultsAggregator()
        for _suite, _check in (("lemma", self.check_lemma), ("search", self.check_search),
                               ("criterion", self.check_criterion), ("quantum", self.check_quantum),
                               ("teleport", self.check_teleport)):
            try:
                _check()
            except WorkbenchError as ex:
                self.aggregated_results.insert_result(_suite, ra.ResultsAggregator.failed, f"{_suite} checks raised",
                    {"type": type(ex).__name__, "message": str(ex)})


    def generate_subparser(subparser):
        """Static method to generate a subparser for the StatusGenerator module.

        Required Argument:
        subparser -- an argparse.ArgumentParser object to extend with a new subparser.
        """
        subparser_name = 'status'
        st_parser = subparser.add_parser(subparser_name, parents=[ReportGenerator.ReportGenerator.generate_parent_parser()],
            help="Run the desk-scale acceptance checks, exit with 0 on pass and 1 otherwise.",
            formatter_class=argparse.RawTextHelpFormatter,
            epilog="""
Example Usages:

    Generate a status code from the acceptance checks:
        python3 workbench.py status
""" + ReportGenerator.EXIT_CODE_HELP)
        st_parser.add_argument('-eg', '--executed-quality-gate', type=ReportGenerator.non_negative_float, default=100,
            help="Percentage of the checks that must be executed (not skipped) to count as a quality result.")
        st_parser.add_argument('-pg', '--passing-quality-gate', type=ReportGenerator.non_negative_float, default=100,
            help="Percentage of the asserted checks that must pass to count as a quality result.")
        st_parser.add_argument('--seed', type=ReportGenerator.non_negative_int, default=ReportGenerator.env_int('WORKBENCH_SEED', 0),
            help="Seed for the randomized checks. Attempts to load from the WORKBENCH_SEED environment variable if omitted.")
        st_parser.add_argument('--trials', type=ReportGenerator.positive_int, default=200,
            help="Random instances per randomized check.")
        st_parser.set_defaults(func=StatusGenerator.generate_status_from_args)
        return subparser_name, st_parser


    def generate_status_from_args(args):
        exit(ReportGenerator.ReportGenerator.dispatch(args, StatusGenerator.build))


    def build(args) -> ReportGenerator.Outcome:
        _generator = StatusGenerator(passing_quality_gate=args.passing_quality_gate,
            executed_quality_gate=args.executed_quality_gate, seed=args.seed, trials=args.trials)
        return ReportGenerator.Outcome(payload=_generator.aggregated_results.get_raw_results(), asserted=True,
            exit_code=_generator.generate_status())


    def generate_status(self):
        """Return 0 if the checks meet both quality gates, 1 otherwise."""
        _status = self.aggregated_results.get_status(executed_gate=self.executed_quality_gate, passing_gate=self.passing_quality_gate)
        return ReportGenerator.EXIT_OK if _status == ra.ResultsAggregator.passed else ReportGenerator.EXIT_CHECK_FAILED


    def check_lemma(self):
        for _two_k in (4, 8, 16):
            _report = lemma_sweep(RingSize.from_two_k(_two_k), pairs="exhaustive" if _two_k <= 8 else "difference", max_witnesses=0)
            self.aggregated_results.insert_result("lemma", _state(_report.passed), f"growth lemma over Z_{_two_k}",
                {"pairs_checked": _report.pairs_checked, "growth_violations": _report.growth_violations})
        _report = lemma_sweep(RingSize.from_two_k(6))
        _found = any(sorted(w["set"]) == [0, 2, 4] for w in _report.witnesses)
        self.aggregated_results.insert_result("lemma", _state(_found), "zero-growth K-free set {0,2,4} over Z_6",
            {"zero_growth_k_free": _report.zero_growth_k_free})


    def check_search(self):
        _expected = [
            ("exhaustive", 2, 1, 1, Verdict.impossible),
            ("exhaustive", 2, 2, 1, Verdict.impossible),
            ("exhaustive", 2, 2, 2, Verdict.exists),
            ("profile", 2, 2, 2, Verdict.exists),
            ("profile", 3, 2, 3, Verdict.impossible),
            ("profile", 3, 2, 4, Verdict.exists),
            ("profile", 3, 4, 2, Verdict.impossible),
            ("profile", 3, 4, 3, Verdict.impossible),
            ("profile", 3, 4, 4, Verdict.exists),
        ]
        for _method, _n, _k, _l, _verdict in _expected:
            _report = exhaustive_exists(_n, _k, _l) if _method == "exhaustive" else profile_exists(_n, _k, _l)
            _witness_ok = _report.witness is None or verify(_report.witness).verdict == VerifyResult.perfect
            if _report.verdict != _verdict or not _witness_ok:
                _result_state = ra.ResultsAggregator.failed
            else:
                _result_state = ra.ResultsAggregator.passed if _report.asserted else ra.ResultsAggregator.exploratory
            self.aggregated_results.insert_result("search", _result_state,
                f"{_method} N={_n} K={_k} L={_l} is {_verdict}",
                {"verdict": _report.verdict, "nodes": _report.nodes_explored})
        for _l in (1, 2, 3):
            _a, _b = exhaustive_exists(2, 2, _l).verdict, profile_exists(2, 2, _l).verdict
            _c = profile_exists(2, 2, _l, domination=False, growth_pruning=False, symmetry=False).verdict
            self.aggregated_results.insert_result("search", _state(_a == _b == _c), f"methods agree at N=2 K=2 L={_l}",
                {"exhaustive": _a, "profile": _b, "unpruned": _c})


    def check_criterion(self):
        """Every transition table for N=2, K=2, L <= 3: the canonical decision verifies perfect exactly when decidable."""
        _ring = RingSize.from_k(2)
        _disagreements, _tables = 0, 0
        for _l in (1, 2, 3):
            _idle = tuple(tuple([1] * _ring.two_k) for _ in range(_l - 1))
            for _row in itertools.product(range(1, _l + 1), repeat=_ring.two_k):
                _p = ProtocolTable(2, _ring, _l, ((tuple(_row),) + _idle,))
                _p = _p.with_decision(decide_from_reach(_p, strict=False))
                _tables += 1
                if (verify(_p).verdict == VerifyResult.perfect) != decidable(_p):
                    _disagreements += 1
        self.aggregated_results.insert_result("criterion", _state(_disagreements == 0),
            "verify agrees with K-free reach sets at N=2 K=2 L<=3", {"tables": _tables, "disagreements": _disagreements})


    def check_quantum(self):
        _rng = np.random.default_rng(self.seed)
        _wrong, _max_error = 0, 0.0
        for _ in range(self.trials):
            _ring = RingSize.from_k(int(2 ** _rng.integers(0, 11)))
            _parity = Parity.odd if _rng.integers(0, 2) else Parity.even
            _instance = random_instance(int(_rng.integers(1, 200)), _ring, _parity, int(_rng.integers(0, 2 ** 32)))
            for _model in ("angle", "amplitude"):
                _result = run_chain(_instance, model=_model)
                _wrong += _result.parity != _parity
                if _model == "amplitude":
                    _max_error = max(_max_error, _result.error_probability)
        self.aggregated_results.insert_result("quantum", _state(_wrong == 0 and _max_error < 1e-9),
            "angle and amplitude models read the parity", {"trials": self.trials, "max_amplitude_error": _max_error})


    def check_teleport(self):
        _rng = np.random.default_rng(self.seed)
        _worst = 0.0
        for _ in range(4):
            _vector = _rng.normal(size=2) + 1j * _rng.normal(size=2)
            _distance, _ = verify_branches(QubitState.from_vector(_vector / np.linalg.norm(_vector)))
            _worst = max(_worst, _distance)
        self.aggregated_results.insert_result("teleport", _state(_worst < 1e-12), "all four Bell branches restore the state",
            {"max_distance": _worst})
        _wrong = 0
        for _trial in range(self.trials):
            _instance = random_instance(int(_rng.integers(1, 12)), RingSize.from_k(4),
                Parity.odd if _rng.integers(0, 2) else Parity.even, int(_rng.integers(0, 2 ** 32)))
            _result = run_teleport_chain(_instance, _trial)
            _wrong += _result.parity != _instance.parity or _result.transcript.bit_count != 2 * (_instance.n_parties - 1)
        self.aggregated_results.insert_result("teleport", _state(_wrong == 0), "teleported chains read the parity",
            {"trials": self.trials, "wrong": _wrong})
