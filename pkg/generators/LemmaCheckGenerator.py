"""LemmaCheckGenerator

An AbstractGenerator and ReportGenerator implementation that sweeps every nonempty subset of Z_2K and checks the sumset
identity, the growth lemma (K a power of two) and the period structure of every zero-growth collision.
"""

import os, sys, argparse
from generators import AbstractGenerator, ReportGenerator
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import InvalidArgumentError
from datamodel.zring import RingSize, lemma_sweep
from datamodel import ResultsAggregator as ra

# 2^(2K) subsets, each with up to 2K*(2K-1) pairs
MAX_SWEEP_TWO_K = 20


class LemmaCheckGenerator(AbstractGenerator.AbstractGenerator, ReportGenerator.ReportGenerator):

    def __init__(self, two_k, pairs="exhaustive", max_witnesses=1000):
        """Create a LemmaCheckGenerator for one modulus.

        Required Arguments:
        two_k   -- the even modulus 2K

        Keyword Arguments:
        pairs   -- 'exhaustive' or 'difference'
        max_witnesses   -- cap on the zero-growth K-free witnesses kept
        """
        if two_k > MAX_SWEEP_TWO_K:
            raise InvalidArgumentError(f"lemma sweeps support 2K <= {MAX_SWEEP_TWO_K}, got {two_k}")
        self.ring = RingSize.from_two_k(two_k)
        self.pairs = pairs
        self.max_witnesses = max_witnesses


    def generate_subparser(subparser):
        """Static method to generate a subparser for the LemmaCheckGenerator module.

        Required Argument:
        subparser -- an argparse.ArgumentParser object to extend with a new subparser.
        """
        subparser_name = 'lemma-check'
        lc_parser = subparser.add_parser(subparser_name, parents=[ReportGenerator.ReportGenerator.generate_parent_parser()],
            help="Exhaustively check the sumset growth lemma over Z_2K.",
            formatter_class=argparse.RawTextHelpFormatter,
            epilog="""
Example Usages:

    Confirm the growth lemma for K = 4:
        python3 workbench.py lemma-check --two-k 8

    Show that it fails when K is not a power of two:
        python3 workbench.py lemma-check --two-k 6 --allow-non-power-of-two
""" + ReportGenerator.EXIT_CODE_HELP)
        lc_parser.add_argument('--two-k', type=ReportGenerator.positive_int, required=True,
            help="The even modulus 2K to sweep.")
        lc_parser.add_argument('--pairs', choices=['exhaustive', 'difference'], default='exhaustive',
            help="Visit every ordered pair (a, b), or only the differences b - a.")
        lc_parser.add_argument('--max-witnesses', type=ReportGenerator.non_negative_int, default=1000,
            help="Maximum number of zero-growth K-free witnesses listed in the report.")
        lc_parser.set_defaults(func=LemmaCheckGenerator.generate_lemma_report_from_args)
        return subparser_name, lc_parser


    def generate_lemma_report_from_args(args):
        exit(ReportGenerator.ReportGenerator.dispatch(args, LemmaCheckGenerator.build))


    def build(args) -> ReportGenerator.Outcome:
        if args.two_k < 2 or args.two_k % 2:
            raise InvalidArgumentError(f"--two-k must be an even integer >= 2, got {args.two_k}")
        ReportGenerator.ReportGenerator.check_k(args, args.two_k // 2)
        _generator = LemmaCheckGenerator(args.two_k, pairs=args.pairs, max_witnesses=args.max_witnesses)
        _report, _aggregator = _generator.generate_lemma_report()
        return ReportGenerator.Outcome(
            payload={"sweep": _report.to_dict(), "checks": _aggregator.get_raw_results()},
            asserted=_generator.ring.k_is_power_of_two,
            exit_code=ReportGenerator.EXIT_OK if _aggregator.get_status() == ra.ResultsAggregator.passed else ReportGenerator.EXIT_CHECK_FAILED)


    def generate_lemma_report(self):
        """Run the sweep and tally its checks; the growth check is exploratory when K is not a power of two."""
        _report = lemma_sweep(self.ring, pairs=self.pairs, max_witnesses=self.max_witnesses)
        _aggregator = ra.ResultsAggregator()
        _suite = f"Z_{self.ring.two_k}"
        if self.pairs == "exhaustive" and _report.identity_checks:
            _aggregator.insert_result(_suite, ra.ResultsAggregator.passed if _report.identity_violations == 0 else ra.ResultsAggregator.failed,
                "sumset identity", {"checks": _report.identity_checks, "violations": _report.identity_violations})
        _aggregator.insert_result(_suite, ra.ResultsAggregator.passed if _report.period_failures == 0 else ra.ResultsAggregator.failed,
            "period structure", {"checks": _report.period_checks, "failures": _report.period_failures})
        if self.ring.k_is_power_of_two:
            _aggregator.insert_result(_suite, ra.ResultsAggregator.passed if _report.growth_violations == 0 else ra.ResultsAggregator.failed,
                "growth lemma", {"violations": _report.growth_violations})
        else:
            _aggregator.insert_result(_suite, ra.ResultsAggregator.exploratory,
                "growth lemma", {"zero_growth_k_free": _report.zero_growth_k_free})
        return _report, _aggregator
