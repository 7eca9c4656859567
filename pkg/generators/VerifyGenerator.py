"""VerifyGenerator

An AbstractGenerator and ReportGenerator implementation that checks a classical protocol file on every promise input
and reports its reach sets and the first counterexample, if any.
"""

import os, sys, argparse
from generators import AbstractGenerator, ReportGenerator
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import InconsistencyError
from datamodel.protocol import VerifyResult, decidable, load_protocol, reach_sets, uncertainty_profile, verify


class VerifyGenerator(AbstractGenerator.AbstractGenerator, ReportGenerator.ReportGenerator):

    def generate_subparser(subparser):
        """Static method to generate a subparser for the VerifyGenerator module.

        Required Argument:
        subparser -- an argparse.ArgumentParser object to extend with a new subparser.
        """
        subparser_name = 'verify'
        ve_parser = subparser.add_parser(subparser_name, parents=[ReportGenerator.ReportGenerator.generate_parent_parser()],
            help="Verify a classical protocol on every promise input.",
            formatter_class=argparse.RawTextHelpFormatter,
            epilog="""
Example Usages:

    Verify a protocol file with 4 worker processes:
        python3 workbench.py verify --protocol partial_sum.json -w 4

    A protocol file with "decision": null gets the canonical decision synthesized from its reach sets.
""" + ReportGenerator.EXIT_CODE_HELP)
        ve_parser.add_argument('--protocol', required=True, help="Protocol file {\"N\", \"K\", \"L\", \"transitions\", \"decision\"}.")
        ve_parser.add_argument('--reach-sets', action='store_true', help="Include every reach set in the report.")
        ve_parser.set_defaults(func=VerifyGenerator.generate_verify_report_from_args)
        return subparser_name, ve_parser


    def generate_verify_report_from_args(args):
        exit(ReportGenerator.ReportGenerator.dispatch(args, VerifyGenerator.build))


    def build(args) -> ReportGenerator.Outcome:
        _protocol = load_protocol(args.protocol)
        _result = verify(_protocol, workers=args.workers)
        _decidable = decidable(_protocol)
        # any decision table errs on an undecidable protocol
        if _result.verdict == VerifyResult.perfect and not _decidable:
            raise InconsistencyError("protocol verified perfect but a final reach set is not K-free")
        _payload = {
            "N": _protocol.n_parties,
            "K": _protocol.ring.k,
            "L": _protocol.alphabet_size,
            "decidable": _decidable,
            "uncertainty_profile": uncertainty_profile(_protocol),
            **_result.to_dict()
        }
        if args.reach_sets:
            _payload["reach_sets"] = {str(n): [r.to_dict() for r in _sets] for n, _sets in reach_sets(_protocol).items()}
        return ReportGenerator.Outcome(payload=_payload, asserted=True)
