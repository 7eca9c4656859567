"""SearchGenerator

An AbstractGenerator and ReportGenerator implementation that searches L = 1..max-L for a perfect classical protocol and
reports the smallest feasible alphabet, as JSON or as CSV rows.
"""

import json, os, sys, argparse
from generators import AbstractGenerator, ReportGenerator
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
import builder
from datamodel.search import DEFAULT_NODE_BUDGET, DEFAULT_PROTOCOL_BUDGET, Verdict, min_l


class SearchGenerator(AbstractGenerator.AbstractGenerator, ReportGenerator.ReportGenerator):

    def generate_subparser(subparser):
        """Static method to generate a subparser for the SearchGenerator module.

        Required Argument:
        subparser -- an argparse.ArgumentParser object to extend with a new subparser.
        """
        subparser_name = 'search'
        se_parser = subparser.add_parser(subparser_name, parents=[ReportGenerator.ReportGenerator.generate_parent_parser()],
            help="Find the smallest alphabet L admitting a perfect classical protocol.",
            formatter_class=argparse.RawTextHelpFormatter,
            epilog="""
Example Usages:

    Search L = 1..4 for two parties over Z_4 and print CSV rows:
        python3 workbench.py search --n 2 --k 2 --max-l 4 --format csv

    Exhaustively enumerate every transition table instead:
        python3 workbench.py search --n 2 --k 2 --max-l 3 --method exhaustive

    Cross-check a verdict with pruning disabled:
        python3 workbench.py search --n 3 --k 2 --max-l 3 --no-domination --no-growth-pruning --no-symmetry
""" + ReportGenerator.EXIT_CODE_HELP)
        se_parser.add_argument('--n', type=ReportGenerator.positive_int, required=True, help="Number of parties N.")
        se_parser.add_argument('--k', type=ReportGenerator.positive_int, required=True, help="K; values live in Z_2K.")
        se_parser.add_argument('--max-l', type=ReportGenerator.positive_int,
            help="Largest alphabet to try, at most 2K.  Defaults to 2K.")
        se_parser.add_argument('--method', choices=['profile', 'exhaustive'], default='profile',
            help="Reach-set profile search, or enumeration of every transition table.")
        se_parser.add_argument('--budget', type=ReportGenerator.positive_int,
            help="Node budget (profile) or table budget (exhaustive).  Attempts to load from WORKBENCH_NODE_BUDGET or WORKBENCH_PROTOCOL_BUDGET if omitted.")
        se_parser.add_argument('--no-domination', action='store_true', help="Disable domination pruning.")
        se_parser.add_argument('--no-growth-pruning', action='store_true', help="Disable growth-lemma size bounds.")
        se_parser.add_argument('--no-symmetry', action='store_true', help="Disable affine symmetry reduction.")
        se_parser.set_defaults(func=SearchGenerator.generate_search_report_from_args, csv_supported=True)
        return subparser_name, se_parser


    def generate_search_report_from_args(args):
        exit(ReportGenerator.ReportGenerator.dispatch(args, SearchGenerator.build))


    def options_of(args) -> dict:
        return {
            "node_budget": args.budget or ReportGenerator.env_int('WORKBENCH_NODE_BUDGET', DEFAULT_NODE_BUDGET),
            "protocol_budget": args.budget or ReportGenerator.env_int('WORKBENCH_PROTOCOL_BUDGET', DEFAULT_PROTOCOL_BUDGET),
            "domination": not args.no_domination,
            "growth_pruning": not args.no_growth_pruning,
            "symmetry": not args.no_symmetry,
        }


    def build(args) -> ReportGenerator.Outcome:
        ReportGenerator.ReportGenerator.check_k(args, args.k)
        _l_max = args.max_l if args.max_l is not None else 2 * args.k
        _result = min_l(args.n, args.k, _l_max, method=args.method, workers=args.workers, **SearchGenerator.options_of(args))
        _unknown = any(r.verdict == Verdict.unknown for r in _result.reports)
        _summary = builder.summarize_min_l(builder.reports_to_frame(_result.reports))
        _payload = _result.to_dict()
        _payload["summary"] = json.loads(_summary.to_json(orient="records"))
        return ReportGenerator.Outcome(
            payload=_payload,
            asserted=all(r.asserted for r in _result.reports),
            exit_code=ReportGenerator.EXIT_BUDGET if _unknown else ReportGenerator.EXIT_OK,
            csv=builder.to_csv(_result.reports, include_seconds=not args.omit_metadata),
            metadata={"seconds_per_l": {str(r.alphabet_size): r.seconds for r in _result.reports}})
