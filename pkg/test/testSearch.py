import unittest, os, sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import BudgetExceededError, InvalidArgumentError, UnsupportedSizeError
from datamodel.protocol import VerifyResult, decidable, verify
from datamodel.search import (Method, ProfileSearch, Verdict, exhaustive_count, exhaustive_exists, min_l, profile_exists,
                              run_search, running_sum_witness, theorem_verdict)
from datamodel.zring import RingSize

class TestSearch(unittest.TestCase):

    def test_theorem_verdict(self):
        self.assertEqual(theorem_verdict(1, 4, 1), Verdict.exists)
        self.assertEqual(theorem_verdict(3, 2, 4), Verdict.exists)
        self.assertEqual(theorem_verdict(3, 2, 3), Verdict.impossible)
        self.assertIsNone(theorem_verdict(2, 2, 2))
        self.assertIsNone(theorem_verdict(3, 3, 2))
        with self.assertRaises(InvalidArgumentError):
            theorem_verdict(0, 2, 2)


    def test_exhaustive_finds_first_witness(self):
        _report = exhaustive_exists(2, 2, 2)
        self.assertEqual(_report.verdict, Verdict.exists)
        self.assertEqual(_report.method, Method.exhaustive)
        self.assertEqual(_report.nodes_explored, 4)
        self.assertEqual(_report.witness.transitions[0][0], (1, 1, 2, 2))
        self.assertEqual(verify(_report.witness).verdict, VerifyResult.perfect)


    def test_exhaustive_impossible(self):
        _report = exhaustive_exists(2, 1, 1)
        self.assertEqual(_report.verdict, Verdict.impossible)
        self.assertEqual(_report.nodes_explored, exhaustive_count(2, 1, 1))
        self.assertIsNone(_report.witness)
        self.assertEqual(exhaustive_exists(2, 2, 1).verdict, Verdict.impossible)


    def test_exhaustive_budget(self):
        self.assertEqual(exhaustive_count(3, 2, 3), 3 ** 4 * 3 ** 12)
        with self.assertRaises(BudgetExceededError):
            exhaustive_exists(3, 2, 3, budget=1000)


    def test_profile_search_verdicts(self):
        for _n, _k, _l, _verdict in ((2, 1, 1, Verdict.impossible), (2, 2, 1, Verdict.impossible),
                                     (2, 2, 2, Verdict.exists), (3, 2, 2, Verdict.impossible),
                                     (3, 2, 3, Verdict.impossible), (3, 2, 4, Verdict.exists),
                                     (3, 4, 2, Verdict.impossible), (3, 4, 3, Verdict.impossible),
                                     (3, 4, 4, Verdict.exists)):
            with self.subTest(n=_n, k=_k, l=_l):
                _report = profile_exists(_n, _k, _l)
                self.assertEqual(_report.verdict, _verdict)
                if _verdict == Verdict.exists:
                    self.assertTrue(decidable(_report.witness))
                    self.assertEqual(verify(_report.witness).verdict, VerifyResult.perfect)


    def test_profile_matches_exhaustive(self):
        for _k, _l in ((1, 1), (2, 1), (2, 2), (2, 3)):
            with self.subTest(k=_k, l=_l):
                self.assertEqual(profile_exists(2, _k, _l).verdict, exhaustive_exists(2, _k, _l).verdict)


    def test_pruning_switches_keep_verdicts(self):
        for _options in ({"domination": False}, {"growth_pruning": False}, {"symmetry": False},
                         {"domination": False, "growth_pruning": False, "symmetry": False}):
            with self.subTest(**_options):
                self.assertEqual(profile_exists(3, 2, 3, **_options).verdict, Verdict.impossible)
                self.assertEqual(profile_exists(2, 2, 2, **_options).verdict, Verdict.exists)


    def test_profile_budget_gives_unknown(self):
        _report = profile_exists(3, 4, 3, budget=5)
        self.assertEqual(_report.verdict, Verdict.unknown)
        self.assertIsNone(_report.witness)
        self.assertFalse(_report.asserted)


    def test_profile_size_limit(self):
        with self.assertRaises(UnsupportedSizeError):
            profile_exists(2, 40, 3)
        self.assertEqual(profile_exists(2, 40, 80).verdict, Verdict.exists)


    def test_direct_witnesses(self):
        _report = profile_exists(1, 4, 1)
        self.assertEqual(_report.verdict, Verdict.exists)
        self.assertEqual(_report.nodes_explored, 0)
        _witness = running_sum_witness(3, RingSize.from_k(2), 5)
        self.assertEqual(verify(_witness).verdict, VerifyResult.perfect)
        with self.assertRaises(InvalidArgumentError):
            running_sum_witness(3, RingSize.from_k(2), 3)


    def test_canonical_key_ignores_rotation(self):
        _search = ProfileSearch(2, RingSize.from_k(2), 2)
        self.assertEqual(_search.canonical([0b0011, 0b1100]), _search.canonical([0b0110, 0b1001]))
        self.assertEqual(_search.canonical([0b0011, 0b0001]), _search.canonical([0b0011]))


    def test_min_l(self):
        _result = min_l(2, 2, 4)
        self.assertEqual([r.verdict for r in _result.reports],
                         [Verdict.impossible, Verdict.exists, Verdict.exists, Verdict.exists])
        self.assertEqual(_result.minimal, 2)
        self.assertEqual(min_l(1, 1, 2).minimal, 1)
        self.assertEqual(min_l(2, 2, 4, workers=2).to_dict()["minimal_l"], 2)
        with self.assertRaises(InvalidArgumentError):
            min_l(2, 2, 5)


    def test_min_l_three_parties_over_z8(self):
        self.assertEqual(min_l(3, 4, 4).minimal, 4)
        self.assertEqual(profile_exists(3, 4, 3, domination=False, growth_pruning=False, symmetry=False).verdict,
                         Verdict.impossible)


    def test_min_l_unknown_is_not_minimal(self):
        _result = min_l(3, 4, 3, node_budget=5)
        self.assertIsNone(_result.minimal)


    def test_run_search(self):
        self.assertEqual(run_search("exhaustive", 2, 2, 2).method, Method.exhaustive)
        self.assertEqual(run_search("profile", 2, 2, 2).method, Method.profile)
        with self.assertRaises(InvalidArgumentError):
            run_search("annealing", 2, 2, 2)


    def test_report_dict(self):
        _report = profile_exists(2, 2, 2)
        _data = _report.to_dict()
        self.assertEqual(_data["memory_bits"], 1.0)
        self.assertNotIn("seconds", _data)
        self.assertEqual(_data["witness"]["N"], 2)

if __name__ == '__main__':
    unittest.main()
