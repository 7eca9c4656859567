import unittest, os, sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from generators import StatusGenerator
from datamodel import ResultsAggregator as ra

class TestStatusGenerator(unittest.TestCase):

    def test_status_report_pass(self):
        _st_generator = StatusGenerator.StatusGenerator(
            passing_quality_gate=100,
            executed_quality_gate=100,
            trials=20
        )
        self.assertEqual(_st_generator.aggregated_results.get_failures(), [])
        _st_report = _st_generator.generate_status()
        self.assertEqual(_st_report, 0)


    def test_status_report_fail(self):
        _st_generator = StatusGenerator.StatusGenerator(
            passing_quality_gate=100,
            executed_quality_gate=100,
            trials=20
        )
        _st_generator.aggregated_results.insert_result("search", ra.ResultsAggregator.failed, "injected failure", {})
        _st_report = _st_generator.generate_status()
        self.assertEqual(_st_report, 1)


    def test_status_counts_every_suite(self):
        _st_generator = StatusGenerator.StatusGenerator(trials=5)
        _suites = {r['suite'] for r in _st_generator.aggregated_results.get_results()}
        self.assertEqual(_suites, {"lemma", "search", "criterion", "quantum", "teleport"})

if __name__ == '__main__':
    unittest.main()
