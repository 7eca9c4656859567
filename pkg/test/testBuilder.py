import unittest, os, sys
import numpy as np
import pandas as pd
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from builder import reports_to_frame, summarize_min_l, to_csv
from datamodel.search import Method, SearchReport, Verdict

class TestBuilder(unittest.TestCase):

    reports = [
        SearchReport(2, 2, 1, Verdict.impossible, Method.profile, nodes_explored=5, seconds=0.25),
        SearchReport(2, 2, 2, Verdict.exists, Method.profile, nodes_explored=7, seconds=0.5),
        SearchReport(2, 2, 3, Verdict.exists, Method.profile, nodes_explored=7, seconds=0.5),
        SearchReport(3, 4, 1, Verdict.impossible, Method.profile, nodes_explored=9),
        SearchReport(3, 4, 2, Verdict.unknown, Method.profile, nodes_explored=100),
    ]

    def test_csv_without_seconds(self):
        _lines = to_csv(TestBuilder.reports[:2], include_seconds=False).splitlines()
        self.assertEqual(_lines[0], "n,k,l,verdict,nodes,seconds,memory_bits")
        self.assertEqual(_lines[1], "2,2,1,impossible,5,0.0,0.0")
        self.assertEqual(_lines[2], "2,2,2,exists,7,0.0,1.0")


    def test_csv_keeps_seconds(self):
        _lines = to_csv(TestBuilder.reports[:1]).splitlines()
        self.assertEqual(_lines[1], "2,2,1,impossible,5,0.25,0.0")


    def test_frame_types(self):
        df = reports_to_frame(TestBuilder.reports)
        self.assertEqual(len(df), 5)
        self.assertEqual(str(df.nodes.dtype), "int64")
        self.assertEqual(df.memory_bits.tolist()[:2], [0.0, 1.0])
        self.assertAlmostEqual(df.memory_bits[2], np.log2(3))


    def test_summarize_min_l(self):
        _summary = summarize_min_l(reports_to_frame(TestBuilder.reports))
        self.assertEqual(_summary.n.tolist(), [2, 3])
        self.assertEqual(_summary.k.tolist(), [2, 4])
        self.assertEqual(_summary.min_l[0], 2)
        self.assertTrue(pd.isna(_summary.min_l[1]))
        self.assertEqual(_summary.l_searched.tolist(), [3, 2])
        self.assertEqual(_summary.certain.tolist(), [True, False])


    def test_summary_frame(self):
        _expected = pd.DataFrame({"n": [2, 3], "k": [2, 4], "min_l": pd.array([2, None], dtype="Int64"),
                                  "l_searched": [3, 2], "certain": [True, False]})
        pd.testing.assert_frame_equal(summarize_min_l(reports_to_frame(TestBuilder.reports)), _expected)

if __name__ == '__main__':
    unittest.main()
