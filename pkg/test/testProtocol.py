import json, unittest, os, sys, tempfile
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import InvalidArgumentError, ValidationError, UndecidableError
from datamodel.protocol import (ProtocolTable, VerifyResult, decidable, decide_from_reach, dump_protocol, execute,
                                load_protocol, partial_sum_protocol, protocol_from_dict, random_protocol, reach_sets,
                                rounding_protocol, uncertainty_profile, verify)
from datamodel.task import DiscreteInstance, Parity
from datamodel.zring import RingSize, is_k_free, rotate_mask

class TestProtocol(unittest.TestCase):

    z4 = RingSize.from_k(2)
    z8 = RingSize.from_k(4)

    def test_partial_sum_protocol_is_perfect(self):
        _p = partial_sum_protocol(3, TestProtocol.z4)
        _result = verify(_p)
        self.assertEqual(_result.verdict, VerifyResult.perfect)
        self.assertIsNone(_result.counterexample)
        self.assertEqual(_result.inputs_checked, 4 * 4 * 2)
        self.assertTrue(decidable(_p))
        self.assertEqual(uncertainty_profile(_p), [1, 1, 1])


    def test_execute(self):
        _p = partial_sum_protocol(2, TestProtocol.z4)
        self.assertEqual(execute(_p, DiscreteInstance.of([1, 3], 2)), Parity.even)
        self.assertEqual(execute(_p, DiscreteInstance.of([1, 1], 2)), Parity.odd)
        with self.assertRaises(InvalidArgumentError):
            execute(_p, DiscreteInstance.of([1, 1, 2], 2))


    def test_reach_sets(self):
        _stages = reach_sets(partial_sum_protocol(3, TestProtocol.z4))
        self.assertEqual(sorted(_stages.keys()), [1, 2])
        for _reach in _stages[1]:
            self.assertEqual(_reach.set.members, (_reach.message - 1,))


    def test_rounding_protocol(self):
        for _n, _ring, _size in ((2, TestProtocol.z4, 2), (2, TestProtocol.z8, 2), (3, TestProtocol.z8, 4)):
            with self.subTest(n=_n, k=_ring.k, l=_size):
                _p = rounding_protocol(_n, _ring, _size)
                self.assertTrue(decidable(_p))
                self.assertEqual(verify(_p).verdict, VerifyResult.perfect)
        self.assertEqual(uncertainty_profile(rounding_protocol(3, TestProtocol.z8, 4)), [1, 2, 3])


    def test_k_free_reach_sets_grow_at_the_next_stage(self):
        # fewer than 2K messages force two shifts of a reach set into one successor
        for _ring in (TestProtocol.z4, TestProtocol.z8):
            for _size in range(1, _ring.two_k):
                for _seed in range(5):
                    _stages = reach_sets(random_protocol(4, _ring, _size, _seed))
                    for n in (1, 2):
                        for _reach in _stages[n]:
                            if _reach.set.is_empty() or not is_k_free(_reach.set):
                                continue
                            _grown = [r for r in _stages[n + 1]
                                      if len(r.set) > len(_reach.set)
                                      and any(rotate_mask(_reach.set.mask, _k, _ring.two_k) & r.set.mask
                                              == rotate_mask(_reach.set.mask, _k, _ring.two_k)
                                              for _k in range(_ring.two_k))]
                            with self.subTest(k=_ring.k, l=_size, seed=_seed, stage=n, message=_reach.message):
                                self.assertTrue(_grown)


    def test_undecidable_protocol(self):
        _p = ProtocolTable(2, TestProtocol.z4, 1, (((1, 1, 1, 1),),))
        self.assertFalse(decidable(_p))
        with self.assertRaises(UndecidableError):
            decide_from_reach(_p)
        _result = verify(_p.with_decision(decide_from_reach(_p, strict=False)))
        self.assertEqual(_result.verdict, VerifyResult.flawed)
        self.assertEqual(_result.counterexample.values, (0, 2))
        self.assertEqual(_result.counterexample.expected, Parity.odd)
        self.assertEqual(_result.counterexample.produced, Parity.even)
        self.assertEqual(_result.inputs_checked, 2)


    def test_verify_with_workers(self):
        _perfect = partial_sum_protocol(3, TestProtocol.z4)
        self.assertEqual(verify(_perfect, workers=2), verify(_perfect))
        _flawed = random_protocol(3, TestProtocol.z4, 2, 3)
        if not decidable(_flawed):
            self.assertEqual(verify(_flawed, workers=3).counterexample, verify(_flawed).counterexample)


    def test_decidable_matches_verify(self):
        for _seed in range(30):
            _p = random_protocol(2, TestProtocol.z4, 3, _seed)
            with self.subTest(seed=_seed):
                self.assertEqual(decidable(_p), verify(_p).verdict == VerifyResult.perfect)
        self.assertEqual(random_protocol(3, TestProtocol.z8, 3, 9), random_protocol(3, TestProtocol.z8, 3, 9))


    def test_single_party(self):
        _p = ProtocolTable(1, TestProtocol.z4, 1, ())
        _p = _p.with_decision(decide_from_reach(_p))
        self.assertEqual(verify(_p).verdict, VerifyResult.perfect)
        self.assertEqual(execute(_p, DiscreteInstance.of([2], 2)), Parity.odd)


    def test_table_validation(self):
        with self.assertRaises(ValidationError):
            ProtocolTable(2, TestProtocol.z4, 1, (((1, 1, 2, 1),),))
        with self.assertRaises(ValidationError):
            ProtocolTable(2, TestProtocol.z4, 1, ())
        with self.assertRaises(ValidationError):
            protocol_from_dict({"N": 2, "K": 2})


    def test_protocol_files(self):
        _p = rounding_protocol(3, TestProtocol.z8, 4)
        with tempfile.TemporaryDirectory() as _dir:
            _path = os.path.join(_dir, "protocol.json")
            dump_protocol(_p, _path)
            self.assertEqual(load_protocol(_path), _p)
            _data = _p.to_dict()
            _data["decision"] = None
            with open(_path, "w+") as f:
                f.write(json.dumps(_data))
            self.assertEqual(load_protocol(_path).decision, decide_from_reach(_p))
            with open(_path, "w+") as f:
                f.write(json.dumps({"N": 2, "K": 2, "L": 1, "transitions": [[[1, 1, 1, 1]]], "decision": None}))
            with self.assertRaises(UndecidableError):
                load_protocol(_path)

if __name__ == '__main__':
    unittest.main()
