import math, unittest, os, sys
import numpy as np
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import InvalidArgumentError
from datamodel.qsim import QubitState, fidelity, run_chain
from datamodel.task import DiscreteInstance, Parity, random_instance
from datamodel.teleport import TwoQubitState, bell_pair, run_teleport_chain, teleport_hop, verify_branches
from datamodel.zring import RingSize

class TestTeleport(unittest.TestCase):

    tilted = QubitState(math.cos(0.3) + 0j, complex(math.sin(0.3) * math.cos(1.1), math.sin(0.3) * math.sin(1.1)))

    def test_bell_pair_is_normalized(self):
        self.assertAlmostEqual(float(np.linalg.norm(bell_pair().vector())), 1.0)
        with self.assertRaises(InvalidArgumentError):
            TwoQubitState((1 + 0j, 1 + 0j, 0j, 0j))
        with self.assertRaises(InvalidArgumentError):
            TwoQubitState((1 + 0j, 0j))
        with self.assertRaises(InvalidArgumentError):
            TwoQubitState((complex(math.sqrt(1 + 1e-10)), 0j, 0j, 0j))


    def test_every_branch_restores_the_state(self):
        for _outcome in range(4):
            with self.subTest(outcome=_outcome):
                _received, _bits = teleport_hop(TestTeleport.tilted, outcome=_outcome)
                self.assertEqual(_bits, divmod(_outcome, 2))
                self.assertAlmostEqual(fidelity(TestTeleport.tilted, _received), 1.0, places=12)
        _distance, _fidelity = verify_branches(TestTeleport.tilted)
        self.assertLess(_distance, 1e-12)
        self.assertGreater(_fidelity, 1 - 1e-12)


    def test_invalid_outcome(self):
        with self.assertRaises(InvalidArgumentError):
            teleport_hop(QubitState.up(), outcome=4)


    def test_seeded_hop_is_reproducible(self):
        self.assertEqual(teleport_hop(TestTeleport.tilted, seed=3)[1], teleport_hop(TestTeleport.tilted, seed=3)[1])


    def test_chain_matches_direct_run(self):
        _ring = RingSize.from_k(4)
        for _seed in range(20):
            _parity = Parity.odd if _seed % 2 else Parity.even
            _instance = random_instance(6, _ring, _parity, _seed)
            with self.subTest(seed=_seed):
                _result = run_teleport_chain(_instance, _seed)
                self.assertEqual(_result.parity, run_chain(_instance, model="amplitude").parity)
                self.assertEqual(_result.parity, _parity)
                self.assertLess(_result.error_probability, 1e-9)
                self.assertEqual(_result.transcript.bit_count, 2 * 5)


    def test_transcript(self):
        _instance = DiscreteInstance.of([1, 1, 2], 2)
        _result = run_teleport_chain(_instance, 8)
        self.assertEqual(_result, run_teleport_chain(_instance, 8))
        _data = _result.to_dict()
        self.assertEqual(_data["transcript"]["seed"], 8)
        self.assertEqual([h["hop"] for h in _data["transcript"]["hops"]], [1, 2])
        self.assertEqual(run_teleport_chain(DiscreteInstance.of([1], 1), 0).transcript.bit_count, 0)

if __name__ == '__main__':
    unittest.main()
