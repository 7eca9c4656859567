import math, unittest, os, sys
import numpy as np
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from datamodel.errors import InvalidArgumentError, IndeterminateResultError
from datamodel.qsim import (AngleState, QubitState, RealAngleState, apply_section, fidelity, measure_z, outcome_distance,
                            run_chain, run_continuous, run_rod)
from datamodel.task import DiscreteInstance, FieldSpec, Parity, random_instance
from datamodel.zring import RingSize

class TestQsim(unittest.TestCase):

    def test_models_read_parity(self):
        for _values, _k, _parity in (([1, 1], 2, Parity.odd), ([1, 3], 2, Parity.even), ([0, 0, 0], 4, Parity.even),
                                     ([3, 5, 6, 2], 4, Parity.even), ([7, 1, 4], 4, Parity.odd), ([2, 1, 1], 4, Parity.odd)):
            _instance = DiscreteInstance.of(_values, _k)
            for _model in ("angle", "amplitude", "polarization"):
                with self.subTest(values=_values, model=_model):
                    _result = run_chain(_instance, model=_model)
                    self.assertEqual(_result.parity, _parity)
                    self.assertLess(_result.error_probability, 1e-12)


    def test_random_instances_match_parity(self):
        _rng = np.random.default_rng(11)
        for _ in range(200):
            _ring = RingSize.from_k(int(2 ** _rng.integers(0, 11)))
            _parity = Parity.odd if _rng.integers(0, 2) else Parity.even
            _instance = random_instance(int(_rng.integers(1, 300)), _ring, _parity, int(_rng.integers(0, 2 ** 32)))
            self.assertEqual(run_chain(_instance, model="angle").parity, _parity)
            _amplitude = run_chain(_instance, model="amplitude")
            self.assertEqual(_amplitude.parity, _parity)
            self.assertLess(_amplitude.error_probability, 1e-9)


    def test_unknown_model(self):
        with self.assertRaises(InvalidArgumentError):
            run_chain(DiscreteInstance.of([0], 1), model="density")


    def test_apply_section_angle_state_wraps(self):
        _ring = RingSize.from_k(2)
        self.assertEqual(apply_section(AngleState(_ring, 3), 3, _ring).quanta, 2)
        self.assertAlmostEqual(apply_section(RealAngleState(0.0), 1, _ring).theta, math.pi / 2)


    def test_qubit_state_must_be_normalized(self):
        with self.assertRaises(InvalidArgumentError):
            QubitState(1 + 0j, 1 + 0j)


    def test_global_phase_is_ignored(self):
        _up = QubitState.up()
        _minus_up = QubitState(-1 + 0j, 0j)
        self.assertAlmostEqual(fidelity(_up, _minus_up), 1.0)
        self.assertAlmostEqual(outcome_distance(_up, _minus_up), 0.0)
        _down = QubitState(0j, 1 + 0j)
        self.assertAlmostEqual(outcome_distance(_up, _down), 1.0)
        self.assertEqual(measure_z(_down), (Parity.odd, 0.0))


    def test_continuous_field(self):
        _field = FieldSpec.from_pairs([[0.5, 2.0], [0.5, 6.0]], alpha=1.0)
        _result = run_continuous(_field, RingSize.from_k(2), 1000)
        self.assertEqual(_result.parity, Parity.even)
        self.assertEqual(_result.expected_parity, Parity.even)
        self.assertLess(_result.error_bound, math.pi / 2)
        self.assertAlmostEqual(_result.theta, 4 * math.pi)


    def test_continuous_refuses_coarse_steps(self):
        _field = FieldSpec.from_pairs([[0.25, 0.0], [0.75, 4.0 / 3.0]], alpha=1.0)
        with self.assertRaises(IndeterminateResultError):
            run_continuous(_field, RingSize.from_k(1), 1)
        _result = run_continuous(_field, RingSize.from_k(1), 1000)
        self.assertEqual(_result.parity, Parity.odd)
        self.assertEqual(_result.parity, _result.expected_parity)


    def test_continuous_random_fields_respect_quarter_rotation(self):
        _rng = np.random.default_rng(21)
        _ring = RingSize.from_k(2)
        _answered, _refused = 0, 0
        for _ in range(300):
            _segments = int(_rng.integers(1, 6))
            # lengths on a 1/64 grid sum exactly to 1
            _cuts = np.sort(_rng.choice(np.arange(1, 64), size=_segments - 1, replace=False))
            _lengths = np.diff(np.concatenate(([0], _cuts, [64]))) / 64.0
            _values = _rng.uniform(-10.0, 10.0, size=_segments)
            _m = int(_rng.integers(-6, 7))
            _values[-1] = (_m - float(np.dot(_lengths[:-1], _values[:-1]))) / _lengths[-1]
            _field = FieldSpec.from_pairs(list(zip(_lengths, _values)), alpha=1.0)
            _steps = int(_rng.choice([3, 7, 50, 1000]))
            try:
                _result = run_continuous(_field, _ring, _steps)
            except IndeterminateResultError:
                _refused += 1
                continue
            _answered += 1
            self.assertLess(_result.error_bound, math.pi / 2)
            self.assertEqual(_result.expected_parity, Parity.odd if _m % 2 else Parity.even)
            self.assertEqual(_result.parity, _result.expected_parity)
        self.assertGreater(_answered, 0)
        self.assertGreater(_refused, 0)


    def test_rod_jitter_margin(self):
        _quiet = DiscreteInstance.of([3, 1, 2, 2], 2)
        self.assertEqual(sum(not run_rod(_quiet, math.pi / 16, s).correct for s in range(300)), 0)
        _loud = DiscreteInstance.of([1, 1], 2)
        self.assertGreater(sum(not run_rod(_loud, math.pi, s).correct for s in range(300)), 0)


    def test_long_amplitude_chain_stays_normalized(self):
        _instance = random_instance(10000, RingSize.from_k(64), Parity.odd, 5)
        _result = run_chain(_instance, model="amplitude")
        self.assertEqual(_result.parity, Parity.odd)
        self.assertLess(_result.error_probability, 1e-9)
        with self.assertRaises(InvalidArgumentError):
            QubitState(complex(math.sqrt(1 + 1e-10)), 0j)


    def test_rod(self):
        _instance = DiscreteInstance.of([1, 1, 2], 2)
        _quiet = run_rod(_instance, 0.0, 0)
        self.assertTrue(_quiet.correct)
        self.assertEqual(_quiet.injected_jitter, 0.0)
        _noisy = run_rod(_instance, 0.4, 5)
        self.assertEqual(_noisy, run_rod(_instance, 0.4, 5))
        self.assertLessEqual(abs(_noisy.injected_jitter), 3 * 0.4)
        # 3 sections * 0.4 rad stays inside the quarter rotation
        self.assertTrue(_noisy.correct)
        with self.assertRaises(InvalidArgumentError):
            run_rod(_instance, -1.0, 0)

if __name__ == '__main__':
    unittest.main()
