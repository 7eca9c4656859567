"""qsim

Simulation of the traveling system S.  The spin vector of S is rotated in the y-z plane by pi*k_n/K at section n, so a
total sum of m*K rotates it through m/2 full turns and a z measurement at B reads the parity of m.

Three renditions of the same protocol are kept side by side:
    AngleState      -- the exact model, an integer count of pi/K quanta modulo 2K
    QubitState      -- amplitudes (a, b) rotated by the half-angle matrix, measured by outcome probability
    RealAngleState  -- a real angle, used for the classical rod and the continuous field
"""

import math, logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Union
import numpy as np
from datamodel.errors import InvalidArgumentError, IndeterminateResultError
from datamodel.task import DiscreteInstance, FieldSpec, Parity, discretize, quantize
from datamodel.zring import RingSize

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12
QUARTER_ROTATION = math.pi / 2


@dataclass(frozen=True)
class QubitState:
    amp0: complex
    amp1: complex

    def __post_init__(self):
        if abs(self.norm() - 1.0) > NORM_TOLERANCE:
            raise InvalidArgumentError(f"qubit state must be normalized, |a|^2 + |b|^2 = {self.norm()!r}")

    @classmethod
    def up(cls) -> "QubitState":
        return cls(1 + 0j, 0j)

    @classmethod
    def from_vector(cls, vector) -> "QubitState":
        return cls(complex(vector[0]), complex(vector[1]))

    def vector(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=complex)

    def norm(self) -> float:
        return abs(self.amp0) ** 2 + abs(self.amp1) ** 2

    def bloch_vector(self) -> np.ndarray:
        _a, _b = self.amp0, self.amp1
        _cross = np.conj(_a) * _b
        return np.array([2 * _cross.real, 2 * _cross.imag, abs(_a) ** 2 - abs(_b) ** 2])


@dataclass(frozen=True)
class AngleState:
    ring: RingSize
    quanta: int = 0

    def __post_init__(self):
        if self.quanta < 0 or self.quanta >= self.ring.two_k:
            raise InvalidArgumentError(f"quanta must lie in [0, {self.ring.two_k}), got {self.quanta}")

    @property
    def theta(self) -> float:
        return math.pi * self.quanta / self.ring.k


@dataclass(frozen=True)
class RealAngleState:
    theta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise InvalidArgumentError(f"angle must be finite, got {self.theta!r}")


@dataclass(frozen=True)
class ChainResult:
    parity: str
    error_probability: float
    model: str

    def to_dict(self):
        return {"parity": self.parity, "error_probability": self.error_probability, "model": self.model}


@dataclass(frozen=True)
class ContinuousResult:
    parity: str
    error_bound: float
    theta: float
    steps: int
    expected_parity: str

    def to_dict(self):
        return {
            "parity": self.parity,
            "error_bound": self.error_bound,
            "theta": self.theta,
            "steps": self.steps,
            "expected_parity": self.expected_parity
        }


@dataclass(frozen=True)
class RodResult:
    parity: str
    theta: float
    injected_jitter: float
    expected_parity: str

    @property
    def correct(self) -> bool:
        return self.parity == self.expected_parity

    def to_dict(self):
        return {
            "parity": self.parity,
            "theta": self.theta,
            "injected_jitter": self.injected_jitter,
            "expected_parity": self.expected_parity,
            "correct": self.correct
        }


def rotation_matrix(half_angle: float) -> np.ndarray:
    """Real rotation in the y-z plane acting on (amp0, amp1): exp(-i*half_angle*Y)."""
    _c, _s = math.cos(half_angle), math.sin(half_angle)
    return np.array([[_c, -_s], [_s, _c]], dtype=complex)


@lru_cache(maxsize=64)
def _section_rotations(two_k: int, k: int) -> np.ndarray:
    return np.stack([rotation_matrix(math.pi * _k / (2 * k)) for _k in range(two_k)])


State = Union[QubitState, AngleState, RealAngleState]


def apply_section(state: State, k_n: int, ring: RingSize) -> State:
    """Advance the spin-vector angle by pi*k_n/K; amplitude states rotate by half that angle.

    Required Arguments:
    state   -- QubitState, AngleState or RealAngleState
    k_n     -- the section's value in [0, 2K)
    ring    -- the RingSize carrying K
    """
    ring.check_element(k_n, "k_n")
    if isinstance(state, AngleState):
        if state.ring != ring:
            raise InvalidArgumentError(f"angle state quantized for K={state.ring.k}, section uses K={ring.k}")
        return AngleState(ring, (state.quanta + k_n) % ring.two_k)
    if isinstance(state, RealAngleState):
        return RealAngleState(state.theta + math.pi * k_n / ring.k)
    if isinstance(state, QubitState):
        _rotated = _section_rotations(ring.two_k, ring.k)[k_n] @ state.vector()
        return QubitState.from_vector(_rotated)
    raise InvalidArgumentError(f"unsupported state type {type(state).__name__}")


def _nearest_pole(theta: float) -> str:
    return Parity.even if round(theta / math.pi) % 2 == 0 else Parity.odd


def measure_z(state: State):
    """Measure along z deterministically: return the more probable outcome and the probability of the other one."""
    if isinstance(state, QubitState):
        _p_up, _p_down = abs(state.amp0) ** 2, abs(state.amp1) ** 2
        if _p_up >= _p_down:
            return Parity.even, _p_down
        return Parity.odd, _p_up
    _theta = state.theta
    _p_down = math.sin(_theta / 2) ** 2
    _parity = _nearest_pole(_theta)
    return _parity, (_p_down if _parity == Parity.even else 1.0 - _p_down)


def fidelity(a: QubitState, b: QubitState) -> float:
    return abs(np.vdot(a.vector(), b.vector())) ** 2


def outcome_distance(a: QubitState, b: QubitState) -> float:
    """Largest difference in outcome probability over the x, y and z measurements; blind to global phase."""
    return float(np.max(np.abs(a.bloch_vector() - b.bloch_vector())) / 2)


def _run_polarization(instance: DiscreteInstance) -> ChainResult:
    # the photon's polarization turns by half the spin angle: vertical <=> even, horizontal <=> odd
    _ring = instance.ring
    _jones = np.array([1.0, 0.0])
    for _k in instance.values:
        _psi = math.pi * _k / (2 * _ring.k)
        _jones = np.array([[math.cos(_psi), -math.sin(_psi)], [math.sin(_psi), math.cos(_psi)]]) @ _jones
    _p_vertical = float(_jones[0] ** 2) / float(_jones @ _jones)
    if _p_vertical >= 0.5:
        return ChainResult(Parity.even, 1.0 - _p_vertical, "polarization")
    return ChainResult(Parity.odd, _p_vertical, "polarization")


def run_chain(instance: DiscreteInstance, model: str = "angle") -> ChainResult:
    """Carry S through every section of the instance and measure at B.

    Required Arguments:
    instance    -- a DiscreteInstance satisfying the promise

    Keyword Arguments:
    model   -- 'angle' (exact), 'amplitude' (complex amplitudes) or 'polarization' (photon reading)
    """
    if model == "polarization":
        return _run_polarization(instance)
    if model == "angle":
        _state = AngleState(instance.ring)
    elif model == "amplitude":
        _state = QubitState.up()
    else:
        raise InvalidArgumentError(f"model must be 'angle', 'amplitude' or 'polarization', got {model!r}")
    for _k in instance.values:
        _state = apply_section(_state, _k, instance.ring)
    _parity, _error = measure_z(_state)
    return ChainResult(_parity, float(_error), model)


def run_continuous(field: FieldSpec, ring: RingSize, steps: int) -> ContinuousResult:
    """Integrate d(theta) = (pi/alpha) * phi(x) dx by the composite midpoint rule and read the parity at B.

    The error bound sums h * (max phi - min phi) over every step that straddles a segment boundary; steps inside a
    single segment integrate exactly.  A bound of a quarter rotation or more refuses to answer.

    Required Arguments:
    field   -- a FieldSpec whose total integral is a multiple of alpha
    ring    -- the RingSize used to establish the ground-truth parity
    steps   -- number of quadrature steps
    """
    if not isinstance(steps, int) or steps < 1:
        raise InvalidArgumentError(f"steps must be a positive integer, got {steps!r}")
    _truth = quantize(discretize(field, 1), ring, field.alpha)
    _points = np.array(field.breakpoints())
    _values = np.array([_value for _, _value in field.samples])
    _edges = np.linspace(0.0, 1.0, steps + 1)
    _h = 1.0 / steps
    _mids = (_edges[:-1] + _edges[1:]) / 2
    _segment = np.clip(np.searchsorted(_points, _mids, side="right") - 1, 0, len(_values) - 1)
    _scale = math.pi / field.alpha
    _theta = _scale * _h * float(np.sum(_values[_segment]))
    _lo = np.clip(np.searchsorted(_points, _edges[:-1], side="right") - 1, 0, len(_values) - 1)
    _hi = np.clip(np.searchsorted(_points, _edges[1:], side="left") - 1, 0, len(_values) - 1)
    _bound = 0.0
    for i in np.nonzero(_hi > _lo)[0]:
        _span = _values[_lo[i]:_hi[i] + 1]
        _bound += _h * float(_span.max() - _span.min())
    _bound *= _scale
    if _bound >= QUARTER_ROTATION:
        raise IndeterminateResultError(f"quadrature error bound {_bound:.6g} rad is not below a quarter rotation "
                                       f"with {steps} steps")
    _parity = _nearest_pole(_theta)
    logger.debug(f"Continuous run: theta={_theta:.6g}, bound={_bound:.3g}, parity={_parity}")
    return ContinuousResult(_parity, _bound, _theta, steps, _truth.parity)


def run_rod(instance: DiscreteInstance, jitter_amplitude: float, seed) -> RodResult:
    """Rotate a classical rod section by section, adding uniform jitter in [-jitter, +jitter] per section."""
    if not math.isfinite(jitter_amplitude) or jitter_amplitude < 0:
        raise InvalidArgumentError(f"jitter amplitude must be a non-negative real, got {jitter_amplitude!r}")
    _rng = np.random.default_rng(seed)
    _noise = _rng.uniform(-jitter_amplitude, jitter_amplitude, size=instance.n_parties) if jitter_amplitude > 0 \
        else np.zeros(instance.n_parties)
    _state = RealAngleState(0.0)
    for _k, _jitter in zip(instance.values, _noise):
        _state = apply_section(_state, _k, instance.ring)
        _state = RealAngleState(_state.theta + float(_jitter))
    _parity, _ = measure_z(_state)
    return RodResult(_parity, _state.theta, float(np.sum(_noise)), instance.parity)
