"""teleport

Each quantum hop of the chain replaced by teleportation: the sender shares a Bell pair with the receiver, measures its
qubit and its half of the pair in the Bell basis, sends the two outcome bits forward, and the receiver applies the Pauli
correction Z^m0 X^m1.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple
import numpy as np
from datamodel.errors import InvalidArgumentError
from datamodel.qsim import QubitState, apply_section, measure_z, fidelity, outcome_distance
from datamodel.task import DiscreteInstance

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class TwoQubitState:
    """Amplitudes over |00>, |01>, |10>, |11> (first qubit stays with the sender)."""
    amplitudes: Tuple[complex, complex, complex, complex]

    def __post_init__(self):
        if len(self.amplitudes) != 4:
            raise InvalidArgumentError(f"a two-qubit state has 4 amplitudes, got {len(self.amplitudes)}")
        _norm = float(np.sum(np.abs(np.array(self.amplitudes)) ** 2))
        if abs(_norm - 1.0) > NORM_TOLERANCE:
            raise InvalidArgumentError(f"two-qubit state must be normalized, norm is {_norm!r}")

    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)


def bell_pair() -> TwoQubitState:
    _s = 1 / np.sqrt(2)
    return TwoQubitState((_s + 0j, 0j, 0j, _s + 0j))


@dataclass(frozen=True)
class TeleportHop:
    hop: int
    bits: Tuple[int, int]

    def to_dict(self):
        return {"hop": self.hop, "bits": list(self.bits)}


@dataclass(frozen=True)
class TeleportTranscript:
    hops: Tuple[TeleportHop, ...]
    seed: Optional[int]

    @property
    def bit_count(self) -> int:
        return sum(len(h.bits) for h in self.hops)

    def to_dict(self):
        return {"seed": self.seed, "bit_count": self.bit_count, "hops": [h.to_dict() for h in self.hops]}


@dataclass(frozen=True)
class TeleportChainResult:
    parity: str
    error_probability: float
    transcript: TeleportTranscript

    def to_dict(self):
        return {"parity": self.parity, "error_probability": self.error_probability,
                "transcript": self.transcript.to_dict()}


def _bell_measure_frame(state: QubitState, pair: TwoQubitState) -> np.ndarray:
    # (input, sender half, receiver half) after CNOT(input -> sender half) and H(input), indexed [m0, m1, receiver]
    _psi = np.kron(state.vector(), pair.vector()).reshape(2, 2, 2)
    _psi[1] = _psi[1][::-1].copy()
    return np.einsum("ij,jkl->ikl", HADAMARD, _psi)


def teleport_hop(state: QubitState, seed=None, rng: Optional[np.random.Generator] = None, outcome: Optional[int] = None):
    """Teleport one qubit; return the receiver's corrected state and the two classical bits (m0, m1).

    Required Arguments:
    state   -- the normalized QubitState to send

    Keyword Arguments:
    seed    -- seed for a fresh generator when rng is not given
    rng     -- a numpy Generator that draws the Bell outcome
    outcome -- force Bell branch 0..3 (= 2*m0 + m1) instead of drawing it
    """
    _frame = _bell_measure_frame(state, bell_pair())
    _probabilities = np.sum(np.abs(_frame) ** 2, axis=2).reshape(4)
    if outcome is None:
        _rng = rng if rng is not None else np.random.default_rng(seed)
        outcome = int(_rng.choice(4, p=_probabilities / _probabilities.sum()))
    elif outcome not in (0, 1, 2, 3):
        raise InvalidArgumentError(f"Bell outcome must be 0..3, got {outcome!r}")
    _m0, _m1 = divmod(outcome, 2)
    _received = _frame[_m0, _m1] / np.sqrt(_probabilities[outcome])
    if _m1:
        _received = PAULI_X @ _received
    if _m0:
        _received = PAULI_Z @ _received
    return QubitState.from_vector(_received), (_m0, _m1)


def verify_branches(state: QubitState):
    """Run all four Bell branches; return (largest outcome distance, smallest fidelity) to the input."""
    _distances, _fidelities = [], []
    for _outcome in range(4):
        _received, _ = teleport_hop(state, outcome=_outcome)
        _distances.append(outcome_distance(state, _received))
        _fidelities.append(fidelity(state, _received))
    return max(_distances), min(_fidelities)


def run_teleport_chain(instance: DiscreteInstance, seed) -> TeleportChainResult:
    """Party n rotates the qubit by its section and teleports it to party n+1; party N rotates and measures."""
    _rng = np.random.default_rng(seed)
    _state = QubitState.up()
    _hops: List[TeleportHop] = []
    for n, _k in enumerate(instance.values[:-1], start=1):
        _state = apply_section(_state, _k, instance.ring)
        _state, _bits = teleport_hop(_state, rng=_rng)
        _hops.append(TeleportHop(n, _bits))
    _state = apply_section(_state, instance.values[-1], instance.ring)
    _parity, _error = measure_z(_state)
    return TeleportChainResult(_parity, float(_error), TeleportTranscript(tuple(_hops), seed))
