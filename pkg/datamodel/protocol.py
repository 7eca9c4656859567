"""protocol

Deterministic one-way chain protocols over an alphabet of L distinguishable states.  Party n (n < N) maps the incoming
message l_{n-1} and its value k_n to an outgoing message l_n = t_n(l_{n-1}, k_n) in 1..L, with l_0 = 1; party N maps
(l_{N-1}, k_N) to a parity.

Reach sets A_{n,l} (the partial sums k_1 + ... + k_n mod 2K consistent with message l after party n) decide everything:
the last party can answer without error exactly when every reachable final reach set is K-free.
"""

import itertools, json, logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
from datamodel.errors import InvalidArgumentError, ValidationError, UndecidableError
from datamodel.task import DiscreteInstance, Parity, _read_json
from datamodel.zring import RingSize, SumSet, is_k_free_mask, rotate_mask

logger = logging.getLogger(__name__)

# message carried into party 1
INITIAL_MESSAGE = 1

Table = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class ProtocolTable:
    """Transition tables t_1..t_{N-1} indexed [l-1][k] and the decision table indexed [l-1][k].

    Party 1 only ever reads row l_0 = 1; its other rows are carried for a uniform shape and ignored.
    A decision of None marks a transitions-only table (see decidable / decide_from_reach).
    """
    n_parties: int
    ring: RingSize
    alphabet_size: int
    transitions: Tuple[Table, ...]
    decision: Optional[Table] = None

    def __post_init__(self):
        if not isinstance(self.n_parties, int) or self.n_parties < 1:
            raise ValidationError(f"N must be a positive integer, got {self.n_parties!r}")
        if not isinstance(self.alphabet_size, int) or self.alphabet_size < 1:
            raise ValidationError(f"L must be a positive integer, got {self.alphabet_size!r}")
        if len(self.transitions) != self.n_parties - 1:
            raise ValidationError(f"expected {self.n_parties - 1} transition tables, got {len(self.transitions)}")
        for n, _table in enumerate(self.transitions, start=1):
            self._check_shape(_table, f"transition table of party {n}")
            for _row in _table:
                for _l in _row:
                    if not isinstance(_l, (int, np.integer)) or _l < 1 or _l > self.alphabet_size:
                        raise ValidationError(f"party {n} emits message {_l!r} outside 1..{self.alphabet_size}")
        if self.decision is not None:
            self._check_shape(self.decision, "decision table")
            for _row in self.decision:
                for _answer in _row:
                    if _answer not in (Parity.even, Parity.odd):
                        raise ValidationError(f"decision entries must be 'even' or 'odd', got {_answer!r}")

    def _check_shape(self, table, name):
        if len(table) != self.alphabet_size or any(len(_row) != self.ring.two_k for _row in table):
            raise ValidationError(f"{name} must have {self.alphabet_size} rows of {self.ring.two_k} entries")

    def with_decision(self, decision: Table) -> "ProtocolTable":
        return ProtocolTable(self.n_parties, self.ring, self.alphabet_size, self.transitions, decision)

    def to_dict(self):
        return {
            "N": self.n_parties,
            "K": self.ring.k,
            "L": self.alphabet_size,
            "transitions": [[list(_row) for _row in _table] for _table in self.transitions],
            "decision": [list(_row) for _row in self.decision] if self.decision is not None else None
        }


@dataclass(frozen=True)
class ReachSet:
    stage: int
    message: int
    set: SumSet

    def to_dict(self):
        return {"stage": self.stage, "message": self.message, "set": list(self.set.members)}


@dataclass(frozen=True)
class Counterexample:
    values: Tuple[int, ...]
    expected: str
    produced: str

    def to_dict(self):
        return {"k": list(self.values), "expected": self.expected, "produced": self.produced}


@dataclass(frozen=True)
class VerifyResult:
    verdict: str
    counterexample: Optional[Counterexample]
    inputs_checked: int

    perfect = "perfect"
    flawed = "flawed"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "counterexample": self.counterexample.to_dict() if self.counterexample else None,
            "inputs_checked": self.inputs_checked
        }


def execute(p: ProtocolTable, inst: DiscreteInstance) -> str:
    """Run the chain: l_0 = 1, l_n = t_n(l_{n-1}, k_n), answer decision(l_{N-1}, k_N)."""
    if p.n_parties != inst.n_parties or p.ring != inst.ring:
        raise InvalidArgumentError(f"protocol is for N={p.n_parties}, K={p.ring.k}; "
                                   f"instance has N={inst.n_parties}, K={inst.ring.k}")
    if p.decision is None:
        raise InvalidArgumentError("protocol has no decision table")
    _message = INITIAL_MESSAGE
    for _table, _k in zip(p.transitions, inst.values):
        _message = _table[_message - 1][_k]
    return p.decision[_message - 1][inst.values[-1]]


def _stage_masks(p: ProtocolTable) -> List[List[int]]:
    """Reach-set masks per stage; stage 0 holds only the initial message with partial sum 0."""
    _two_k = p.ring.two_k
    _stages = [[0] * p.alphabet_size]
    _stages[0][INITIAL_MESSAGE - 1] = 1
    for n, _table in enumerate(p.transitions, start=1):
        _next = [0] * p.alphabet_size
        for _l, _mask in enumerate(_stages[-1]):
            if not _mask:
                continue
            for _k in range(_two_k):
                _target = _table[_l][_k] - 1
                _next[_target] |= rotate_mask(_mask, _k, _two_k)
        _stages.append(_next)
    return _stages


def reach_sets(p: ProtocolTable) -> Dict[int, List[ReachSet]]:
    """Return {stage: [ReachSet for messages 1..L]} for stages 1..N-1; unreachable messages have empty sets."""
    _stages = _stage_masks(p)
    return {
        n: [ReachSet(n, _l + 1, SumSet(_mask, p.ring)) for _l, _mask in enumerate(_stages[n])]
        for n in range(1, p.n_parties)
    }


def final_reach_masks(p: ProtocolTable) -> List[int]:
    """Reach sets seen by the last party; for N = 1 that is the initial message with partial sum 0."""
    return _stage_masks(p)[-1]


def uncertainty_profile(p: ProtocolTable) -> List[int]:
    """Largest reach-set cardinality per stage 0..N-1."""
    return [max(bin(_mask).count("1") for _mask in _stage) for _stage in _stage_masks(p)]


def decidable(p: ProtocolTable) -> bool:
    return all(is_k_free_mask(_mask, p.ring) for _mask in final_reach_masks(p))


def decide_from_reach(p: ProtocolTable, strict: bool = True) -> Table:
    """Build the canonical decision table from the final reach sets.

    For view (l, k_N) the candidate totals are A_l (+) {k_N}; intersecting them with {0, K} gives the answer.  Impossible
    views answer 'even'.  An ambiguous view (both 0 and K) raises UndecidableError, or answers 'even' when strict is False.
    """
    _ring = p.ring
    _rows = []
    for _l, _mask in enumerate(final_reach_masks(p), start=1):
        _row = []
        for _k in range(_ring.two_k):
            _shifted = rotate_mask(_mask, _k, _ring.two_k)
            _zero, _half = bool(_shifted & 1), bool(_shifted >> _ring.k & 1)
            if _zero and _half:
                if strict:
                    raise UndecidableError(f"message {_l} with k_N={_k} is consistent with both parities")
                _row.append(Parity.even)
            elif _half:
                _row.append(Parity.odd)
            else:
                _row.append(Parity.even)
        _rows.append(tuple(_row))
    return tuple(_rows)


def _first_mismatch(p: ProtocolTable, first_values: Sequence[int]):
    """Depth-first walk over promise inputs whose k_1 is in first_values, in lexicographic order."""
    _ring = p.ring
    _two_k, _n = _ring.two_k, p.n_parties
    _checked = 0
    _values = [0] * _n

    def _walk(depth, message, partial):
        nonlocal _checked
        if depth == _n - 1:
            for _last in sorted({(-partial) % _two_k, (_ring.k - partial) % _two_k}):
                _checked += 1
                _expected = Parity.of_sum(partial + _last, _ring)
                _produced = p.decision[message - 1][_last]
                if _produced != _expected:
                    _values[depth] = _last
                    return Counterexample(tuple(_values), _expected, _produced)
            return None
        _choices = first_values if depth == 0 else range(_two_k)
        for _k in _choices:
            _values[depth] = _k
            _found = _walk(depth + 1, p.transitions[depth][message - 1][_k], (partial + _k) % _two_k)
            if _found is not None:
                return _found
        return None

    return _walk(0, INITIAL_MESSAGE, 0), _checked


def verify(p: ProtocolTable, workers: int = 1) -> VerifyResult:
    """Execute the protocol on every promise input and report the lexicographically first error, if any.

    Required Arguments:
    p   -- a ProtocolTable with a decision table

    Keyword Arguments:
    workers -- number of processes; the input space is split on k_1 and the global minimum counterexample is kept
    """
    if p.decision is None:
        raise InvalidArgumentError("cannot verify a protocol without a decision table")
    if p.n_parties == 1 or workers <= 1:
        _cex, _checked = _first_mismatch(p, range(p.ring.two_k))
    else:
        _chunks = [list(c) for c in np.array_split(np.arange(p.ring.two_k), min(workers, p.ring.two_k)) if len(c)]
        _chunks = [[int(v) for v in c] for c in _chunks]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            _results = list(executor.map(_first_mismatch, itertools.repeat(p), _chunks))
        _found = [c for c, _ in _results if c is not None]
        _cex = min(_found, key=lambda c: c.values) if _found else None
        # a worker stops at its first error, so the count is exact only for perfect protocols
        _checked = sum(n for _, n in _results)
    if _cex is None:
        return VerifyResult(VerifyResult.perfect, None, _checked)
    logger.debug(f"Protocol flawed on k={_cex.values}: expected {_cex.expected}, produced {_cex.produced}")
    return VerifyResult(VerifyResult.flawed, _cex, _checked)


def _build(n_parties, ring, alphabet_size, rule) -> ProtocolTable:
    _transitions = tuple(
        tuple(tuple(rule(n, _l, _k) for _k in range(ring.two_k)) for _l in range(1, alphabet_size + 1))
        for n in range(1, n_parties)
    )
    _p = ProtocolTable(n_parties, ring, alphabet_size, _transitions)
    return _p.with_decision(decide_from_reach(_p, strict=False))


def partial_sum_protocol(n_parties: int, ring: RingSize) -> ProtocolTable:
    """Forward the running sum itself: message l encodes the partial sum l - 1, so L = 2K."""
    return _build(n_parties, ring, ring.two_k, lambda n, l, k: (l - 1 + k) % ring.two_k + 1)


def rounding_protocol(n_parties: int, ring: RingSize, alphabet_size: int) -> ProtocolTable:
    """Discretized rod: forward bucket floor(s*L/2K) of the estimate s = (lower edge of the received bucket) + k_n."""
    _two_k, _size = ring.two_k, alphabet_size

    def _rule(n, l, k):
        _estimate = -((-(l - 1) * _two_k) // _size)
        return ((_estimate + k) % _two_k) * _size // _two_k + 1

    return _build(n_parties, ring, alphabet_size, _rule)


def random_protocol(n_parties: int, ring: RingSize, alphabet_size: int, seed) -> ProtocolTable:
    """Uniformly random transition tables from a seeded generator; decision synthesized with strict=False."""
    _rng = np.random.default_rng(seed)
    _draws = _rng.integers(1, alphabet_size + 1, size=(max(n_parties - 1, 0), alphabet_size, ring.two_k))
    return _build(n_parties, ring, alphabet_size, lambda n, l, k: int(_draws[n - 1, l - 1, k]))


def protocol_from_dict(data) -> ProtocolTable:
    try:
        _n, _k, _l = data["N"], data["K"], data["L"]
        _transitions = data["transitions"]
    except (KeyError, TypeError):
        raise ValidationError('protocol must be an object with "N", "K", "L" and "transitions" keys')
    for _name, _value in (("N", _n), ("K", _k), ("L", _l)):
        if not isinstance(_value, int) or isinstance(_value, bool) or _value < 1:
            raise ValidationError(f'"{_name}" must be a positive integer, got {_value!r}')
    try:
        _tables = tuple(tuple(tuple(_row) for _row in _table) for _table in _transitions)
        _decision = data.get("decision")
        if _decision is not None:
            _decision = tuple(tuple(_row) for _row in _decision)
    except TypeError:
        raise ValidationError('"transitions" must be [party][l][k] and "decision" [l][k] nested lists')
    _p = ProtocolTable(_n, RingSize.from_k(_k), _l, _tables, _decision)
    if _decision is None:
        _p = _p.with_decision(decide_from_reach(_p))
    return _p


def load_protocol(path) -> ProtocolTable:
    """Load a protocol file; a null decision table is synthesized canonically (and must then be decidable)."""
    return protocol_from_dict(_read_json(path))


def dump_protocol(p: ProtocolTable, path):
    with open(path, "w+") as f:
        f.write(json.dumps(p.to_dict()))
