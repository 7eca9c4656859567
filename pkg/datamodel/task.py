"""task

The communication task: a piecewise-constant field on [0, 1] whose integral is m*alpha, its sectioning into N
party-local integrals, and the discrete promise instances (k_1..k_N over Z_2K with sum = 0 mod K) built from them.
"""

import json, logging, os
from dataclasses import dataclass
from typing import List, Sequence, Tuple
import numpy as np
from datamodel.errors import InvalidArgumentError, ValidationError, QuantizationError, PromiseError
from datamodel.zring import RingSize

logger = logging.getLogger(__name__)

LENGTH_TOLERANCE = 1e-12
GRID_TOLERANCE = 1e-6


class Parity():

    even = "even"
    odd = "odd"

    def of_sum(total: int, ring: RingSize) -> str:
        """Parity of m for a value sum that satisfies the promise."""
        return Parity.even if total % ring.two_k == 0 else Parity.odd

    def check(parity: str) -> str:
        if parity not in (Parity.even, Parity.odd):
            raise InvalidArgumentError(f"parity must be '{Parity.even}' or '{Parity.odd}', got {parity!r}")
        return parity


@dataclass(frozen=True)
class FieldSpec:
    samples: Tuple[Tuple[float, float], ...]
    alpha: float

    def __post_init__(self):
        if not self.samples:
            raise ValidationError("a field needs at least one (length, value) segment")
        if not np.isfinite(self.alpha) or self.alpha <= 0:
            raise ValidationError(f"alpha must be a positive real, got {self.alpha!r}")
        for _length, _value in self.samples:
            if not np.isfinite(_length) or _length <= 0:
                raise ValidationError(f"segment lengths must be positive, got {_length!r}")
            if not np.isfinite(_value):
                raise ValidationError(f"field values must be finite, got {_value!r}")
        _total = sum(_length for _length, _ in self.samples)
        if abs(_total - 1.0) > LENGTH_TOLERANCE:
            raise ValidationError(f"segment lengths must sum to 1, got {_total!r}")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]], alpha: float) -> "FieldSpec":
        return cls(samples=tuple((float(l), float(v)) for l, v in pairs), alpha=float(alpha))

    def breakpoints(self) -> List[float]:
        """Segment boundaries from A (x=0) to B (x=1); the last one is pinned to exactly 1."""
        _points = [0.0]
        for _length, _ in self.samples:
            _points.append(_points[-1] + _length)
        _points[-1] = 1.0
        return _points

    def value_at(self, x: float) -> float:
        _points = self.breakpoints()
        for i, (_, _value) in enumerate(self.samples):
            if x < _points[i + 1]:
                return _value
        return self.samples[-1][1]

    def integral(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Exact integral of the piecewise-constant field over [lo, hi]."""
        _points = self.breakpoints()
        _total = 0.0
        for i, (_, _value) in enumerate(self.samples):
            _overlap = min(hi, _points[i + 1]) - max(lo, _points[i])
            if _overlap > 0:
                _total += _overlap * _value
        return _total

    def to_dict(self):
        return {"alpha": self.alpha, "samples": [list(s) for s in self.samples]}


@dataclass(frozen=True)
class DiscreteInstance:
    n_parties: int
    ring: RingSize
    values: Tuple[int, ...]

    def __post_init__(self):
        if self.n_parties < 1 or len(self.values) != self.n_parties:
            raise ValidationError(f"instance must hold n_parties={self.n_parties} >= 1 values, got {len(self.values)}")
        for _k in self.values:
            if not isinstance(_k, (int, np.integer)) or isinstance(_k, bool) or _k < 0 or _k >= self.ring.two_k:
                raise ValidationError(f"values must be integers in [0, {self.ring.two_k}), got {_k!r}")
        if sum(self.values) % self.ring.k != 0:
            raise PromiseError(f"sum of values {sum(self.values)} is not a multiple of K={self.ring.k}")

    @classmethod
    def of(cls, values: Sequence[int], k: int) -> "DiscreteInstance":
        return cls(n_parties=len(values), ring=RingSize.from_k(k), values=tuple(int(v) for v in values))

    def total(self) -> int:
        return sum(self.values)

    @property
    def parity(self) -> str:
        return Parity.of_sum(self.total(), self.ring)

    def g(self, j: int) -> int:
        """The space-complexity reading of the instance: g(j) = k_j for j = 1..N."""
        if j < 1 or j > self.n_parties:
            raise InvalidArgumentError(f"g is defined on 1..{self.n_parties}, got {j}")
        return self.values[j - 1]

    def to_dict(self):
        return {"K": self.ring.k, "k": list(self.values)}


def discretize(field: FieldSpec, n_sections: int) -> List[float]:
    """Integrate the field over n_sections equal sections of [0, 1], starting from A.

    Required Arguments:
    field       -- a well-formed FieldSpec
    n_sections  -- number of parties N, at least 1
    """
    if not isinstance(n_sections, int) or n_sections < 1:
        raise ValidationError(f"n_sections must be a positive integer, got {n_sections!r}")
    return [field.integral(n / n_sections, (n + 1) / n_sections) for n in range(n_sections)]


def quantize(phis: Sequence[float], ring: RingSize, alpha: float) -> DiscreteInstance:
    """Snap section integrals to the alpha/K grid and build the promise instance.

    Required Arguments:
    phis    -- section integrals phi_1..phi_N
    ring    -- the RingSize carrying K
    alpha   -- the field constant
    """
    if alpha <= 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha!r}")
    _values = []
    for n, _phi in enumerate(phis, start=1):
        _scaled = _phi * ring.k / alpha
        _nearest = round(_scaled)
        if abs(_scaled - _nearest) > GRID_TOLERANCE:
            raise QuantizationError(f"section {n} integral {_phi!r} is not on the alpha/K grid (K={ring.k})")
        _values.append(int(_nearest) % ring.two_k)
    if not _values:
        raise QuantizationError("no section integrals to quantize")
    return DiscreteInstance(n_parties=len(_values), ring=ring, values=tuple(_values))


def random_instance(n_parties: int, ring: RingSize, parity: str, seed) -> DiscreteInstance:
    """Draw k_1..k_{N-1} uniformly from a seeded generator and complete k_N to the requested parity."""
    if n_parties < 1:
        raise InvalidArgumentError(f"n_parties must be >= 1, got {n_parties}")
    Parity.check(parity)
    _rng = np.random.default_rng(seed)
    _head = [int(v) for v in _rng.integers(0, ring.two_k, size=n_parties - 1)]
    _target = 0 if parity == Parity.even else ring.k
    _last = (_target - sum(_head)) % ring.two_k
    return DiscreteInstance(n_parties=n_parties, ring=ring, values=tuple(_head + [_last]))


def flip_party(instance: DiscreteInstance, n: int) -> DiscreteInstance:
    """Shift party n's value by K: the promise still holds and the parity flips, so no party can go unread."""
    if n < 1 or n > instance.n_parties:
        raise InvalidArgumentError(f"party index must be in 1..{instance.n_parties}, got {n}")
    _values = list(instance.values)
    _values[n - 1] = (_values[n - 1] + instance.ring.k) % instance.ring.two_k
    return DiscreteInstance(n_parties=instance.n_parties, ring=instance.ring, values=tuple(_values))


def _read_json(path):
    if not os.path.isfile(path):
        raise FileNotFoundError(f"{path} not found.")
    with open(path, "r") as f:
        try:
            return json.loads(f.read())
        except json.JSONDecodeError as ex:
            raise ValidationError(f"{path} is not in JSON format: {ex}")


def instance_from_dict(data) -> DiscreteInstance:
    try:
        _k = data["K"]
        _values = data["k"]
    except (KeyError, TypeError):
        raise ValidationError('instance must be an object with "K" and "k" keys')
    if not isinstance(_k, int) or isinstance(_k, bool) or _k < 1:
        raise ValidationError(f'"K" must be a positive integer, got {_k!r}')
    if not isinstance(_values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in _values):
        raise ValidationError('"k" must be a list of integers')
    return DiscreteInstance.of(_values, _k)


def load_instance(path) -> DiscreteInstance:
    """Load an instance file {"K": int, "k": [int, ...]}; promise violations raise PromiseError."""
    _instance = instance_from_dict(_read_json(path))
    logger.debug(f"Loaded instance from {path}: N={_instance.n_parties}, K={_instance.ring.k}, parity={_instance.parity}")
    return _instance


def dump_instance(instance: DiscreteInstance, path):
    with open(path, "w+") as f:
        f.write(json.dumps(instance.to_dict()))


def field_from_dict(data) -> FieldSpec:
    try:
        return FieldSpec.from_pairs(data["samples"], data["alpha"])
    except (KeyError, TypeError, ValueError) as ex:
        if isinstance(ex, ValidationError):
            raise
        raise ValidationError(f'field must be an object with "alpha" and "samples" [[length, value], ...]: {ex}')


def load_field(path) -> FieldSpec:
    return field_from_dict(_read_json(path))
