"""zring

Arithmetic on subsets of the cyclic ring Z_2K.  A SumSet is a bit mask of two_k bits (bit x set means x is a member),
so a shift A (+) {c} is a rotation of the mask and a sumset is an OR of rotations.
"""

import math, logging
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple
from datamodel.errors import InvalidArgumentError, InconsistencyError

logger = logging.getLogger(__name__)

# Largest modulus the search engine accepts; SumSet arithmetic itself works on arbitrary widths.
MAX_SEARCH_TWO_K = 64


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def rotate_mask(mask: int, shift: int, two_k: int) -> int:
    """Rotate a two_k-bit mask forward by shift positions, i.e. add shift (mod two_k) to every member."""
    shift %= two_k
    if shift == 0 or mask == 0:
        return mask
    full = (1 << two_k) - 1
    return ((mask << shift) | (mask >> (two_k - shift))) & full


@dataclass(frozen=True)
class RingSize:
    two_k: int
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidArgumentError(f"K must be a positive integer, got {self.k!r}")
        if self.two_k != 2 * self.k:
            raise InvalidArgumentError(f"two_k ({self.two_k}) must equal 2*K ({2 * self.k})")

    @classmethod
    def from_k(cls, k: int) -> "RingSize":
        return cls(two_k=2 * k, k=k)

    @classmethod
    def from_two_k(cls, two_k: int) -> "RingSize":
        if two_k < 2 or two_k % 2:
            raise InvalidArgumentError(f"two_k must be an even integer >= 2, got {two_k!r}")
        return cls(two_k=two_k, k=two_k // 2)

    @property
    def k_is_power_of_two(self) -> bool:
        return self.k & (self.k - 1) == 0

    @property
    def full_mask(self) -> int:
        return (1 << self.two_k) - 1

    def check_element(self, x: int, name: str = "element"):
        if not isinstance(x, int) or isinstance(x, bool) or x < 0 or x >= self.two_k:
            raise InvalidArgumentError(f"{name} must be an integer in [0, {self.two_k}), got {x!r}")


@dataclass(frozen=True)
class SumSet:
    mask: int
    ring: RingSize

    def __post_init__(self):
        if self.mask < 0 or self.mask > self.ring.full_mask:
            raise InvalidArgumentError(f"mask {self.mask:#x} has members outside Z_{self.ring.two_k}")

    @classmethod
    def from_members(cls, members: Iterable[int], ring: RingSize) -> "SumSet":
        _mask = 0
        for x in members:
            ring.check_element(x, "member")
            _mask |= 1 << x
        return cls(mask=_mask, ring=ring)

    @classmethod
    def empty(cls, ring: RingSize) -> "SumSet":
        return cls(mask=0, ring=ring)

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(x for x in range(self.ring.two_k) if self.mask >> x & 1)

    def __len__(self):
        return popcount(self.mask)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x):
        return isinstance(x, int) and 0 <= x < self.ring.two_k and bool(self.mask >> x & 1)

    def is_empty(self) -> bool:
        return self.mask == 0

    def __repr__(self):
        return f"SumSet({set(self.members) or '{}'}, two_k={self.ring.two_k})"


@dataclass(frozen=True)
class PeriodReport:
    deltas: Tuple[int, ...]
    period_v: int
    divides_two_k: bool
    closed_form_v: int

    def to_dict(self):
        return {
            "deltas": list(self.deltas),
            "period_v": self.period_v,
            "divides_two_k": self.divides_two_k,
            "closed_form_v": self.closed_form_v
        }


def _same_ring(A: SumSet, B: SumSet):
    if A.ring != B.ring:
        raise InvalidArgumentError(f"SumSets live in different rings: Z_{A.ring.two_k} and Z_{B.ring.two_k}")


def rotate(A: SumSet, c: int) -> SumSet:
    """Return A (+) {c}."""
    return SumSet(rotate_mask(A.mask, c, A.ring.two_k), A.ring)


def oplus(A: SumSet, B: SumSet) -> SumSet:
    """Return the sumset {(x + y) mod 2K : x in A, y in B}; empty if either operand is empty."""
    _same_ring(A, B)
    _mask = 0
    for y in B.members:
        _mask |= rotate_mask(A.mask, y, A.ring.two_k)
    return SumSet(_mask, A.ring)


def is_k_free_mask(mask: int, ring: RingSize) -> bool:
    # x and x+K both present <=> mask overlaps its own rotation by K
    return mask & rotate_mask(mask, ring.k, ring.two_k) == 0


def is_k_free(A: SumSet) -> bool:
    return is_k_free_mask(A.mask, A.ring)


def growth(A: SumSet, a: int, b: int) -> int:
    """Return |A (+) {a,b}| - |A| for distinct ring elements a and b."""
    A.ring.check_element(a, "a")
    A.ring.check_element(b, "b")
    if a == b:
        raise InvalidArgumentError(f"growth needs distinct values, got a = b = {a}")
    if A.is_empty():
        raise InvalidArgumentError("growth is undefined for the empty set")
    _two_k = A.ring.two_k
    _union = rotate_mask(A.mask, a, _two_k) | rotate_mask(A.mask, b, _two_k)
    return popcount(_union) - popcount(A.mask)


def _next_delta(delta: int, two_k: int):
    # smallest positive residue i*delta mod 2K below delta, over all multipliers i
    _below = [(i * delta) % two_k for i in range(2, two_k + 1)]
    _below = [r for r in _below if 0 < r < delta]
    return min(_below) if _below else None


def period_sequence(A: SumSet, a: int, b: int) -> PeriodReport:
    """Generate the strictly decreasing Delta sequence for a degenerate collision (growth 0) and return its last member.

    Required Arguments:
    A   -- a nonempty SumSet with A (+) {a} == A (+) {b}
    a   -- first colliding value
    b   -- second colliding value, distinct from a
    """
    if growth(A, a, b) != 0:
        raise InvalidArgumentError(f"period_sequence requires growth 0, {A!r} grows under {{{a},{b}}}")
    _two_k = A.ring.two_k
    _delta = abs(b - a)
    _deltas = [_delta]
    while True:
        _nxt = _next_delta(_delta, _two_k)
        if _nxt is None:
            break
        _deltas.append(_nxt)
        _delta = _nxt
    _v = _deltas[-1]
    if rotate_mask(A.mask, _v, _two_k) != A.mask:
        raise InconsistencyError(f"terminal delta {_v} is not a period of {A!r}")
    _closed_form = math.gcd(_deltas[0], _two_k)
    if _closed_form != _v:
        raise InconsistencyError(f"delta sequence ended at {_v} but gcd({_deltas[0]}, {_two_k}) = {_closed_form}")
    return PeriodReport(deltas=tuple(_deltas), period_v=_v, divides_two_k=(_two_k % _v == 0), closed_form_v=_closed_form)


@dataclass
class LemmaSweepReport:
    two_k: int
    k: int
    k_is_power_of_two: bool
    pairs_mode: str
    sets_checked: int = 0
    k_free_sets: int = 0
    pairs_checked: int = 0
    identity_checks: int = 0
    identity_violations: int = 0
    zero_growth_k_free: int = 0
    period_checks: int = 0
    period_failures: int = 0
    witnesses: List[dict] = field(default_factory=list)

    @property
    def growth_violations(self) -> int:
        """Violations of the growth lemma; only meaningful when K is a power of two."""
        return self.zero_growth_k_free if self.k_is_power_of_two else 0

    @property
    def passed(self) -> bool:
        return self.identity_violations == 0 and self.period_failures == 0 and self.growth_violations == 0

    def to_dict(self):
        return {
            "two_k": self.two_k,
            "k": self.k,
            "k_is_power_of_two": self.k_is_power_of_two,
            "pairs_mode": self.pairs_mode,
            "sets_checked": self.sets_checked,
            "k_free_sets": self.k_free_sets,
            "pairs_checked": self.pairs_checked,
            "identity_checks": self.identity_checks,
            "identity_violations": self.identity_violations,
            "zero_growth_k_free": self.zero_growth_k_free,
            "growth_violations": self.growth_violations,
            "period_checks": self.period_checks,
            "period_failures": self.period_failures,
            "witnesses": self.witnesses,
            "passed": self.passed
        }


def _check_period(mask: int, a: int, b: int, ring: RingSize, report: LemmaSweepReport):
    report.period_checks += 1
    try:
        period_sequence(SumSet(mask, ring), a, b)
    except InconsistencyError as ex:
        logger.warning(f"Period check failed: {ex}")
        report.period_failures += 1


def lemma_sweep(ring: RingSize, pairs: str = "exhaustive", max_witnesses: int = 1000) -> LemmaSweepReport:
    """Exhaustively check the sumset identity, the growth lemma and its period structure over every nonempty subset of Z_2K.

    Required Arguments:
    ring    -- the RingSize to sweep

    Keyword Arguments:
    pairs   -- 'exhaustive' visits every ordered pair a != b; 'difference' visits b - a only (growth is shift invariant)
               and counts 2K ordered pairs per difference
    max_witnesses   -- cap on the number of growth-0 K-free witnesses kept in the report
    """
    if pairs not in ("exhaustive", "difference"):
        raise InvalidArgumentError(f"pairs must be 'exhaustive' or 'difference', got {pairs!r}")
    _two_k = ring.two_k
    _check_identity = _two_k <= 8
    report = LemmaSweepReport(two_k=_two_k, k=ring.k, k_is_power_of_two=ring.k_is_power_of_two, pairs_mode=pairs)
    for _mask in range(1, 1 << _two_k):
        report.sets_checked += 1
        _k_free = is_k_free_mask(_mask, ring)
        if _k_free:
            report.k_free_sets += 1
        _size = popcount(_mask)
        if pairs == "exhaustive":
            _pairs = ((a, b) for a in range(_two_k) for b in range(_two_k) if a != b)
        else:
            _pairs = ((0, d) for d in range(1, _two_k))
        _members = None
        for a, b in _pairs:
            _union = rotate_mask(_mask, a, _two_k) | rotate_mask(_mask, b, _two_k)
            report.pairs_checked += 1 if pairs == "exhaustive" else _two_k
            if _check_identity and pairs == "exhaustive":
                if _members is None:
                    _members = [x for x in range(_two_k) if _mask >> x & 1]
                _direct = 0
                for x in _members:
                    _direct |= 1 << ((x + a) % _two_k)
                    _direct |= 1 << ((x + b) % _two_k)
                report.identity_checks += 1
                if _direct != _union:
                    report.identity_violations += 1
            if popcount(_union) != _size:
                continue
            _check_period(_mask, a, b, ring, report)
            if _k_free:
                report.zero_growth_k_free += 1
                if len(report.witnesses) < max_witnesses:
                    report.witnesses.append({"set": list(SumSet(_mask, ring).members), "a": a, "b": b})
    logger.info(f"Lemma sweep over Z_{_two_k}: {report.sets_checked} sets, {report.pairs_checked} pairs, "
                f"{report.zero_growth_k_free} zero-growth K-free cases")
    return report
