"""search

Decide whether a perfect classical chain protocol exists for (N, K, L) and find the smallest feasible L.

Two engines are provided:
    exhaustive_exists   -- enumerates every transition table and tests decidability of the final reach sets
    profile_exists      -- depth-first search over reach-set profiles; each stage colors the shifted sets A_l (+) {k}
                           with L messages so that every color class stays K-free

Decision tables are never enumerated: decide_from_reach is optimal for any transition tables.
"""

import itertools, logging, math, time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
from datamodel.errors import (InvalidArgumentError, BudgetExceededError, UnsupportedSizeError, InconsistencyError,
                              UndecidableError)
from datamodel.protocol import ProtocolTable, decidable, decide_from_reach, INITIAL_MESSAGE
from datamodel.zring import MAX_SEARCH_TWO_K, RingSize, is_k_free_mask, popcount, rotate_mask

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 10 ** 9
DEFAULT_PROTOCOL_BUDGET = 10 ** 8
PROGRESS_INTERVAL = 100000


class Verdict():

    exists = "exists"
    impossible = "impossible"
    unknown = "unknown"


class Method():

    exhaustive = "exhaustive"
    profile = "profile_dp"


CSV_COLUMNS = ["n", "k", "l", "verdict", "nodes", "seconds", "memory_bits"]


@dataclass
class SearchReport:
    n_parties: int
    k: int
    alphabet_size: int
    verdict: str
    method: str
    nodes_explored: int = 0
    witness: Optional[ProtocolTable] = None
    seconds: float = 0.0
    predicted: Optional[str] = None

    @property
    def memory_bits(self) -> float:
        return math.log2(self.alphabet_size)

    @property
    def asserted(self) -> bool:
        """True when the verdict is one the necessity argument (or a direct construction) predicts."""
        return self.predicted is not None

    def to_dict(self):
        return {
            "N": self.n_parties,
            "K": self.k,
            "L": self.alphabet_size,
            "verdict": self.verdict,
            "method": self.method,
            "nodes_explored": self.nodes_explored,
            "memory_bits": self.memory_bits,
            "predicted": self.predicted,
            "asserted": self.asserted,
            "witness": self.witness.to_dict() if self.witness is not None else None
        }

    def csv_row(self):
        return [self.n_parties, self.k, self.alphabet_size, self.verdict, self.nodes_explored, self.seconds,
                self.memory_bits]


@dataclass
class MinLResult:
    n_parties: int
    k: int
    l_max: int
    reports: List[SearchReport] = field(default_factory=list)

    @property
    def minimal(self) -> Optional[int]:
        """Smallest L with verdict exists, provided every smaller L was proven impossible."""
        for _report in self.reports:
            if _report.verdict == Verdict.exists:
                return _report.alphabet_size
            if _report.verdict != Verdict.impossible:
                return None
        return None

    def to_dict(self):
        return {
            "N": self.n_parties,
            "K": self.k,
            "l_max": self.l_max,
            "minimal_l": self.minimal,
            "reports": [r.to_dict() for r in self.reports]
        }


def _check_parameters(n_parties, k, alphabet_size):
    for _name, _value in (("N", n_parties), ("K", k), ("L", alphabet_size)):
        if not isinstance(_value, int) or isinstance(_value, bool) or _value < 1:
            raise InvalidArgumentError(f"{_name} must be a positive integer, got {_value!r}")


def theorem_verdict(n_parties: int, k: int, alphabet_size: int) -> Optional[str]:
    """The verdict known without search, or None when (N, K, L) is exploratory.

    N = 1 or L >= 2K: the running sum is a witness.  K a power of two, L < 2K and N > K: every reach set grows by at
    least one element per party, so a final set would need more than K elements and cannot be K-free.
    """
    _check_parameters(n_parties, k, alphabet_size)
    if n_parties == 1 or alphabet_size >= 2 * k:
        return Verdict.exists
    if k & (k - 1) == 0 and n_parties > k:
        return Verdict.impossible
    return None


def _finish(report: SearchReport, started: float) -> SearchReport:
    report.seconds = time.perf_counter() - started
    if report.predicted is not None and report.verdict != Verdict.unknown and report.verdict != report.predicted:
        raise InconsistencyError(f"{report.method} search found {report.verdict} for N={report.n_parties}, "
                                 f"K={report.k}, L={report.alphabet_size}, but {report.predicted} is predicted")
    logger.info(f"{report.method}: N={report.n_parties} K={report.k} L={report.alphabet_size} -> {report.verdict} "
                f"({report.nodes_explored} nodes, {report.seconds:.3f}s)")
    return report


def _with_decision(n_parties, ring, alphabet_size, transitions) -> ProtocolTable:
    _p = ProtocolTable(n_parties, ring, alphabet_size, tuple(transitions))
    try:
        return _p.with_decision(decide_from_reach(_p))
    except UndecidableError as ex:
        raise InconsistencyError(f"search produced an undecidable witness: {ex}")


def running_sum_witness(n_parties: int, ring: RingSize, alphabet_size: int) -> ProtocolTable:
    """The running-sum protocol over an alphabet of L >= 2K messages; messages above 2K are never sent."""
    if alphabet_size < ring.two_k:
        raise InvalidArgumentError(f"the running sum needs L >= 2K = {ring.two_k}, got L={alphabet_size}")
    _table = tuple(
        tuple((_l + _k) % ring.two_k + 1 for _k in range(ring.two_k)) if _l < ring.two_k
        else tuple([INITIAL_MESSAGE] * ring.two_k)
        for _l in range(alphabet_size)
    )
    return _with_decision(n_parties, ring, alphabet_size, [_table] * (n_parties - 1))


def exhaustive_count(n_parties: int, k: int, alphabet_size: int) -> int:
    """Number of transition tables exhaustive_exists visits; party 1 only has its l_0 row free."""
    if n_parties == 1:
        return 1
    return alphabet_size ** (2 * k) * alphabet_size ** (alphabet_size * 2 * k * (n_parties - 2))


def exhaustive_exists(n_parties: int, k: int, alphabet_size: int, budget: int = DEFAULT_PROTOCOL_BUDGET) -> SearchReport:
    """Enumerate every transition table in lexicographic order and return the first decidable one.

    Required Arguments:
    n_parties       -- N
    k               -- K
    alphabet_size   -- L

    Keyword Arguments:
    budget  -- refuse with BudgetExceededError when more tables than this would be visited
    """
    _check_parameters(n_parties, k, alphabet_size)
    _started = time.perf_counter()
    _ring = RingSize.from_k(k)
    _count = exhaustive_count(n_parties, k, alphabet_size)
    if _count > budget:
        raise BudgetExceededError(f"exhaustive search over N={n_parties}, K={k}, L={alphabet_size} visits {_count} "
                                  f"tables, budget is {budget}")
    _report = SearchReport(n_parties, k, alphabet_size, Verdict.impossible, Method.exhaustive,
                           predicted=theorem_verdict(n_parties, k, alphabet_size))
    _two_k, _size = _ring.two_k, alphabet_size
    _first_width = _two_k if n_parties > 1 else 0
    _rest_width = _size * _two_k
    _idle_rows = tuple(tuple([INITIAL_MESSAGE] * _two_k) for _ in range(_size - 1))
    _free = _first_width + _rest_width * max(n_parties - 2, 0)
    for _entries in itertools.product(range(1, _size + 1), repeat=_free):
        _report.nodes_explored += 1
        _tables = []
        if n_parties > 1:
            _tables.append((tuple(_entries[:_two_k]),) + _idle_rows)
        for n in range(n_parties - 2):
            _offset = _first_width + n * _rest_width
            _tables.append(tuple(tuple(_entries[_offset + _l * _two_k:_offset + (_l + 1) * _two_k])
                                 for _l in range(_size)))
        _candidate = ProtocolTable(n_parties, _ring, _size, tuple(_tables))
        if decidable(_candidate):
            _report.verdict = Verdict.exists
            _report.witness = _candidate.with_decision(decide_from_reach(_candidate))
            break
    return _finish(_report, _started)


def _maximal_masks(masks) -> List[int]:
    """Distinct nonempty masks that are not contained in another one, largest first."""
    _kept: List[int] = []
    for _mask in sorted({m for m in masks if m}, key=lambda m: (-popcount(m), m)):
        if not any(_mask & _other == _mask for _other in _kept):
            _kept.append(_mask)
    return _kept


def _scale_mask(mask: int, perm: Sequence[int]) -> int:
    _out, x = 0, 0
    while mask:
        if mask & 1:
            _out |= 1 << perm[x]
        mask >>= 1
        x += 1
    return _out


class _BudgetExhausted(Exception):
    pass


class ProfileSearch():
    """Depth-first search over reach-set profiles.

    A profile at stage n is the list of L reach-set masks indexed by message.  Party n+1 chooses, for every pair
    (l, k) with A_l nonempty, the message that receives A_l (+) {k}; that is a coloring of the shifted sets.

    Pruning (each one only discards profiles that cannot lead to a decidable final stage):
        K-free      -- a set containing x and x+K stays that way under shifts and unions
        growth      -- K a power of two and L < 2K: a set of size s at stage n forces a final set of size >= s + (N-1-n)
        domination  -- a failed profile P whose every set lies inside some set of Q proves Q fails too
        symmetry    -- profiles are keyed up to x -> u*x + c for units u, which preserves every shift and K
    """

    def __init__(self, n_parties: int, ring: RingSize, alphabet_size: int, budget: int = DEFAULT_NODE_BUDGET,
                 domination=True, growth_pruning=True, symmetry=True):
        self.n_parties = n_parties
        self.ring = ring
        self.alphabet_size = alphabet_size
        self.budget = budget
        self.domination = domination
        self.growth_pruning = growth_pruning and ring.k_is_power_of_two and alphabet_size < ring.two_k
        self.final_stage = n_parties - 1
        self.nodes = 0
        self.failed: Dict[int, List[Tuple[int, ...]]] = {n: [] for n in range(n_parties)}
        _units = [u for u in range(1, ring.two_k) if math.gcd(u, ring.two_k) == 1] if symmetry else [1]
        self._perms = [tuple(u * x % ring.two_k for x in range(ring.two_k)) for u in _units]
        self._symmetry = symmetry

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted()
        if self.nodes % PROGRESS_INTERVAL == 0:
            logger.info(f"Profile search N={self.n_parties} K={self.ring.k} L={self.alphabet_size}: "
                        f"{self.nodes} nodes, {sum(len(f) for f in self.failed.values())} failed profiles")

    def size_bound(self, stage: int) -> int:
        if self.growth_pruning:
            return self.ring.k - (self.final_stage - stage)
        return self.ring.two_k

    def canonical(self, masks) -> Tuple[int, ...]:
        _base = _maximal_masks(masks)
        if not self._symmetry:
            return tuple(sorted(_base))
        _two_k = self.ring.two_k
        _best = None
        for _perm in self._perms:
            _scaled = [_scale_mask(m, _perm) for m in _base]
            for _c in range(_two_k):
                _key = tuple(sorted(rotate_mask(m, _c, _two_k) for m in _scaled))
                if _best is None or _key < _best:
                    _best = _key
        return _best

    def _dominated(self, stage, key) -> bool:
        return any(all(any(p & q == p for q in key) for p in _failed) for _failed in self.failed[stage])

    def _colorings(self, items: Sequence[int], bound: int):
        """Yield (unions, colors) for every admissible coloring; item i may only open color max(used)+1."""
        _n, _size, _ring = len(items), self.alphabet_size, self.ring
        _unions = [0] * _size
        _colors = [-1] * _n
        _saved = [0] * _n
        _used = [0] * (_n + 1)
        i = 0
        while i >= 0:
            if i == _n:
                yield list(_unions), list(_colors)
                i -= 1
                continue
            _c = _colors[i]
            if _c >= 0:
                _unions[_c] = _saved[i]
            _c += 1
            _limit = min(_used[i] + 1, _size)
            _placed = False
            while _c < _limit:
                self._tick()
                _merged = _unions[_c] | items[i]
                if is_k_free_mask(_merged, _ring) and popcount(_merged) <= bound:
                    _saved[i] = _unions[_c]
                    _unions[_c] = _merged
                    _colors[i] = _c
                    _used[i + 1] = max(_used[i], _c + 1)
                    _placed = True
                    break
                _c += 1
            if _placed:
                i += 1
            else:
                _colors[i] = -1
                i -= 1

    def _table(self, masks, items, colors):
        """Transition table of the party that turned `masks` into the colored profile."""
        _two_k = self.ring.two_k
        _rows = []
        for _mask in masks:
            if not _mask:
                _rows.append(tuple([INITIAL_MESSAGE] * _two_k))
                continue
            _row = []
            for _k in range(_two_k):
                _shifted = rotate_mask(_mask, _k, _two_k)
                _owner = next(j for j, _item in enumerate(items) if _shifted & _item == _shifted)
                _row.append(colors[_owner] + 1)
            _rows.append(tuple(_row))
        return tuple(_rows)

    def explore(self, stage: int, masks: List[int], key=None):
        """Return the transition tables for parties stage+1..N-1 that reach a decidable final profile, or None."""
        self._tick()
        _bound = self.size_bound(stage)
        if any(not is_k_free_mask(m, self.ring) or popcount(m) > _bound for m in masks):
            return None
        if stage == self.final_stage:
            return []
        _key = key if key is not None else self.canonical(masks)
        if self.domination and self._dominated(stage, _key):
            return None
        _two_k = self.ring.two_k
        _items = _maximal_masks(rotate_mask(m, _k, _two_k) for m in masks if m for _k in range(_two_k))
        _tried = set()
        for _unions, _colors in self._colorings(_items, self.size_bound(stage + 1)):
            _child_key = self.canonical(_unions)
            if _child_key in _tried:
                continue
            _tried.add(_child_key)
            _rest = self.explore(stage + 1, _unions, _child_key)
            if _rest is not None:
                return [self._table(masks, _items, _colors)] + _rest
        self.failed[stage].append(_key)
        return None


def profile_exists(n_parties: int, k: int, alphabet_size: int, budget: int = DEFAULT_NODE_BUDGET, domination=True,
                   growth_pruning=True, symmetry=True) -> SearchReport:
    """Search reach-set profiles for a decidable protocol.

    Required Arguments:
    n_parties       -- N
    k               -- K, with 2K <= 64
    alphabet_size   -- L

    Keyword Arguments:
    budget          -- node budget; exhausting it yields verdict 'unknown'
    domination      -- prune profiles dominated by a failed one
    growth_pruning  -- bound set sizes by the growth lemma (only active when K is a power of two and L < 2K)
    symmetry        -- key profiles up to affine maps of Z_2K
    """
    _check_parameters(n_parties, k, alphabet_size)
    _started = time.perf_counter()
    _ring = RingSize.from_k(k)
    _report = SearchReport(n_parties, k, alphabet_size, Verdict.impossible, Method.profile,
                           predicted=theorem_verdict(n_parties, k, alphabet_size))
    if n_parties == 1 or alphabet_size >= _ring.two_k:
        _report.verdict = Verdict.exists
        _report.witness = running_sum_witness(n_parties, _ring, alphabet_size) if n_parties > 1 \
            else _with_decision(1, _ring, alphabet_size, [])
        return _finish(_report, _started)
    if _ring.two_k > MAX_SEARCH_TWO_K:
        raise UnsupportedSizeError(f"profile search supports 2K <= {MAX_SEARCH_TWO_K}, got 2K={_ring.two_k}")
    _search = ProfileSearch(n_parties, _ring, alphabet_size, budget=budget, domination=domination,
                            growth_pruning=growth_pruning, symmetry=symmetry)
    _initial = [0] * alphabet_size
    _initial[INITIAL_MESSAGE - 1] = 1
    try:
        _tables = _search.explore(0, _initial)
    except _BudgetExhausted:
        logger.warning(f"Node budget {budget} exhausted for N={n_parties} K={k} L={alphabet_size}; verdict unknown")
        _report.verdict = Verdict.unknown
        _tables = None
    _report.nodes_explored = _search.nodes
    if _tables is not None:
        _report.verdict = Verdict.exists
        _report.witness = _with_decision(n_parties, _ring, alphabet_size, _tables)
    return _finish(_report, _started)


def run_search(method: str, n_parties: int, k: int, alphabet_size: int, **options) -> SearchReport:
    if method == "exhaustive":
        return exhaustive_exists(n_parties, k, alphabet_size,
                                 budget=options.get("protocol_budget", DEFAULT_PROTOCOL_BUDGET))
    if method == "profile":
        return profile_exists(n_parties, k, alphabet_size, budget=options.get("node_budget", DEFAULT_NODE_BUDGET),
                              domination=options.get("domination", True),
                              growth_pruning=options.get("growth_pruning", True),
                              symmetry=options.get("symmetry", True))
    raise InvalidArgumentError(f"method must be 'exhaustive' or 'profile', got {method!r}")


def _run_search_args(args):
    _method, _n, _k, _l, _options = args
    return run_search(_method, _n, _k, _l, **_options)


def min_l(n_parties: int, k: int, l_max: int, method: str = "profile", workers: int = 1, **options) -> MinLResult:
    """Search L = 1..l_max and return every per-L report; monotonicity in L is checked.

    Required Arguments:
    n_parties   -- N
    k           -- K
    l_max       -- largest alphabet tried, at most 2K

    Keyword Arguments:
    method      -- 'profile' or 'exhaustive'
    workers     -- number of processes; each L is an independent search
    options     -- passed to run_search (node_budget, protocol_budget, domination, growth_pruning, symmetry)
    """
    _check_parameters(n_parties, k, l_max)
    if l_max > 2 * k:
        raise InvalidArgumentError(f"l_max must not exceed 2K = {2 * k} (the running sum already succeeds), got {l_max}")
    _jobs = [(method, n_parties, k, _l, options) for _l in range(1, l_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            _reports = list(executor.map(_run_search_args, _jobs))
    else:
        _reports = [_run_search_args(_job) for _job in _jobs]
    _seen_exists = None
    for _report in _reports:
        if _report.verdict == Verdict.exists and _seen_exists is None:
            _seen_exists = _report.alphabet_size
        elif _report.verdict == Verdict.impossible and _seen_exists is not None:
            raise InconsistencyError(f"N={n_parties} K={k}: L={_seen_exists} is feasible but "
                                     f"L={_report.alphabet_size} is not")
    return MinLResult(n_parties, k, l_max, _reports)
