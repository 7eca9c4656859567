import typing

class ResultsAggregator():
    """Tally of named check outcomes, grouped by suite, with the two quality-gate percentages.

    executed coverage   -- share of all checks that were not skipped
    passing coverage    -- share of asserted checks (passed or failed) that passed; exploratory checks do not count
    """

    passed = "passed"
    failed = "failed"
    skipped = "skipped"
    exploratory = "exploratory"
    total = "total"

    states = (passed, failed, skipped, exploratory)

    def __init__(self, results=()):
        # (suite, name) -> record; insertion order is kept, sorting happens on read
        self.__results: typing.Dict[typing.Tuple[str, str], dict] = {}
        for _suite, _state, _name, _metadata in results:
            self.insert_result(_suite, _state, _name, _metadata)


    def get_raw_results(self):
        return {
            "results": self.get_results(),
            "coverage": self.get_coverage(),
            **self.__count_by_state()
        }


    def get_status(self, executed_gate=100, passing_gate=100):
        _coverage = self.get_coverage()
        if _coverage[ResultsAggregator.skipped] >= executed_gate and _coverage[ResultsAggregator.passed] >= passing_gate:
            return ResultsAggregator.passed
        return ResultsAggregator.failed


    def get_results(self):
        return [self.__results[_key] for _key in sorted(self.__results)]


    def get_failures(self):
        return [r for r in self.get_results() if r['state'] == ResultsAggregator.failed]


    def get_coverage(self):
        _counts = self.__count_by_state()
        _asserted = _counts[ResultsAggregator.passed] + _counts[ResultsAggregator.failed]
        _total = _counts[ResultsAggregator.total]
        return {
            ResultsAggregator.skipped: 100 - _counts[ResultsAggregator.skipped] / _total * 100 if _total else 0,
            ResultsAggregator.passed: _counts[ResultsAggregator.passed] / _asserted * 100 if _asserted else 0,
        }


    def get_counts(self) -> typing.Tuple[int, int, int, int, int]:
        _counts = self.__count_by_state()
        return tuple(_counts[s] for s in (ResultsAggregator.total,) + ResultsAggregator.states)


    def insert_result(self, suite, state, name, metadata):
        """Record one check outcome; a repeated (suite, name) can only be downgraded to failed.

        Required Parameters:
        suite       -- the group of checks, ex. 'lemma' or 'search'
        state       -- one of passed, failed, skipped, exploratory
        name        -- a human-readable check name, unique within the suite
        metadata    -- a JSON-serializable dict of details
        """
        if state not in ResultsAggregator.states:
            raise ValueError(f"Unknown check state {state!r}")
        _existing = self.__results.get((suite, name))
        if _existing is None:
            self.__results[(suite, name)] = {"name": name, "state": state, "suite": suite, "metadata": metadata}
        elif state == ResultsAggregator.failed:
            _existing['state'] = ResultsAggregator.failed


    def __count_by_state(self):
        _counts = {s: 0 for s in ResultsAggregator.states}
        for _record in self.__results.values():
            _counts[_record['state']] += 1
        _counts[ResultsAggregator.total] = len(self.__results)
        return _counts
