import itertools

import pytest

from mjuggle.states import State

ACCEPTANCE_RESULTS: dict[str, bool] = {}


def states_up_to(b, m, height):
    """All states with ``b`` balls, capacity ``m`` and height at most ``height``."""
    out = []
    for v in itertools.product(range(m + 1), repeat=height):
        if sum(v) == b:
            out.append(State(v, m))
    return sorted(set(out), key=lambda s: s.slots)


@pytest.fixture
def acceptance():
    def record(name, ok):
        ACCEPTANCE_RESULTS[name] = bool(ok)
        assert ok, name
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
