"""Exact walk counters for the unbounded state diagram.

Two routes that do not share code:

* ``count_selections`` fills the 0/1 selection matrix block by block, one
  block of ``m`` columns per beat, tracking the unused capacity of each row.
* ``count_walks_brute`` drops real balls into buckets whose capacities are
  ``m`` for the first ``n`` beats and then the target state's slot counts.

A third, fully independent route lives in :mod:`mjuggle.states`
(powers of a height-capped adjacency matrix).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import ParameterError
from .states import State, ThrowSet, _check_compatible

DEFAULT_WALK_LIMIT = 10_000


@dataclass(frozen=True)
class SelectionMatrix:
    """Row sums of the selection matrix for walks of length ``period``.

    Block ``t`` (1-based) has ``m`` columns admitting rows ``t .. len(row_sums)``;
    picking row ``t + j`` in that block is a throw of height ``j``.
    """

    period: int
    m: int
    row_sums: tuple[int, ...]

    def __post_init__(self):
        if self.period < 0 or self.m < 1:
            raise ParameterError("period must be >= 0 and m >= 1")
        object.__setattr__(self, "row_sums", tuple(int(r) for r in self.row_sums))
        if len(self.row_sums) < self.period:
            raise ParameterError("need at least one row per block")

    @classmethod
    def for_walk(cls, src: State, dst: State, n: int) -> SelectionMatrix:
        _check_compatible(src, dst)
        m = src.m
        tail = max(src.height - n, dst.height)
        rows = [m - src.slot(i) for i in range(1, n + 1)]
        rows += [dst.slot(j) - src.slot(n + j) for j in range(1, tail + 1)]
        return cls(n, m, tuple(rows))

    @property
    def tail(self) -> int:
        return len(self.row_sums) - self.period

    @property
    def feasible(self) -> bool:
        return all(r >= 0 for r in self.row_sums) and sum(self.row_sums) == self.m * self.period


def _multisets(total: int, residual: Sequence[int], lo: int, hi: int) -> Iterator[list[int]]:
    # all ways to put ``total`` picks into rows hi, hi-1, ..., lo (weakly decreasing)
    if total == 0:
        yield []
        return
    if hi < lo:
        return
    for k in range(min(total, residual[hi]), -1, -1):
        for rest in _multisets(total - k, residual, lo, hi - 1):
            yield [hi] * k + rest


def count_selections(matrix: SelectionMatrix) -> int:
    """Number of admissible 0/1 selections with the required row sums."""
    if not matrix.feasible:
        return 0
    m, n = matrix.m, matrix.period

    @lru_cache(maxsize=None)
    def fill(t: int, residual: tuple[int, ...]) -> int:
        # residual[0] is row t (0-based); rows before t are already exhausted
        if t == n:
            return int(not any(residual))
        no_throws = residual[0]
        if no_throws > m:
            return 0
        rows = list(residual)
        total = 0
        for picks in _multisets(m - no_throws, rows, 1, len(rows) - 1):
            after = list(rows)
            for r in picks:
                after[r] -= 1
            total += fill(t + 1, tuple(after[1:]))
        return total

    return fill(0, matrix.row_sums)


@dataclass(frozen=True)
class Walk:
    """A start state plus the (reached state, throws) pair of every beat."""

    start: State
    steps: tuple[tuple[State, ThrowSet], ...] = ()

    @property
    def states(self) -> list[State]:
        return [self.start] + [s for s, _ in self.steps]

    @property
    def end(self) -> State:
        return self.steps[-1][0] if self.steps else self.start

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "start": str(self.start),
            "steps": [{"state": str(s), "throws": list(t.heights)} for s, t in self.steps],
        }

    def __str__(self):
        parts = [f"<{self.start}>"]
        for s, t in self.steps:
            parts.append(f"-{t}-> <{s}>")
        return " ".join(parts)


class _Buckets:
    """Bucket simulation with the modified capacities m,...,m (n times), b_1, b_2, ..."""

    def __init__(self, src: State, capacities: list[int]):
        self.m = src.m
        self.capacities = capacities
        self.size = len(capacities)
        self.initial = tuple(src.slot(i) for i in range(1, self.size + 1))
        self.balls = src.balls

    def overfull(self) -> bool:
        return any(a > c for a, c in zip(self.initial, self.capacities))

    def moves(self, t: int, buckets: tuple[int, ...]):
        """Yield (next buckets, heights) for beat ``t`` (1-based), bucket ``t`` emptied."""
        landing = buckets[t - 1]
        for heights in self._throws(landing, buckets, t, self.size - t):
            after = list(buckets)
            after[t - 1] = 0
            for h in heights:
                after[t - 1 + h] += 1
            yield tuple(after), heights

    def _throws(self, balls, buckets, t, top):
        if balls == 0:
            yield []
            return
        for h in range(top, 0, -1):
            room = self.capacities[t - 1 + h] - buckets[t - 1 + h]
            for k in range(min(room, balls), 0, -1):
                for rest in self._throws(balls - k, buckets, t, h - 1):
                    yield [h] * k + rest

    def state_after(self, t: int, buckets: tuple[int, ...]) -> State:
        return State(buckets[t:], self.m)


def _setup(src: State, dst: State, n: int) -> _Buckets:
    _check_compatible(src, dst)
    if n < 0:
        raise ParameterError("walk length must be nonnegative")
    tail = max(src.height - n, dst.height)
    caps = [src.m] * n + [dst.slot(j) for j in range(1, tail + 1)]
    return _Buckets(src, caps)


def count_walks_brute(src: State, dst: State, n: int) -> int:
    """Walks of length ``n`` from ``src`` to ``dst`` by bucket simulation."""
    sim = _setup(src, dst, n)
    if sim.overfull():
        return 0

    @lru_cache(maxsize=None)
    def go(t: int, buckets: tuple[int, ...]) -> int:
        if t > n:
            return int(sim.state_after(n, buckets) == dst)
        return sum(go(t + 1, nxt) for nxt, _ in sim.moves(t, buckets))

    return go(1, sim.initial)


def enumerate_walks(src: State, dst: State, n: int,
                    limit: int | None = DEFAULT_WALK_LIMIT) -> list[Walk]:
    """All walks from ``src`` to ``dst`` of length ``n`` in lexicographic order.

    Walks are compared by their sequence of visited states. At most ``limit``
    walks are returned (``None`` for no limit).
    """
    sim = _setup(src, dst, n)
    if sim.overfull() or (limit is not None and limit <= 0):
        return []
    m = src.m
    found: list[Walk] = []

    def go(t, buckets, steps):
        if limit is not None and len(found) >= limit:
            return
        if t > n:
            if sim.state_after(n, buckets) == dst:
                found.append(Walk(src, tuple(steps)))
            return
        children = []
        for nxt, heights in sim.moves(t, buckets):
            state = sim.state_after(t, nxt)
            throws = ThrowSet(tuple(heights) + (0,) * (m - len(heights)))
            children.append((state.slots, nxt, state, throws))
        children.sort(key=lambda c: c[0])
        for _, nxt, state, throws in children:
            steps.append((state, throws))
            go(t + 1, nxt, steps)
            steps.pop()

    go(1, sim.initial, [])
    return found


def count_first_return(origin: State, n: int) -> int:
    """Closed walks of length ``n`` at ``origin`` that avoid it at beats 1..n-1."""
    if n < 1:
        raise ParameterError("first-return length must be at least 1")
    sim = _setup(origin, origin, n)

    @lru_cache(maxsize=None)
    def go(t: int, buckets: tuple[int, ...]) -> int:
        if t > n:
            return int(sim.state_after(n, buckets) == origin)
        total = 0
        for nxt, _ in sim.moves(t, buckets):
            if t < n and sim.state_after(t, nxt) == origin:
                continue
            total += go(t + 1, nxt)
        return total

    return go(1, sim.initial)
