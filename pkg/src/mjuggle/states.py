"""Landing schedules, the multiplex state diagram, and capped walk counting.

A state ``<a_1, a_2, ...>`` records how many balls land 1, 2, ... beats from
now; no slot may hold more than the hand capacity ``m``.  One beat shifts every
slot down and the ``a_1`` balls that just landed are rethrown into slots with
room to spare.  ``m - a_1`` of the hand's ``m`` throw positions are no-throws,
written as height 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .errors import ParameterError


@dataclass(frozen=True, order=True)
class ThrowSet:
    """The multiset of ``m`` throw heights made on one beat (0 = no-throw).

    Heights are stored weakly decreasing so equal multisets compare equal.
    """

    heights: tuple[int, ...]

    def __post_init__(self):
        heights = tuple(sorted((int(h) for h in self.heights), reverse=True))
        if not heights:
            raise ParameterError("a throw set needs at least one entry")
        if heights[-1] < 0:
            raise ParameterError(f"negative throw height in {heights}")
        object.__setattr__(self, "heights", heights)

    @property
    def m(self) -> int:
        return len(self.heights)

    @property
    def balls(self) -> int:
        """Number of actual throws (nonzero heights)."""
        return sum(1 for h in self.heights if h)

    def __iter__(self):
        return iter(self.heights)

    def __str__(self):
        return "[" + ",".join(map(str, self.heights)) + "]"


@dataclass(frozen=True)
class State:
    """A landing schedule with trailing zeros stripped."""

    slots: tuple[int, ...]
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ParameterError(f"hand capacity must be positive, got {self.m}")
        slots = [int(a) for a in self.slots]
        for a in slots:
            if not 0 <= a <= self.m:
                raise ParameterError(
                    f"slot value {a} outside 0..{self.m} in {tuple(slots)}")
        while slots and slots[-1] == 0:
            slots.pop()
        object.__setattr__(self, "slots", tuple(slots))

    @classmethod
    def parse(cls, text: str, m: int) -> State:
        """Read the comma-separated form, e.g. ``"1,2"``; ``""`` and ``"0"`` are empty."""
        text = text.strip()
        if not text:
            return cls((), m)
        try:
            slots = tuple(int(part) for part in text.split(","))
        except ValueError:
            raise ParameterError(f"not a state: {text!r}") from None
        return cls(slots, m)

    @property
    def balls(self) -> int:
        return sum(self.slots)

    @property
    def height(self) -> int:
        return len(self.slots)

    def slot(self, i: int) -> int:
        """1-based slot lookup; anything past the height is 0."""
        return self.slots[i - 1] if 1 <= i <= len(self.slots) else 0

    def partition(self) -> tuple[int, ...]:
        """Nonzero slot values as a weakly decreasing partition of the ball count."""
        return tuple(sorted((a for a in self.slots if a), reverse=True))

    def is_decreasing(self) -> bool:
        """True when the nonzero slots already appear in weakly decreasing order."""
        nonzero = [a for a in self.slots if a]
        return nonzero == sorted(nonzero, reverse=True)

    def sort_key(self):
        return self.slots

    def __str__(self):
        return ",".join(map(str, self.slots))

    def __repr__(self):
        return f"State(<{self}>, m={self.m})"


def _check_compatible(a: State, b: State) -> None:
    if a.m != b.m:
        raise ParameterError(f"hand capacities differ: {a.m} vs {b.m}")
    if a.balls != b.balls:
        raise ParameterError(f"ball counts differ: {a.balls} vs {b.balls}")


def is_edge(src: State, dst: State) -> bool:
    _check_compatible(src, dst)
    length = max(src.height, dst.height + 1)
    return all(src.slot(i) <= dst.slot(i - 1) for i in range(2, length + 1))


def throws_between(src: State, dst: State) -> ThrowSet:
    """The unique throw multiset that carries ``src`` to ``dst``."""
    if not is_edge(src, dst):
        raise ParameterError(f"<{src}> -> <{dst}> is not an edge")
    heights = []
    for j in range(1, dst.height + 1):
        heights += [j] * (dst.slot(j) - src.slot(j + 1))
    heights += [0] * (src.m - len(heights))
    return ThrowSet(tuple(heights))


def _placements(balls: int, spare: Sequence[int], top: int) -> Iterator[list[int]]:
    # weakly decreasing height lists, height j taking at most spare[j-1] balls
    if balls == 0:
        yield []
        return
    for h in range(top, 0, -1):
        cap = spare[h - 1]
        for k in range(min(cap, balls), 0, -1):
            for rest in _placements(balls - k, spare, h - 1):
                yield [h] * k + rest


def successors(src: State, height_cap: int) -> list[tuple[State, ThrowSet]]:
    """Every edge out of ``src`` whose target has height at most ``height_cap``."""
    if height_cap < src.height - 1:
        raise ParameterError(
            f"height cap {height_cap} below shifted height of <{src}>")
    m = src.m
    shifted = [src.slot(i + 1) for i in range(1, height_cap + 1)]
    spare = [m - a for a in shifted]
    out = []
    for heights in _placements(src.slot(1), spare, height_cap):
        slots = list(shifted)
        for h in heights:
            slots[h - 1] += 1
        throws = ThrowSet(tuple(heights) + (0,) * (m - len(heights)))
        out.append((State(tuple(slots), m), throws))
    out.sort(key=lambda pair: pair[0].slots)
    return out


def _compositions(total: int, parts: int, cap: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(cap, total) + 1):
        if total - first > cap * (parts - 1):
            continue
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def _matmul(a, b):
    n = len(b[0])
    out = []
    for row in a:
        acc = [0] * n
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def matrix_power(mat: list[list[int]], n: int) -> list[list[int]]:
    """Exact integer matrix power by repeated squaring."""
    size = len(mat)
    result = [[int(i == j) for j in range(size)] for i in range(size)]
    base = mat
    while n:
        if n & 1:
            result = _matmul(result, base)
        n >>= 1
        if n:
            base = _matmul(base, base)
    return result


class HeightCappedDiagram:
    """The finite state diagram obtained by forbidding throws above ``height_cap``.

    Every state of height at most ``height_cap`` is a vertex; ``adjacency`` is
    the 0/1 edge matrix over ``states`` (sorted by slot tuple).
    """

    def __init__(self, balls: int, m: int, height_cap: int):
        if balls < 0 or m < 1 or height_cap < 1:
            raise ParameterError("need balls >= 0, m >= 1 and height cap >= 1")
        if balls > m * height_cap:
            raise ParameterError(
                f"{balls} balls do not fit under height {height_cap} with m={m}")
        self.balls = balls
        self.m = m
        self.height_cap = height_cap
        self.states = sorted(
            (State(c, m) for c in _compositions(balls, height_cap, m)),
            key=State.sort_key)
        self._powers: dict[int, list[list[int]]] = {}

    @cached_property
    def index(self) -> dict[State, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def adjacency(self) -> list[list[int]]:
        size = len(self.states)
        mat = [[0] * size for _ in range(size)]
        for i, s in enumerate(self.states):
            for t, _ in successors(s, self.height_cap):
                mat[i][self.index[t]] = 1
        return mat

    def power(self, n: int) -> list[list[int]]:
        if n not in self._powers:
            self._powers[n] = matrix_power(self.adjacency, n)
        return self._powers[n]

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return (f"HeightCappedDiagram(balls={self.balls}, m={self.m}, "
                f"height_cap={self.height_cap}, states={len(self.states)})")


def count_walks_capped(diagram: HeightCappedDiagram, src: State, dst: State,
                       n: int) -> int:
    """Walks of length ``n`` from ``src`` to ``dst`` that never exceed the cap."""
    if n < 0:
        raise ParameterError("walk length must be nonnegative")
    for s in (src, dst):
        if s.m != diagram.m or s.balls != diagram.balls:
            raise ParameterError(f"<{s}> does not belong to {diagram!r}")
        if s.height > diagram.height_cap:
            raise ParameterError(
                f"<{s}> exceeds height cap {diagram.height_cap}")
    return diagram.power(n)[diagram.index[src]][diagram.index[dst]]


def saturating_cap(src: State, dst: State, n: int) -> int:
    """A height cap large enough that capping removes no walk of length ``n``."""
    return max(1, n + max(src.height, dst.height))
