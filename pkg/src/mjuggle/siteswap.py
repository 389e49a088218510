"""Multiplex siteswap notation: ``[2,0][3,1][3,3][0,0]``.

One bracketed block per beat, each listing the ``m`` throw heights made on
that beat (0 marks an empty place in the hand).  Blocks shorter than ``m`` are
padded with zeros.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParameterError, ParseError, SimulationError, ValidationError
from .states import State, ThrowSet, throws_between, is_edge
from .walks import Walk


@dataclass(frozen=True)
class SiteswapPattern:
    m: int
    throws: tuple[ThrowSet, ...]

    def __post_init__(self):
        throws = tuple(t if isinstance(t, ThrowSet) else ThrowSet(tuple(t))
                       for t in self.throws)
        if not throws:
            raise ValidationError("a pattern needs at least one beat")
        for i, t in enumerate(throws, start=1):
            if t.m != self.m:
                raise ValidationError(f"beat {i} has {t.m} throws, expected m={self.m}")
        object.__setattr__(self, "throws", throws)

    @property
    def period(self) -> int:
        return len(self.throws)

    @property
    def height_sum(self) -> int:
        return sum(sum(t.heights) for t in self.throws)

    @property
    def ball_count(self) -> Fraction:
        """Average throw height per beat; an integer for valid patterns."""
        return Fraction(self.height_sum, self.period)

    def residue_counts(self) -> Counter:
        """How often each landing residue in 1..n is hit (no-throws included)."""
        n = self.period
        counts = Counter({r: 0 for r in range(1, n + 1)})
        for i, t in enumerate(self.throws, start=1):
            for x in t.heights:
                counts[(i + x - 1) % n + 1] += 1
        return counts

    def to_json(self) -> dict:
        return {"m": self.m, "throws": [list(t.heights) for t in self.throws]}

    @classmethod
    def from_json(cls, data: dict) -> SiteswapPattern:
        return cls(int(data["m"]), tuple(ThrowSet(tuple(t)) for t in data["throws"]))

    def __str__(self):
        return format_pattern(self)


def parse(text: str, m: int | None = None) -> SiteswapPattern:
    """Read bracket notation; ``m`` defaults to the widest block."""
    pos = 0
    blocks: list[list[int]] = []

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect_int() -> int:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            found = repr(text[pos]) if pos < len(text) else "end of input"
            raise ParseError(f"expected a throw height, found {found}", pos)
        return int(text[start:pos])

    skip_ws()
    if pos == len(text):
        raise ParseError("empty pattern", pos)
    while pos < len(text):
        if text[pos] != "[":
            raise ParseError(f"expected '[', found {text[pos]!r}", pos)
        pos += 1
        block = [expect_int()]
        while True:
            skip_ws()
            if pos == len(text):
                raise ParseError("unclosed '['", pos)
            if text[pos] == ",":
                pos += 1
                block.append(expect_int())
            elif text[pos] == "]":
                pos += 1
                break
            else:
                raise ParseError(f"expected ',' or ']', found {text[pos]!r}", pos)
        blocks.append(block)
        skip_ws()

    width = max(len(b) for b in blocks)
    if m is None:
        m = width
    elif width > m:
        raise ValidationError(f"a block has {width} throws but m={m}")
    if m < 1:
        raise ValidationError("hand capacity must be positive")
    return SiteswapPattern(m, tuple(ThrowSet(tuple(b) + (0,) * (m - len(b))) for b in blocks))


def format_pattern(pattern: SiteswapPattern) -> str:
    return "".join(str(t) for t in pattern.throws)


@dataclass(frozen=True)
class ValidityReport:
    period: int
    m: int
    residue_counts: dict[int, int]
    residues_ok: bool
    height_sum: int
    balls: int | None
    reasons: tuple[str, ...] = field(default=())

    @property
    def valid(self) -> bool:
        return self.residues_ok and self.balls is not None

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "period": self.period,
            "m": self.m,
            "balls": self.balls,
            "heightSum": self.height_sum,
            "residueCounts": {str(r): c for r, c in sorted(self.residue_counts.items())},
            "reasons": list(self.reasons),
        }


def validate(pattern: SiteswapPattern) -> ValidityReport:
    """Check that every landing residue is hit ``m`` times and the ball count is whole."""
    counts = pattern.residue_counts()
    reasons = []
    bad = {r: c for r, c in sorted(counts.items()) if c != pattern.m}
    for r, c in bad.items():
        reasons.append(f"residue {r} hit {c} times, expected {pattern.m}")
    avg = pattern.ball_count
    if avg.denominator != 1:
        reasons.append(f"average throw height {avg} is not an integer")
    return ValidityReport(
        period=pattern.period,
        m=pattern.m,
        residue_counts=dict(counts),
        residues_ok=not bad,
        height_sum=pattern.height_sum,
        balls=int(avg) if avg.denominator == 1 else None,
        reasons=tuple(reasons),
    )


def step(state: State, throws: ThrowSet, index: int | None = None) -> State:
    """Apply one beat of throws to ``state``."""
    if throws.m != state.m:
        raise ParameterError(f"throw set {throws} does not have m={state.m} entries")
    landing = state.slot(1)
    if throws.balls != landing:
        raise SimulationError(
            f"{landing} ball(s) in the bottom bucket but {throws} throws {throws.balls}",
            index)
    top = max(state.height - 1, max(throws.heights))
    slots = [state.slot(i + 1) for i in range(1, top + 1)]
    for h in throws.heights:
        if h:
            slots[h - 1] += 1
            if slots[h - 1] > state.m:
                raise SimulationError(
                    f"throw to height {h} overfills a bucket of capacity {state.m}", index)
    return State(tuple(slots), state.m)


def simulate(pattern: SiteswapPattern, start: State) -> list[State]:
    """Run one period of ``pattern`` from ``start``; returns n + 1 states."""
    if start.m != pattern.m:
        raise ParameterError(f"state has m={start.m} but pattern has m={pattern.m}")
    avg = pattern.ball_count
    if avg != start.balls:
        raise SimulationError(
            f"pattern averages {avg} balls but <{start}> holds {start.balls}")
    trajectory = [start]
    for i, t in enumerate(pattern.throws, start=1):
        trajectory.append(step(trajectory[-1], t, i))
    return trajectory


def induced_state(pattern: SiteswapPattern) -> State:
    """Landing schedule at time 0 of the pattern repeated forever in the past."""
    n = pattern.period
    top = max(max(t.heights) for t in pattern.throws)
    slots = [0] * top
    # throws at times i - k*n <= 0 that are still in the air at time 0
    for k in range(1, top // n + 2):
        for i, t in enumerate(pattern.throws, start=1):
            when = i - k * n
            for x in t.heights:
                if x and when + x > 0:
                    slots[when + x - 1] += 1
    if any(a > pattern.m for a in slots):
        raise ValidationError(f"pattern {pattern} overfills a bucket in its own state")
    return State(tuple(slots), pattern.m)


def walk_of_pattern(pattern: SiteswapPattern, start: State) -> Walk:
    states = simulate(pattern, start)
    return Walk(start, tuple(zip(states[1:], pattern.throws)))


def pattern_of_walk(walk: Walk) -> SiteswapPattern:
    """Throw sequence of an edge-valid walk."""
    if not walk.steps:
        raise ParameterError("an empty walk has no pattern (period must be >= 1)")
    prev = walk.start
    for i, (state, throws) in enumerate(walk.steps, start=1):
        if prev.m != state.m or prev.balls != state.balls or not is_edge(prev, state):
            raise ParameterError(f"step {i}: <{prev}> -> <{state}> is not an edge")
        if throws_between(prev, state) != throws:
            raise ParameterError(f"step {i}: throws {throws} do not carry <{prev}> to <{state}>")
        prev = state
    return SiteswapPattern(walk.start.m, tuple(t for _, t in walk.steps))
