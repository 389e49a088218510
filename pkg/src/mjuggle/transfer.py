"""Partition-indexed transfer matrix for periodic multiplex walks.

Once the initial noise of the start state has been thrown away, the selection
matrix has row sums ``m - a_1, ..., m - a_h, m, ..., m, gamma`` where the
terminal rows ``gamma`` only matter as a multiset, i.e. as a partition of the
ball count with parts at most ``m``.  Peeling off the last block of columns
turns ``gamma`` into some ``delta``; the number of ways to do so is the
coefficient ``a[gamma][delta]`` and is given in closed form by
:func:`coefficient`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .errors import ParameterError
from .states import State, ThrowSet
from .walks import SelectionMatrix, count_selections


@dataclass(frozen=True)
class PartCounts:
    """A partition stored as multiplicities: ``counts[i-1]`` parts of size ``i``."""

    m: int
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if self.m < 1 or len(counts) != self.m:
            raise ParameterError(f"need exactly m={self.m} multiplicities, got {counts}")
        if any(c < 0 for c in counts):
            raise ParameterError(f"negative multiplicity in {counts}")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_parts(cls, parts, m: int) -> PartCounts:
        counts = [0] * m
        for p in parts:
            if not 1 <= p <= m:
                raise ParameterError(f"part {p} outside 1..{m}")
            counts[p - 1] += 1
        return cls(m, tuple(counts))

    @classmethod
    def parse(cls, text: str, m: int) -> PartCounts:
        text = text.strip()
        try:
            parts = [int(p) for p in text.split(",")] if text else []
        except ValueError:
            raise ParameterError(f"not a partition: {text!r}") from None
        if parts != sorted(parts, reverse=True):
            raise ParameterError(f"parts must be weakly decreasing: {text!r}")
        return cls.from_parts(parts, m)

    @property
    def total(self) -> int:
        return sum(i * c for i, c in enumerate(self.counts, start=1))

    @property
    def parts(self) -> tuple[int, ...]:
        out = []
        for size in range(self.m, 0, -1):
            out += [size] * self.counts[size - 1]
        return tuple(out)

    def __str__(self):
        return ",".join(map(str, self.parts))


def partitions_of(b: int, m: int) -> list[PartCounts]:
    """Partitions of ``b`` into parts of size at most ``m``, reverse-lexicographic."""
    if b < 0 or m < 1:
        raise ParameterError("need b >= 0 and m >= 1")

    def gen(rest, largest):
        if rest == 0:
            yield ()
            return
        for p in range(min(rest, largest), 0, -1):
            for tail in gen(rest - p, p):
                yield (p,) + tail

    return [PartCounts.from_parts(parts, m) for parts in gen(b, m)]


def _binom(top: int, k: int) -> int:
    if top < 0 or k < 0 or k > top:
        return 0
    return comb(top, k)


def coefficient(gamma: PartCounts, delta: PartCounts) -> int:
    """Number of one-block fills turning terminal partition ``gamma`` into ``delta``."""
    if gamma.m != delta.m:
        raise ParameterError(f"part bounds differ: {gamma.m} vs {delta.m}")
    if gamma.total != delta.total:
        raise ParameterError(f"partitions of different totals: {gamma.total} vs {delta.total}")
    m = gamma.m
    g, d = gamma.counts, delta.counts
    result = 1
    for i in range(1, m + 1):
        slots = sum(g[i - 1:]) + 1 - sum(d[i:])
        result *= _binom(slots, d[i - 1])
        if not result:
            break
    return result


@dataclass(frozen=True)
class TransferMatrix:
    b: int
    m: int
    index: tuple[PartCounts, ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.index)

    def rows(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def apply(self, vector):
        return [sum(a * x for a, x in zip(row, vector)) for row in self.entries]


@lru_cache(maxsize=None)
def build_transfer_matrix(b: int, m: int) -> TransferMatrix:
    index = tuple(partitions_of(b, m))
    entries = tuple(tuple(coefficient(g, d) for d in index) for g in index)
    return TransferMatrix(b, m, index, entries)


def enumerate_block_fills(gamma: PartCounts, m: int | None = None) -> list[tuple[ThrowSet, PartCounts]]:
    """Every way to fill the last block when the terminal rows hold ``gamma``.

    The block sees one row of capacity ``m`` (its own no-throw row, label 0)
    followed by one row per part of ``gamma`` (labels 1, 2, ...).  Each fill
    picks ``m`` rows as a multiset; the leftover capacities form ``delta``.
    """
    m = gamma.m if m is None else m
    if m != gamma.m:
        raise ParameterError(f"gamma has part bound {gamma.m}, not {m}")
    caps = (m,) + gamma.parts
    fills = []

    def go(need, row, picked):
        if need == 0:
            left = list(caps)
            for r in picked:
                left[r] -= 1
            delta = PartCounts.from_parts([c for c in left if c], m)
            fills.append((ThrowSet(tuple(picked) + (0,) * (m - len(picked))), delta))
            return
        if row < 0:
            return
        for k in range(min(need, caps[row]), -1, -1):
            go(need - k, row - 1, picked + [row] * k)

    go(m, len(caps) - 1, [])
    return fills


def fill_counts(gamma: PartCounts) -> Counter:
    """Block fills of ``gamma`` grouped by the resulting partition."""
    return Counter(delta for _, delta in enumerate_block_fills(gamma))


def _base_vector(alpha: State, index) -> list[int]:
    m = alpha.m
    if alpha.height == 1 and alpha.slot(1) == alpha.balls:
        return [1] * len(index)
    noise = [m - a for a in alpha.slots]
    return [count_selections(SelectionMatrix(alpha.height, m, tuple(noise) + g.parts))
            for g in index]


def x_vectors(alpha: State, k_max: int) -> list[list[int]]:
    """``[x(0), x(1), ..., x(k_max)]`` as vectors over the canonical partition order."""
    A = build_transfer_matrix(alpha.balls, alpha.m)
    vec = _base_vector(alpha, A.index)
    out = [vec]
    for _ in range(k_max):
        vec = A.apply(vec)
        out.append(vec)
    return out


def x_values(alpha: State, b: int, m: int, k: int) -> dict[PartCounts, int]:
    """Fill counts ``x_gamma(k)`` for every partition ``gamma`` of ``b``."""
    if alpha.balls != b or alpha.m != m:
        raise ParameterError(f"<{alpha}> is not a state with b={b}, m={m}")
    if k < 0:
        raise ParameterError("k must be nonnegative")
    A = build_transfer_matrix(b, m)
    return dict(zip(A.index, x_vectors(alpha, k)[-1]))


def count_walks_transfer(src: State, dst: State, n: int) -> int:
    """Walk count through the transfer recursion; needs ``n >= h(src)``."""
    if src.m != dst.m or src.balls != dst.balls:
        raise ParameterError("states must share ball count and hand capacity")
    if n < src.height:
        raise ParameterError(
            f"transfer route needs n >= h(<{src}>) = {src.height}, got {n}")
    gamma = PartCounts.from_parts(dst.partition(), dst.m)
    return x_values(src, src.balls, src.m, n - src.height)[gamma]
