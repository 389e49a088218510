"""Characteristic polynomials, linear recurrences and rational generating functions.

All arithmetic is on Python integers; the only divisions are exact ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Sequence

from .errors import ParameterError
from .states import State
from .transfer import TransferMatrix, build_transfer_matrix
from .walks import count_first_return, count_walks_brute


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, constant term first, no trailing zero coefficients."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[i] + other[i] for i in range(n)))

    def __neg__(self):
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        if not self or not other:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def truncate(self, degree: int) -> IntPolynomial:
        return IntPolynomial(self.coeffs[:degree + 1])

    def reversed(self, degree: int | None = None) -> IntPolynomial:
        """``x^degree * p(1/x)``."""
        degree = self.degree if degree is None else degree
        return IntPolynomial(tuple(self[degree - i] for i in range(degree + 1)))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def format(self, var: str = "x", descending: bool = False) -> str:
        """Human form, e.g. ``1 - 10x + 27x^2``; highest power first if ``descending``."""
        if not self.coeffs:
            return "0"
        terms = []
        order = range(self.degree, -1, -1) if descending else range(self.degree + 1)
        for i in order:
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                power = var if i == 1 else f"{var}^{i}"
                body = power if mag == 1 else f"{mag}{power}"
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()


def _poly_divmod_exact(num: IntPolynomial, den: IntPolynomial) -> IntPolynomial:
    quot, rem = _divmod_q(num, den)
    if any(rem) or any(q.denominator != 1 for q in quot):
        raise ArithmeticError(f"{den} does not divide {num} over the integers")
    return IntPolynomial(tuple(int(q) for q in quot))


def _divmod_q(num: IntPolynomial, den: IntPolynomial):
    rem = [Fraction(c) for c in num.coeffs]
    dc = den.coeffs
    if len(rem) < len(dc):
        return [], rem
    quot = [Fraction(0)] * (len(rem) - len(dc) + 1)
    for i in range(len(quot) - 1, -1, -1):
        q = rem[i + len(dc) - 1] / dc[-1]
        quot[i] = q
        for j, d in enumerate(dc):
            rem[i + j] -= q * d
    return quot, rem[:len(dc) - 1]


def _primitive(coeffs: Sequence[Fraction]) -> IntPolynomial:
    denom = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    ints = [int(c * denom) for c in coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return IntPolynomial(tuple(c // g for c in ints)) if g else IntPolynomial()


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Primitive integer gcd, sign fixed so the lowest nonzero coefficient is positive."""
    x = [Fraction(c) for c in a.coeffs]
    y = [Fraction(c) for c in b.coeffs]
    while y:
        _, rem = _divmod_q(_primitive(x), _primitive(y))
        while rem and rem[-1] == 0:
            rem.pop()
        x, y = y, rem
    g = _primitive(x)
    low = next((c for c in g.coeffs if c), 1)
    return -g if low < 0 else g


def char_poly(A: TransferMatrix | Sequence[Sequence[int]]) -> IntPolynomial:
    """``det(xI - A)`` by the Faddeev-LeVerrier recursion (exact integer division)."""
    rows = A.rows() if isinstance(A, TransferMatrix) else [list(r) for r in A]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ParameterError("characteristic polynomial needs a square matrix")
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M <- A M + c_{n-k+1} I
        AM = [[sum(rows[i][t] * M[t][j] for t in range(n)) for j in range(n)]
              for i in range(n)]
        for i in range(n):
            AM[i][i] += coeffs[n - k + 1]
        M = AM
        trace = sum(sum(rows[i][t] * M[t][i] for t in range(n)) for i in range(n))
        q, r = divmod(-trace, k)
        if r:
            raise ArithmeticError("non-integer characteristic polynomial coefficient")
        coeffs[n - k] = q
    return IntPolynomial(tuple(coeffs))


@dataclass(frozen=True)
class Recurrence:
    """``a(n+r) = -q_1 a(n+r-1) - ... - q_r a(n)``."""

    order: int
    q: tuple[int, ...]

    @property
    def weights(self) -> tuple[int, ...]:
        """Multipliers of a(n+r-1), ..., a(n)."""
        return tuple(-c for c in self.q)

    def next_term(self, window: Sequence[int]) -> int:
        """Term following the last ``order`` values in ``window``."""
        recent = list(window[-self.order:])[::-1] if self.order else []
        return sum(w * v for w, v in zip(self.weights, recent))

    def holds(self, window: Sequence[int]) -> bool:
        """Whether the last element of ``window`` follows from the ``order`` before it."""
        return self.next_term(window[:-1]) == window[-1]

    def extend(self, seed: Sequence[int], count: int) -> list[int]:
        terms = list(seed)
        if len(terms) < self.order:
            raise ParameterError(f"need {self.order} seed terms, got {len(terms)}")
        while len(terms) < count:
            terms.append(self.next_term(terms))
        return terms[:count]

    def __str__(self):
        r = self.order
        if r == 0:
            return "a(n) = 0"
        parts = []
        for i, w in enumerate(self.weights, start=1):
            if not w:
                continue
            arg = "a(n)" if i == r else f"a(n+{r - i})"
            mag = abs(w)
            body = arg if mag == 1 else f"{mag}{arg}"
            parts.append(("-" if w < 0 else "+", body))
        if not parts:
            return f"a(n+{r}) = 0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return f"a(n+{r}) = {out}"


def recurrence_from_charpoly(p: IntPolynomial) -> Recurrence:
    r = p.degree
    if r < 0 or p[r] != 1:
        raise ParameterError(f"characteristic polynomial must be monic: {p}")
    return Recurrence(r, tuple(p[r - i] for i in range(1, r + 1)))


@dataclass(frozen=True)
class RationalGF:
    """``numerator / denominator`` as a power series; ``denominator(0) == 1``."""

    numerator: IntPolynomial
    denominator: IntPolynomial = field(default_factory=lambda: IntPolynomial((1,)))

    def __post_init__(self):
        if self.denominator[0] != 1:
            raise ParameterError(
                f"denominator must have constant term 1: {self.denominator}")

    def reduced(self) -> RationalGF:
        """Cancel the common factor of numerator and denominator."""
        if not self.numerator:
            return RationalGF(IntPolynomial(), IntPolynomial((1,)))
        g = poly_gcd(self.numerator, self.denominator)
        if g.degree <= 0:
            return self
        return RationalGF(_poly_divmod_exact(self.numerator, g),
                          _poly_divmod_exact(self.denominator, g))

    def to_json(self) -> dict:
        return {"numerator": list(self.numerator.coeffs),
                "denominator": list(self.denominator.coeffs)}

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator})"


def expand(gf: RationalGF, num_terms: int) -> list[int]:
    """Power-series coefficients of ``x^1 .. x^num_terms``."""
    den = gf.denominator
    series: list[int] = []
    for k in range(num_terms + 1):
        c = gf.numerator[k] - sum(den[j] * series[k - j] for j in range(1, min(k, den.degree) + 1))
        series.append(c)
    return series[1:]


def primitive_transform(F: RationalGF) -> RationalGF:
    """Generating function of first-return counts, ``F / (1 + F)``."""
    if F.numerator[0] != 0:
        raise ParameterError("F must vanish at 0 (no length-0 term)")
    if not F.numerator:
        return RationalGF(IntPolynomial(), IntPolynomial((1,)))
    return RationalGF(F.numerator, F.denominator + F.numerator)


@dataclass(frozen=True)
class CountSequence:
    origin: State
    terminal: State
    kind: str
    terms: tuple[int, ...]

    @property
    def b(self) -> int:
        return self.origin.balls

    @property
    def m(self) -> int:
        return self.origin.m


def seed_length(origin: State) -> int:
    """How many leading terms must come from an oracle before the recurrence applies."""
    r = len(build_transfer_matrix(origin.balls, origin.m).index)
    return max(origin.height, 1) + r - 1


def recurrence_for(b: int, m: int) -> Recurrence:
    return recurrence_from_charpoly(char_poly(build_transfer_matrix(b, m)))


def periodic_sequence(origin: State, num_terms: int, terminal: State | None = None,
                      oracle: Callable[[State, State, int], int] = count_walks_brute,
                      ) -> CountSequence:
    """Walk counts a(1..num_terms) from ``origin`` to ``terminal`` (default: back to origin).

    The first ``seed_length(origin)`` terms come from ``oracle``; the rest are
    produced by the characteristic-polynomial recurrence.
    """
    if num_terms < 1:
        raise ParameterError("need at least one term")
    terminal = origin if terminal is None else terminal
    seed = seed_length(origin)
    terms = [oracle(origin, terminal, n) for n in range(1, min(seed, num_terms) + 1)]
    if num_terms > seed:
        rec = recurrence_for(origin.balls, origin.m)
        terms = rec.extend(terms, num_terms)
    return CountSequence(origin, terminal, "periodic", tuple(terms))


def periodic_gf(origin: State, reduced: bool = False,
                oracle: Callable[[State, State, int], int] = count_walks_brute) -> RationalGF:
    """Rational generating function of closed walks at ``origin``.

    The denominator is the reversed characteristic polynomial of the transfer
    matrix; the fraction is left unreduced unless ``reduced`` is set.
    """
    p = char_poly(build_transfer_matrix(origin.balls, origin.m))
    den = p.reversed()
    top = seed_length(origin)
    # one extra oracle term confirms the numerator really stops at degree ``top``
    terms = [oracle(origin, origin, n) for n in range(1, top + 2)]
    product = den * IntPolynomial((0,) + tuple(terms))
    if product[top + 1] != 0:
        raise ArithmeticError(
            f"generating function numerator for <{origin}> exceeds degree {top}")
    gf = RationalGF(product.truncate(top), den)
    return gf.reduced() if reduced else gf


def primitive_sequence(origin: State, num_terms: int) -> CountSequence:
    """First-return counts b(1..num_terms) via ``F / (1 + F)``."""
    terms = expand(primitive_transform(periodic_gf(origin)), num_terms)
    return CountSequence(origin, origin, "primitive", tuple(terms))


def spot_check(seq: CountSequence, every: int = 1) -> list[tuple[int, int, int]]:
    """Recompute every ``every``-th term by brute force; return (n, got, expected) mismatches."""
    if every < 1:
        raise ParameterError("spot-check stride must be positive")
    bad = []
    for n in range(every, len(seq.terms) + 1, every):
        if seq.kind == "primitive":
            expected = count_first_return(seq.origin, n)
        else:
            expected = count_walks_brute(seq.origin, seq.terminal, n)
        if expected != seq.terms[n - 1]:
            bad.append((n, seq.terms[n - 1], expected))
    return bad
