"""Exit criteria. Each test records one PASS/FAIL line shown in the terminal summary."""

import itertools
import time
from collections import Counter

from conftest import states_up_to
from mjuggle.series import (IntPolynomial, char_poly, expand, periodic_gf, periodic_sequence,
                            primitive_transform, recurrence_from_charpoly)
from mjuggle.siteswap import format_pattern, parse, pattern_of_walk, simulate, validate
from mjuggle.states import HeightCappedDiagram, State, ThrowSet, count_walks_capped
from mjuggle.tables import load_fixtures
from mjuggle.transfer import (PartCounts, build_transfer_matrix, coefficient,
                              enumerate_block_fills, partitions_of, x_values)
from mjuggle.walks import (SelectionMatrix, Walk, count_first_return, count_selections,
                           count_walks_brute, enumerate_walks)

MAX_N = 6


def _fixture_gf(row):
    return IntPolynomial(row["numerator"]), IntPolynomial(row["denominator"])


def test_c01_table1_reproduction(acceptance):
    start = time.perf_counter()
    ok = True
    for row in load_fixtures()["periodic"]:
        origin = State.parse(row["state"], row["m"])
        terms = list(periodic_sequence(origin, len(row["terms"])).terms)
        gf = periodic_gf(origin)
        ok &= terms == row["terms"]
        ok &= (gf.numerator, gf.denominator) == _fixture_gf(row)
    elapsed = time.perf_counter() - start
    acceptance(f"1 Table 1: 7 rows, terms + GF exact ({elapsed:.2f}s < 60s)",
               ok and len(load_fixtures()["periodic"]) == 7 and elapsed < 60)


def test_c02_table2_reproduction(acceptance):
    fixtures = load_fixtures()
    ok = len(fixtures["primitive"]) == 7
    for per, pri in zip(fixtures["periodic"], fixtures["primitive"]):
        assert (per["state"], per["m"]) == (pri["state"], pri["m"])
        origin = State.parse(pri["state"], pri["m"])
        F = periodic_gf(origin)
        P = primitive_transform(F)
        ok &= (P.numerator, P.denominator) == _fixture_gf(pri)
        ok &= expand(P, len(pri["terms"])) == pri["terms"]
    acceptance("2 Table 2: 7 rows, F/(1+F) fraction + terms exact", ok)


def test_c03_transfer_matrix_and_block_fills(acceptance):
    A = build_transfer_matrix(3, 3)
    fills = enumerate_block_fills(PartCounts.from_parts((2, 1), 3), 3)
    grouped = Counter(str(d) for _, d in fills)
    ok = A.rows() == [[2, 2, 0], [1, 4, 1], [1, 3, 4]]
    ok &= [g.parts for g in A.index] == [(3,), (2, 1), (1, 1, 1)]
    ok &= len(fills) == 6 and grouped == {"3": 1, "2,1": 4, "1,1,1": 1}
    acceptance("3 transfer matrix b=3 m=3 and the 6 block fills of (2,1)", ok)


def test_c04_char_poly_and_recurrence(acceptance):
    p = char_poly(build_transfer_matrix(3, 3))
    rec = recurrence_from_charpoly(p)
    regenerated = rec.extend([1, 4, 20], 9)
    ok = p == IntPolynomial((-20, 27, -10, 1))
    ok &= rec.weights == (10, -27, 20)
    ok &= regenerated == [1, 4, 20, 112, 660, 3976, 24180, 147648, 903140]
    acceptance("4 char poly x^3-10x^2+27x-20 regenerates 1,4,20,...,903140", ok)


def test_c05_m2_closed_form(acceptance):
    ok = True
    checked = 0
    for b in range(0, 7):
        idx = partitions_of(b, 2)
        for g, d in itertools.product(idx, repeat=2):
            a, bb = g.counts
            c = d.counts[1] - bb
            assert d.counts[0] == a - 2 * c
            want = {1: a * (a - 1) // 2, 0: (a + 1) * (bb + 1), -1: bb * (bb + 1) // 2}.get(c, 0)
            ok &= coefficient(g, d) == want
            checked += 1
    acceptance(f"5 m=2 piecewise coefficient formula, b<=6 ({checked} pairs)", ok)


def test_c06_triple_oracle(acceptance):
    start = time.perf_counter()
    ok = True
    compared = 0
    for m in range(1, 4):
        for b in range(0, 4):
            states = states_up_to(b, m, 3)
            for n in range(0, MAX_N + 1):
                # H = n + 3 saturates every pair of height <= 3
                diagram = HeightCappedDiagram(b, m, n + 3)
                for src, dst in itertools.product(states, repeat=2):
                    brute = count_walks_brute(src, dst, n)
                    sel = count_selections(SelectionMatrix.for_walk(src, dst, n))
                    cap = count_walks_capped(diagram, src, dst, n)
                    ok &= brute == sel == cap
                    compared += 1
    elapsed = time.perf_counter() - start
    acceptance(f"6 brute = selections = capped, {compared} cases ({elapsed:.1f}s < 300s)",
               ok and elapsed < 300)


def test_c07_bridge_identity(acceptance):
    ok = True
    compared = 0
    for m in range(1, 4):
        for b in range(0, 4):
            states = states_up_to(b, m, 3)
            targets = [s for s in states if list(s.slots) == sorted(s.slots, reverse=True)]
            for src, dst in itertools.product(states, targets):
                gamma = PartCounts.from_parts(dst.partition(), m)
                for n in range(src.height, MAX_N + 1):
                    x = x_values(src, b, m, n - src.height)[gamma]
                    ok &= count_walks_brute(src, dst, n) == x
                    compared += 1
    acceptance(f"7 bridge: brute walks = x_part(beta)(n - h(alpha)), {compared} cases", ok)


def test_c08_primitive_oracle(acceptance):
    ok = True
    compared = 0
    for m in range(1, 4):
        for b in range(0, 4):
            for origin in states_up_to(b, m, 3):
                series = expand(primitive_transform(periodic_gf(origin)), MAX_N)
                for n in range(1, MAX_N + 1):
                    ok &= series[n - 1] == count_first_return(origin, n)
                    compared += 1
    acceptance(f"8 F/(1+F) expansion = first-return brute force, {compared} cases", ok)


def test_c09_worked_example(acceptance):
    a = State((1, 2), 2)
    steps = [((2, 1), (0, 2)), ((2, 0, 1), (1, 3)), ((0, 1, 2), (3, 3)), ((1, 2), (0, 0))]
    walk = Walk(a, tuple((State(s, 2), ThrowSet(t)) for s, t in steps))
    ok = walk in enumerate_walks(a, a, 4, limit=None)
    pattern = pattern_of_walk(walk)
    report = validate(pattern)
    ok &= report.valid and report.balls == 3
    text = format_pattern(pattern)
    ok &= text == "[2,0][3,1][3,3][0,0]" and parse(text) == pattern
    ok &= simulate(parse(text), a) == walk.states
    acceptance("9 worked example walk <1,2> ... <1,2>: enumerated, valid b=3, round-trips", ok)


def test_c10_universal_recurrence(acceptance):
    m = 3
    states = [s for s in states_up_to(3, m, 2)]
    pairs = list(itertools.product(states, repeat=2))
    ok = len(pairs) >= 5
    for src, dst in pairs:
        a = [None] + [count_walks_brute(src, dst, n) for n in range(1, MAX_N + 4)]
        for n in range(src.height + 2, MAX_N + 1):
            ok &= a[n + 3] == 10 * a[n + 2] - 27 * a[n + 1] + 20 * a[n]
    acceptance(f"10 a(n+3)=10a(n+2)-27a(n+1)+20a(n) for {len(pairs)} (alpha,beta) pairs", ok)
