import itertools
from collections import Counter

import pytest

from conftest import states_up_to
from mjuggle.errors import ParameterError
from mjuggle.states import State
from mjuggle.transfer import (PartCounts, build_transfer_matrix, coefficient,
                              count_walks_transfer, enumerate_block_fills, fill_counts,
                              partitions_of, x_values, x_vectors)
from mjuggle.walks import SelectionMatrix, count_selections, count_walks_brute


def P(parts, m):
    return PartCounts.from_parts(parts, m)


def _brute_partitions(b, m):
    found = set()
    for k in range(b + 1):
        for combo in itertools.combinations_with_replacement(range(1, m + 1), k):
            if sum(combo) == b:
                found.add(tuple(sorted(combo, reverse=True)))
    return found


def _brute_fills(gamma):
    # oracle: every multiset of m rows from (m, parts...), with row capacities checked
    m = gamma.m
    caps = (m,) + gamma.parts
    out = Counter()
    for combo in itertools.combinations_with_replacement(range(len(caps)), m):
        use = Counter(combo)
        if all(use[r] <= caps[r] for r in use):
            left = [caps[r] - use[r] for r in range(len(caps))]
            out[P(sorted((c for c in left if c), reverse=True), m)] += 1
    return out


def test_partitions_examples():
    assert [g.parts for g in partitions_of(3, 3)] == [(3,), (2, 1), (1, 1, 1)]
    assert [g.parts for g in partitions_of(0, 2)] == [()]
    assert [g.parts for g in partitions_of(4, 2)] == [(2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_partitions_match_brute_force():
    for b in range(0, 9):
        for m in range(1, 6):
            got = [g.parts for g in partitions_of(b, m)]
            assert set(got) == _brute_partitions(b, m)
            assert len(got) == len(set(got))
            assert got == sorted(got, reverse=True)
            assert all(g.total == b for g in partitions_of(b, m))


def test_partcounts_roundtrip():
    g = P((2, 1, 1), 3)
    assert g.counts == (2, 1, 0)
    assert str(g) == "2,1,1"
    assert PartCounts.parse("2,1,1", 3) == g
    assert PartCounts.parse("", 2).total == 0
    with pytest.raises(ParameterError):
        PartCounts.parse("1,2", 3)
    with pytest.raises(ParameterError):
        P((4,), 3)


def test_coefficient_table_b3_m3():
    idx = partitions_of(3, 3)
    got = [[coefficient(g, d) for d in idx] for g in idx]
    assert got == [[2, 2, 0], [1, 4, 1], [1, 3, 4]]


def test_coefficient_empty_and_mismatch():
    e = P((), 2)
    assert coefficient(e, e) == 1
    with pytest.raises(ParameterError):
        coefficient(P((2,), 2), P((1,), 2))
    with pytest.raises(ParameterError):
        coefficient(P((1,), 2), P((1,), 3))


def _m2_closed_form(gamma, delta):
    a, bb = gamma.counts
    c = delta.counts[1] - bb
    if c == 1:
        return a * (a - 1) // 2
    if c == 0:
        return (a + 1) * (bb + 1)
    if c == -1:
        return bb * (bb + 1) // 2
    return 0


def test_coefficient_m2_closed_form():
    for b in range(0, 7):
        idx = partitions_of(b, 2)
        for g, d in itertools.product(idx, repeat=2):
            assert coefficient(g, d) == _m2_closed_form(g, d)


def test_build_matrix_examples():
    assert build_transfer_matrix(3, 3).rows() == [[2, 2, 0], [1, 4, 1], [1, 3, 4]]
    assert build_transfer_matrix(2, 2).rows() == [[2, 1], [1, 3]]
    assert build_transfer_matrix(0, 4).rows() == [[1]]
    # m=2 closed form independently gives the b=2 matrix
    idx = partitions_of(2, 2)
    assert [[_m2_closed_form(g, d) for d in idx] for g in idx] == [[2, 1], [1, 3]]


def test_block_fills_examples():
    fills = enumerate_block_fills(P((2, 1), 3), 3)
    assert len(fills) == 6
    assert Counter(d for _, d in fills) == {P((3,), 3): 1, P((2, 1), 3): 4, P((1, 1, 1), 3): 1}
    (empty,) = enumerate_block_fills(P((), 2))
    assert empty[0].heights == (0, 0) and empty[1] == P((), 2)
    assert fill_counts(P((1, 1), 2)) == {P((2,), 2): 1, P((1, 1), 2): 3}


def test_block_fill_labels_are_canonical():
    for _, (throws, _) in enumerate(enumerate_block_fills(P((2, 1), 3))):
        assert list(throws.heights) == sorted(throws.heights, reverse=True)
        assert throws.m == 3


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_formula_matches_enumeration(m):
    for b in range(0, 5):
        idx = partitions_of(b, m)
        for g in idx:
            grouped = fill_counts(g)
            assert grouped == _brute_fills(g)
            for d in idx:
                assert coefficient(g, d) == grouped.get(d, 0)
            assert sum(coefficient(g, d) for d in idx) == len(enumerate_block_fills(g))


def test_matrix_not_assumed_symmetric():
    A = build_transfer_matrix(3, 3).rows()
    assert A != [list(r) for r in zip(*A)]


def test_x_values_examples():
    top = State((3,), 3)
    base = x_values(top, 3, 3, 0)
    assert set(base.values()) == {1}
    one = x_values(top, 3, 3, 1)
    assert [one[g] for g in partitions_of(3, 3)] == [4, 6, 8]
    seq = [x_values(top, 3, 3, k)[P((3,), 3)] for k in range(5)]
    assert seq == [1, 4, 20, 112, 660]


def test_x_values_bad_state():
    with pytest.raises(ParameterError):
        x_values(State((2,), 3), 3, 3, 0)


def test_all_ones_shortcut_matches_selection_counter():
    for b, m in [(2, 2), (3, 3), (2, 3), (4, 4)]:
        A = build_transfer_matrix(b, m)
        for g in A.index:
            mat = SelectionMatrix(1, m, (m - b,) + g.parts)
            assert count_selections(mat) == 1


def test_x_vectors_follow_matrix():
    A = build_transfer_matrix(3, 2)
    xs = x_vectors(State((1, 1, 1), 2), 4)
    for prev, nxt in zip(xs, xs[1:]):
        assert A.apply(prev) == nxt


@pytest.mark.parametrize("m", [1, 2, 3])
def test_bridge_identity_any_terminal_order(m):
    # beta is read through its slot multiset, so non-decreasing terminals must work too
    for b in range(0, 4):
        states = states_up_to(b, m, 3)
        for src, dst in itertools.product(states, repeat=2):
            for n in range(src.height, 7):
                assert count_walks_transfer(src, dst, n) == count_walks_brute(src, dst, n)


def test_transfer_needs_long_enough_walk():
    with pytest.raises(ParameterError):
        count_walks_transfer(State((1, 2), 2), State((1, 2), 2), 1)
