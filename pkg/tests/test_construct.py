from __future__ import annotations

import itertools

import pytest

from upb.canon import are_equivalent
from upb.checker import VerdictKind, classify, is_upb
from upb.construct import (
    attainable_sizes,
    bound_comparison,
    build_multiple_of_four,
    combine,
    known_nonexistence,
    min_size,
    one_factorization,
    ranges,
    shifts,
    split_qubit,
    standard_basis,
)
from upb.core import graph_from_states, profile_of
from upb.corpus import load_basis, load_fixture
from upb.errors import BadArguments, DimensionMismatch, NotAUPB, NotSplittable, OddOrder, Unsupported
from upb.notation import format_basis, parse_basis


@pytest.mark.parametrize("p, s", [(1, 2), (2, 4), (3, 4), (4, 6), (5, 6), (6, 8), (7, 8), (8, 11), (10, 12), (12, 16)])
def test_min_size(p, s):
    assert min_size(p) == s


def test_min_size_rejects_zero():
    with pytest.raises(BadArguments):
        min_size(0)


def test_shifts():
    g = graph_from_states(shifts())
    assert all(qf.components() and all(len(a) == len(b) == 1 for a, b in qf.components()) for qf in g.qubits)
    assert profile_of(g).qubits == (((1, 1), (1, 1)),) * 3
    assert is_upb(g)


def test_standard_basis():
    assert format_basis(standard_basis(1)) == "0,1"
    assert standard_basis(2).s == 4 and is_upb(graph_from_states(standard_basis(2)))
    assert are_equivalent(graph_from_states(standard_basis(3)), load_fixture("p3s8_B01"))


def test_combine_shifts_shifts():
    b = combine(shifts(), shifts())
    assert (b.p, b.s) == (4, 8) and is_upb(graph_from_states(b))


def test_combine_shifts_b1():
    b = combine(shifts(), load_basis("p3s8_B01"))
    assert (b.p, b.s) == (4, 12) and is_upb(graph_from_states(b))


def test_combine_rejects_non_upb():
    with pytest.raises(NotAUPB):
        combine(parse_basis("000,1aA,A1a"), shifts())


def test_combine_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        combine(shifts(), standard_basis(2))


@pytest.mark.parametrize("n, rounds", [(2, 1), (4, 3), (8, 7), (10, 9)])
def test_one_factorization(n, rounds):
    f = one_factorization(n)
    assert len(f) == rounds
    edges = [e for m in f for e in m]
    assert sorted(edges) == list(itertools.combinations(range(n), 2))
    for m in f:
        assert sorted(v for e in m for v in e) == list(range(n))


def test_one_factorization_odd():
    with pytest.raises(OddOrder):
        one_factorization(5)


def test_split_qubit():
    g = build_multiple_of_four(4, 8)
    h = split_qubit(g, 1)
    assert (h.p, h.s) == (5, 8) and is_upb(h)
    h2 = split_qubit(h, 3)
    assert (h2.p, h2.s) == (6, 8) and is_upb(h2)
    with pytest.raises(NotSplittable):
        split_qubit(g, 0)


def test_multiple_of_four_examples():
    g = build_multiple_of_four(4, 8)
    assert str(profile_of(g)) == "K1,1 u K1,1 u K1,1 u K1,1 / K2,2 u K2,2 / K2,2 u K2,2 / K2,2 u K2,2"
    assert are_equivalent(build_multiple_of_four(5, 8), load_fixture("p5s8"))
    with pytest.raises(Unsupported):
        build_multiple_of_four(9, 20)
    assert is_upb(build_multiple_of_four(5, 12))
    with pytest.raises(BadArguments):
        build_multiple_of_four(4, 10)


def test_known_nonexistence():
    assert known_nonexistence(4, 13) == "NearMaximal"
    assert known_nonexistence(7, 9) == "OddPPlus2"
    assert known_nonexistence(5, 11) is None
    assert known_nonexistence(4, 5) == "BelowMinimum"
    assert known_nonexistence(4, 4) == "TooSmallTrivial"


def test_attainable_sizes():
    c7 = attainable_sizes(7)
    assert set(range(16, 19)) | set(range(20, 123)) | {124, 128} <= set(c7.attainable)
    assert set(range(28, 251)) <= set(attainable_sizes(8).attainable)
    c4 = attainable_sizes(4)
    assert set(c4.attainable) == {6, 7, 8, 9, 10, 12, 16}
    assert {11, 13, 14, 15} <= set(c4.impossible)
    assert not c4.unknown
    assert c4.status(9) == "exists" and c4.status(11) == "impossible"
    assert attainable_sizes(5).status(11) == "unknown"


def test_attainable_computed_overrides():
    c = attainable_sizes(5, computed={7: 0})
    assert c.impossible[7].startswith("rule") or c.impossible[7].startswith("computed")


def test_gaps():
    c = attainable_sizes(7)
    assert c.proven_gap <= c.possible_gap


def test_bound_comparison():
    got = [bound_comparison(p) for p in range(7, 13)]
    assert got == [(20, 20), (28, 29), (39, 39), (49, 50), (61, 62), (73, 75)]
    for p in range(7, 201):
        lo, closed = bound_comparison(p)
        assert lo <= closed <= lo + 2
    with pytest.raises(BadArguments):
        bound_comparison(6)


def test_ranges():
    assert ranges([1, 2, 3, 5, 7, 8]) == ["1-3", "5", "7-8"]
    assert ranges([]) == []
