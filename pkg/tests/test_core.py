from __future__ import annotations

import random

import pytest
from hypothesis import given

from helpers import fig2_graph, graphs, naive_orthogonal_pairs, random_graph
from upb.core import (
    OrthogonalityGraph,
    QubitFactorization,
    SizeProfile,
    Symbol,
    SymbolicProductBasis,
    graph_from_states,
    profile_of,
    relabel,
    require_valid,
    validate_graph,
)
from upb.errors import InvalidGraph, RaggedBasis
from upb.notation import parse_basis


def test_fig2_profile():
    pr = profile_of(fig2_graph())
    assert pr.qubits == (((2, 1), (1, 1), (1, 1)), ((4, 1), (1, 1)), ((3, 2), (1, 1)))
    assert pr.edges() == 4 + 5 + 7


def test_regions_normalized():
    qf = QubitFactorization(((5, 3), (0,), (1, 2, 4)), ((1, 0),))
    assert qf.regions == ((0,), (3, 5), (1, 2, 4))
    assert qf.matching == ((0, 1),)
    assert qf.components() == [((0,), (3, 5)), ((1, 2, 4), ())]


def test_adjacency_from_regions():
    g = fig2_graph()
    assert g.adjacent(1, 0, 3) and g.adjacent(1, 3, 0)
    assert not g.adjacent(1, 2, 3)  # same region
    assert not g.adjacent(0, 2, 3)  # different unmatched components


@pytest.mark.parametrize(
    "qf, rule",
    [
        (QubitFactorization(((0, 1), (1, 2)), ()), "overlapping-regions"),
        (QubitFactorization(((0, 1),), ()), "uncovered-vertices"),
        (QubitFactorization(((0, 1, 2, 5),), ()), "vertex-out-of-range"),
        (QubitFactorization(((0,), (1,), (2,)), ((0, 1), (1, 2))), "region-matched-twice"),
        (QubitFactorization(((0,), (1, 2)), ((0, 0),)), "self-paired-region"),
        (QubitFactorization(((0,), (1, 2)), ((0, 7),)), "region-index-out-of-range"),
    ],
)
def test_validation_rules(qf, rule):
    g = OrthogonalityGraph(1, 3, (qf,))
    rules = {v.rule for v in validate_graph(g).violations}
    assert rule in rules
    with pytest.raises(InvalidGraph):
        require_valid(g)


def test_validation_collects_all():
    g = OrthogonalityGraph(
        2, 3, (QubitFactorization(((0, 1), (1,)), ()), QubitFactorization(((0,),), ((0, 0),)))
    )
    assert len(validate_graph(g).violations) >= 3


def test_graph_from_states_letters_scoped_per_qubit():
    b = parse_basis("ab,AB")
    g = graph_from_states(b)
    assert g.adjacent(0, 0, 1) and g.adjacent(1, 0, 1)


def test_ragged_basis():
    with pytest.raises(RaggedBasis):
        SymbolicProductBasis(((Symbol("0"),), (Symbol("0"), Symbol("0"))))


def test_profile_json_roundtrip():
    pr = profile_of(fig2_graph())
    assert SizeProfile.from_json(pr.to_json()) == pr
    assert pr.normalized() == SizeProfile(3, 7, tuple(reversed(pr.qubits))).normalized()


@given(graphs())
def test_orth_masks_match_definition(g):
    pairs = naive_orthogonal_pairs(g)
    for u in range(g.s):
        for v in range(g.s):
            expect = (min(u, v), max(u, v)) in pairs
            assert bool((g.orth_masks[u] >> v) & 1) == expect


@given(graphs())
def test_edge_count_matches_definition(g):
    # an edge is counted once per qubit it appears on
    total = 0
    for q in range(g.p):
        total += sum(g.adjacent(q, u, v) for u in range(g.s) for v in range(u + 1, g.s))
    assert g.edge_count() == total


@given(graphs())
def test_random_graphs_valid(g):
    assert validate_graph(g).ok


def test_relabel_preserves_adjacency():
    rng = random.Random(3)
    for _ in range(50):
        g = random_graph(3, 6, rng)
        perm = list(range(6))
        rng.shuffle(perm)
        order = [2, 0, 1]
        h = relabel(g, perm, order)
        for i, q in enumerate(order):
            for u in range(6):
                for v in range(6):
                    if u != v:
                        assert h.adjacent(i, perm[u], perm[v]) == g.adjacent(q, u, v)
