from __future__ import annotations

import itertools
import random
from collections import defaultdict

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graphs, naive_class_key, random_graph
from upb.canon import CatalogEntry, are_equivalent, canonical_graph, canonical_key, dedupe, representative
from upb.construct import combine, shifts
from upb.core import OrthogonalityGraph, QubitFactorization, graph_from_states, profile_of, relabel
from upb.corpus import load_fixture
from upb.errors import InvalidGraph, MixedDimensions
from upb.notation import decode_graph


def shifts_graph() -> OrthogonalityGraph:
    return graph_from_states(shifts())


def random_relabel(g: OrthogonalityGraph, rng: random.Random) -> OrthogonalityGraph:
    perm = list(range(g.s))
    order = list(range(g.p))
    rng.shuffle(perm)
    rng.shuffle(order)
    return relabel(g, perm, order)


def test_shifts_cyclic_qubits():
    g = shifts_graph()
    assert canonical_key(g) == canonical_key(relabel(g, range(4), [1, 2, 0]))
    assert are_equivalent(g, relabel(g, [3, 1, 0, 2]))


def test_upb1_upb2_inequivalent():
    assert canonical_key(load_fixture("p4s8_upb1")) != canonical_key(load_fixture("p4s8_upb2"))
    assert not are_equivalent(load_fixture("p4s8_upb1"), load_fixture("p4s8_upb2"))


def test_table1_nine_state_distinct():
    keys = {canonical_key(load_fixture(f"p4s9_t1_{k:02d}")) for k in range(1, 12)}
    assert len(keys) == 11


def test_complete_bases_distinct():
    keys = {canonical_key(load_fixture(f"p3s8_B{k:02d}")) for k in range(1, 18)}
    assert len(keys) == 17


def test_size_mismatch_not_equivalent():
    assert not are_equivalent(load_fixture("p4s6"), load_fixture("p4s7"))


def test_sharing_patterns_inequivalent():
    g = shifts_graph()
    plain = combine(g, g)
    # identify one region of the second copy with one of the first on qubit 0
    shared = combine(g, g, share={0: [(0, 0)]})
    assert (plain.p, plain.s) == (shared.p, shared.s) == (4, 8)
    assert not are_equivalent(plain, shared)


def test_key_decodes_to_equivalent_graph():
    for name in ("shifts", "p4s7", "p4s9_t1_05", "p5s8"):
        g = load_fixture(name)
        key = canonical_key(g)
        h = representative(key)
        assert h == decode_graph(key) == canonical_graph(g)
        assert are_equivalent(g, h)
        assert canonical_key(h) == key


def test_invalid_graph():
    with pytest.raises(InvalidGraph):
        canonical_key(OrthogonalityGraph(1, 2, (QubitFactorization(((0,),), ()),)))


def test_dedupe_multiplicity():
    rng = random.Random(0)
    g = shifts_graph()
    stream = [random_relabel(g, rng) for _ in range(5)]
    out = dedupe(stream)
    assert len(out) == 1 and out[0].multiplicity == 5
    assert out[0].graph is stream[0]


def test_dedupe_empty_and_sorted():
    assert dedupe([]) == []
    gs = [load_fixture(f"p3s8_B{k:02d}") for k in range(1, 18)]
    out = dedupe(gs + gs[:3])
    assert [e.key for e in out] == sorted(e.key for e in out)
    assert sum(e.multiplicity for e in out) == 20


def test_dedupe_mixed_dimensions():
    with pytest.raises(MixedDimensions):
        dedupe([shifts_graph(), load_fixture("p4s6")])


def test_catalog_entry_json():
    g = shifts_graph()
    e = CatalogEntry(canonical_key(g), g, 3, {"source": "x"})
    assert CatalogEntry.from_json(e.to_json()) == e


def test_speed_budget():
    import time

    g = load_fixture("p4s12_a")
    t = time.perf_counter()
    canonical_key(random_relabel(g, random.Random(1)))
    assert time.perf_counter() - t < 0.5


@settings(max_examples=60)
@given(graphs(max_p=4, max_s=9), st.integers(0, 2**32 - 1))
def test_key_invariant_under_relabeling(g, seed):
    h = random_relabel(g, random.Random(seed))
    assert canonical_key(h) == canonical_key(g)
    assert profile_of(h).normalized() == profile_of(g).normalized()


@settings(max_examples=60)
@given(graphs(max_p=3, max_s=5))
def test_equivalence_matches_naive_oracle(g):
    rng = random.Random(g.s)
    h = random_graph(g.p, g.s, rng)
    assert (canonical_key(g) == canonical_key(h)) == (naive_class_key(g) == naive_class_key(h))


def test_dedupe_matches_naive_oracle_small():
    rng = random.Random(11)
    for p, s in [(1, 3), (2, 3), (2, 4), (3, 3)]:
        stream = [random_graph(p, s, rng) for _ in range(60)]
        ours = defaultdict(set)
        theirs = defaultdict(set)
        for i, g in enumerate(stream):
            ours[canonical_key(g)].add(i)
            theirs[naive_class_key(g)].add(i)
        assert sorted(map(sorted, ours.values())) == sorted(map(sorted, theirs.values()))
        assert len(dedupe(stream)) == len(theirs)
