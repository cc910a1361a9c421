"""Independent oracles and generators shared by the test modules.

The oracles are deliberately naive: they enumerate everything and share no
code with the implementations they check.
"""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from upb.core import OrthogonalityGraph, QubitFactorization
from upb.notation import encode_graph


def fig2_graph() -> OrthogonalityGraph:
    """Seven 3-qubit product states that are not mutually orthogonal (vertices v1..v7 -> 0..6)."""
    return OrthogonalityGraph(
        3,
        7,
        (
            QubitFactorization.from_components([((0,), (1, 6)), ((2,), (4,)), ((3,), (5,))]),
            QubitFactorization.from_components([((0,), (2, 3, 4, 5)), ((1,), (6,))]),
            QubitFactorization.from_components([((0, 1, 6), (3, 4)), ((2,), (5,))]),
        ),
    )


def naive_cover_exists(g: OrthogonalityGraph) -> bool:
    """Try every choice of (no region | one region) on every qubit."""
    everyone = set(range(g.s))
    options = [[None] + list(qf.regions) for qf in g.qubits]
    for pick in itertools.product(*options):
        covered = set()
        for region in pick:
            if region is not None:
                covered.update(region)
        if covered == everyone:
            return True
    return False


def naive_orthogonal_pairs(g: OrthogonalityGraph) -> set[tuple[int, int]]:
    out = set()
    for qf in g.qubits:
        for i, j in qf.matching:
            for u in qf.regions[i]:
                for v in qf.regions[j]:
                    out.add((min(u, v), max(u, v)))
    return out


def brute_relabel(g: OrthogonalityGraph, perm, order) -> OrthogonalityGraph:
    qubits = []
    for q in order:
        qf = g.qubits[q]
        qubits.append(QubitFactorization(tuple(tuple(perm[v] for v in r) for r in qf.regions), qf.matching))
    return OrthogonalityGraph(g.p, g.s, tuple(qubits))


def naive_class_key(g: OrthogonalityGraph) -> bytes:
    """Minimum encoding over all s! * p! relabelings."""
    return min(
        encode_graph(brute_relabel(g, perm, order))
        for perm in itertools.permutations(range(g.s))
        for order in itertools.permutations(range(g.p))
    )


def random_factorization(s: int, rng: random.Random, unmatched: bool = True) -> QubitFactorization:
    labels = [rng.randrange(s) for _ in range(s)]
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(lab, []).append(v)
    regions = list(groups.values())
    rng.shuffle(regions)
    idx = list(range(len(regions)))
    rng.shuffle(idx)
    matching = []
    while len(idx) >= 2 and (not unmatched or rng.random() < 0.8):
        matching.append((idx.pop(), idx.pop()))
    return QubitFactorization(tuple(tuple(r) for r in regions), tuple(matching))


def random_graph(p: int, s: int, rng: random.Random, unmatched: bool = True) -> OrthogonalityGraph:
    return OrthogonalityGraph(p, s, tuple(random_factorization(s, rng, unmatched) for _ in range(p)))


@st.composite
def graphs(draw, max_p: int = 4, max_s: int = 8, min_s: int = 1):
    p = draw(st.integers(1, max_p))
    s = draw(st.integers(min_s, max_s))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_graph(p, s, random.Random(seed))


@st.composite
def relabelings(draw, g: OrthogonalityGraph):
    perm = draw(st.permutations(range(g.s)))
    order = draw(st.permutations(range(g.p)))
    return list(perm), list(order)
