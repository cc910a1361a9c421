"""Step 1: size profiles and the necessary conditions that prune them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

from ..construct import attainable_sizes, build_multiple_of_four, known_nonexistence
from ..core import OrthogonalityGraph, SizeProfile, graph_from_states
from ..errors import BadArguments, Unsupported

__all__ = [
    "ProfileConstraints",
    "SizeTable",
    "PruneResult",
    "feasible_sizes",
    "register_search_result",
    "enumerate_profiles",
    "prune_reverse_combine",
    "prune_search_reduce",
    "guaranteed_cover",
    "waterfill",
]

Qubit = tuple[tuple[int, int], ...]


# ---------------------------------------------------------------------------
# feasible sizes

# (p, s) -> number of classes found by a completed exhaustive search
_COMPUTED: dict[tuple[int, int], int] = {}


def register_search_result(p: int, s: int, classes: int) -> None:
    """Record a completed census so later size tables can use it."""
    _COMPUTED[(p, s)] = classes


class SizeTable(frozenset):
    """Sizes with a known p-qubit UPB, plus provenance and proven non-existence.

    Behaves as the frozenset of known sizes.  ``provenance[s]`` is one of
    ``computed``, ``constructed``, ``paper-claim`` (with a detail suffix);
    ``infeasible[s]`` names the proof that no UPB of size s exists.
    """

    p: int
    provenance: dict[int, str]
    infeasible: dict[int, str]

    def __new__(cls, p: int, provenance: dict[int, str], infeasible: dict[int, str]):
        self = super().__new__(cls, provenance)
        self.p = p
        self.provenance = dict(provenance)
        self.infeasible = dict(infeasible)
        return self

    def proven_infeasible(self, s: int) -> bool:
        return s in self.infeasible

    def source(self, s: int) -> str:
        return self.provenance[s].split(":", 1)[0]

    def witness(self, s: int) -> OrthogonalityGraph | None:
        """An explicit UPB for constructed sizes (multiple-of-four routes and the full basis)."""
        if s not in self or self.source(s) != "constructed":
            return None
        if s == 2**self.p:
            from ..construct import standard_basis

            return graph_from_states(standard_basis(self.p))
        try:
            return build_multiple_of_four(self.p, s)
        except (Unsupported, BadArguments):
            return None


def feasible_sizes(p: int) -> SizeTable:
    if p < 1:
        raise BadArguments(f"p must be >= 1, got {p}")
    if p <= 2:
        top = 2**p
        return SizeTable(
            p,
            {top: "constructed: standard basis"},
            {s: "bootstrap: no nontrivial UPB on at most two qubits" for s in range(1, top)},
        )
    computed = {s: n for (q, s), n in _COMPUTED.items() if q == p}
    cat = attainable_sizes(p, computed)
    provenance: dict[int, str] = {}
    for s, why in cat.attainable.items():
        provenance[s] = why
    for s, n in computed.items():
        if n > 0:
            provenance[s] = f"computed: {n} classes"
    infeasible = {}
    for s in range(1, 2**p + 1):
        if s in provenance:
            continue
        rule = known_nonexistence(p, s)
        if rule:
            infeasible[s] = "rule: " + rule
        elif computed.get(s) == 0:
            infeasible[s] = "computed: exhaustive search found none"
    return SizeTable(p, provenance, infeasible)


# ---------------------------------------------------------------------------
# constraints


@dataclass(frozen=True)
class ProfileConstraints:
    p: int
    s: int
    allow_unmatched_regions: bool = False
    use_lemma_A1: bool = True
    use_lemma_A2: bool = True
    use_odd_pair_rule: bool = False
    table: SizeTable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.p < 1 or self.s < 1:
            raise BadArguments(f"need p >= 1 and s >= 1, got p={self.p}, s={self.s}")

    def size_table(self) -> SizeTable | None:
        if self.p < 2:
            return None
        return self.table if self.table is not None else feasible_sizes(self.p - 1)

    def describe(self) -> dict:
        """The active constraint set, as recorded next to every count."""
        return {
            "p": self.p,
            "s": self.s,
            "sum_per_qubit": True,
            "max_side": self.s - self.p,
            "min_edges": self.s * (self.s - 1) // 2,
            "allow_unmatched_regions": self.allow_unmatched_regions,
            "use_lemma_A1": self.use_lemma_A1,
            "use_lemma_A2": self.use_lemma_A2,
            "use_odd_pair_rule": self.use_odd_pair_rule,
        }


class PruneResult(NamedTuple):
    keep: bool
    reason: str = ""
    detail: tuple = ()

    def __bool__(self) -> bool:
        return self.keep


KEEP = PruneResult(True)


# ---------------------------------------------------------------------------
# Lemma: reverse combine (single-component qubits)


def prune_reverse_combine(pr: SizeProfile, table: SizeTable | None) -> PruneResult:
    """A qubit with one component (a, b) splits the UPB into (p-1)-qubit UPBs of sizes a and b."""
    if pr.p < 2 or table is None:
        return KEEP
    for q, comps in enumerate(pr.qubits):
        if len(comps) != 1:
            continue
        a, b = comps[0]
        if b == 0:
            continue
        for side in (a, b):
            if table.proven_infeasible(side):
                return PruneResult(False, "lemma-A1", (q, side, table.infeasible[side]))
    return KEEP


# ---------------------------------------------------------------------------
# Lemma: guaranteed cover by a product state


def waterfill(sides: Sequence[int], removed: int) -> int:
    """Smallest possible largest side after deleting ``removed`` units adversarially."""
    if removed >= sum(sides):
        return 0
    lo, hi = 0, max(sides)
    while lo < hi:
        mid = (lo + hi) // 2
        if sum(x - mid for x in sides if x > mid) <= removed:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _sides(comps: Qubit) -> tuple[int, ...]:
    return tuple(x for a, b in comps for x in (a, b) if x > 0)


def guaranteed_cover(covered: int, qubits: Sequence[Sequence[int]]) -> int:
    """Vertices a product state can surely be made orthogonal to, given ``covered`` already.

    Each further qubit in turn contributes the worst-case largest region
    among vertices not yet covered.  ``T + waterfill(sides, T)`` is
    nondecreasing in ``T``, so a larger starting cover never lowers the result.
    """
    for sides in qubits:
        covered += waterfill(sides, covered)
    return covered


@lru_cache(maxsize=4096)
def _best_sequence(qubits: tuple[tuple[int, ...], ...], s: int):
    orders = set(itertools.permutations(qubits)) if len(qubits) <= 7 else [
        tuple(sorted(qubits, key=lambda x: -max(x)))
    ]
    for order in sorted(orders):
        first, rest = order[0], order[1:]
        for t1 in sorted(set(first), reverse=True):
            seq = [t1]
            covered = t1
            for sides in rest:
                t = waterfill(sides, covered)
                seq.append(t)
                covered += t
            if covered > s - 1:
                return order, tuple(seq)
    return None


def prune_search_reduce(pr: SizeProfile) -> PruneResult:
    """Prune when some qubit ordering forces a product state orthogonal to all s states."""
    qubits = tuple(_sides(c) for c in pr.qubits)
    hit = _best_sequence(tuple(sorted(qubits)), pr.s)
    if hit is None:
        return KEEP
    order, seq = hit
    return PruneResult(False, "lemma-A2", (order, seq))


def _odd_pair_rule(pr: SizeProfile) -> PruneResult:
    if pr.s % 2 == 0:
        return KEEP
    for q, comps in enumerate(pr.qubits):
        if all(a == 1 for a, _ in comps):  # no region of size >= 2
            return PruneResult(False, "odd-pair", (q,))
    return KEEP


# ---------------------------------------------------------------------------
# enumeration


def _qubit_types(s: int, max_side: int, unmatched: bool) -> list[Qubit]:
    """Multisets of components (a, b), a >= b, summing to s, listed in descending order."""
    pairs = [(a, b) for a in range(1, max_side + 1) for b in range(0 if unmatched else 1, a + 1)]
    pairs.sort(reverse=True)
    out: list[Qubit] = []

    def rec(start: int, left: int, acc: list[tuple[int, int]]) -> None:
        if left == 0:
            out.append(tuple(acc))
            return
        for k in range(start, len(pairs)):
            a, b = pairs[k]
            if a + b <= left:
                acc.append(pairs[k])
                rec(k, left - a - b, acc)
                acc.pop()

    rec(0, s, [])
    return out


def _candidates(c: ProfileConstraints) -> Iterator[SizeProfile]:
    p, s = c.p, c.s
    max_side = s - p
    if max_side < 1:
        return
    types = _qubit_types(s, max_side, c.allow_unmatched_regions)
    weight = [sum(a * b for a, b in t) for t in types]
    order = sorted(range(len(types)), key=lambda k: (-weight[k], types[k]), reverse=False)
    types = [types[k] for k in order]
    weight = [weight[k] for k in order]
    need = s * (s - 1) // 2
    chosen: list[int] = []

    def rec(start: int, left: int, edges: int) -> Iterator[SizeProfile]:
        if left == 0:
            if edges >= need:
                yield SizeProfile(p, s, tuple(types[k] for k in chosen), c.allow_unmatched_regions).normalized()
            return
        for k in range(start, len(types)):
            if edges + left * weight[k] < need:
                break
            chosen.append(k)
            yield from rec(k, left - 1, edges + weight[k])
            chosen.pop()

    yield from rec(0, p, 0)


def classify_profile(pr: SizeProfile, c: ProfileConstraints, table: SizeTable | None = None) -> PruneResult:
    """Apply the enabled prunes in a fixed order; the first that fires wins."""
    if c.use_lemma_A1:
        r = prune_reverse_combine(pr, table if table is not None else c.size_table())
        if not r:
            return r
    if c.use_lemma_A2:
        r = prune_search_reduce(pr)
        if not r:
            return r
    if c.use_odd_pair_rule:
        r = _odd_pair_rule(pr)
        if not r:
            return r
    return KEEP


def enumerate_profiles(c: ProfileConstraints, stats: dict | None = None) -> list[SizeProfile]:
    """Profiles passing the basic conditions and the enabled prunes, sorted.

    If ``stats`` is given it receives ``candidates`` and a per-rule count
    of pruned profiles.
    """
    table = c.size_table() if c.use_lemma_A1 else None
    kept = []
    pruned: dict[str, int] = {}
    total = 0
    for pr in _candidates(c):
        total += 1
        r = classify_profile(pr, c, table)
        if r:
            kept.append(pr)
        else:
            pruned[r.reason] = pruned.get(r.reason, 0) + 1
    kept.sort()
    if stats is not None:
        stats["candidates"] = total
        stats["pruned"] = pruned
    return kept
