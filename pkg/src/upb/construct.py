"""Explicit UPB constructions and the size theory of qubit UPBs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping

from .checker import classify
from .core import (
    OrthogonalityGraph,
    QubitFactorization,
    Symbol,
    SymbolicProductBasis,
    graph_from_states,
    require_valid,
)
from .errors import BadArguments, DimensionMismatch, NotAUPB, NotSplittable, OddOrder, Unsupported
from .notation import parse_basis

__all__ = [
    "min_size",
    "shifts",
    "standard_basis",
    "combine",
    "one_factorization",
    "split_qubit",
    "build_multiple_of_four",
    "known_nonexistence",
    "paper_claims",
    "SizeCatalog",
    "attainable_sizes",
    "bound_comparison",
]

SHIFTS_KET = "000,1aA,A1a,aA1"
# minimal 4-qubit UPB, used for the (5, 12) route
SIX_STATE_KET = "0000,0aa1,10ba,1aBb,a1AB,AA1A"


def min_size(p: int) -> int:
    """Smallest size of a p-qubit UPB."""
    if p < 1:
        raise BadArguments(f"p must be >= 1, got {p}")
    if p % 2 == 1:
        return p + 1
    if p == 4 or p % 4 == 2:
        return p + 2
    if p == 8:
        return p + 3
    return p + 4


def shifts() -> SymbolicProductBasis:
    return parse_basis(SHIFTS_KET)


def standard_basis(p: int) -> SymbolicProductBasis:
    if p < 1:
        raise BadArguments(f"p must be >= 1, got {p}")
    states = []
    for x in range(2**p):
        states.append(tuple(Symbol("0", bool((x >> (p - 1 - q)) & 1)) for q in range(p)))
    return SymbolicProductBasis(tuple(states))


def _as_graph(u) -> OrthogonalityGraph:
    return u if isinstance(u, OrthogonalityGraph) else graph_from_states(u)


def _verified(g: OrthogonalityGraph, what: str) -> OrthogonalityGraph:
    verdict = classify(g)
    if not verdict.is_upb:
        raise AssertionError(f"{what} produced a non-UPB ({verdict.kind.value})")
    return g


def combine(u1, u2, share: Mapping[int, Iterable[tuple[int, int]]] | None = None):
    """Stack two p-qubit UPBs on a new last qubit: ``u1 (x) |0>`` and ``u2 (x) |1>``.

    Symbolic bases are concatenated literally, so equal letters on a qubit
    denote the same basis in both halves.  For graphs the halves share no
    local vectors unless ``share`` maps a qubit to ``(u2_region, u1_region)``
    identifications; identifying two regions also identifies their partners.
    """
    g1, g2 = _as_graph(u1), _as_graph(u2)
    if g1.p != g2.p:
        raise DimensionMismatch(f"cannot combine {g1.p}-qubit and {g2.p}-qubit sets")
    for which, g in (("first", g1), ("second", g2)):
        verdict = classify(g)
        if not verdict.is_upb:
            raise NotAUPB(which, verdict)

    if isinstance(u1, SymbolicProductBasis) and isinstance(u2, SymbolicProductBasis):
        if share:
            raise BadArguments("share maps apply to graphs; symbolic bases share letters by name")
        states = [st + (Symbol("0", False),) for st in u1.states]
        states += [st + (Symbol("0", True),) for st in u2.states]
        out = SymbolicProductBasis(tuple(states))
        _verified(graph_from_states(out), "combine")
        return out

    s1 = g1.s
    share = share or {}
    qubits = []
    for q in range(g1.p):
        qubits.append(_merge_qubit(g1.qubits[q], g2.qubits[q], s1, list(share.get(q, ()))))
    qubits.append(QubitFactorization((tuple(range(s1)), tuple(range(s1, s1 + g2.s))), ((0, 1),)))
    return _verified(OrthogonalityGraph(g1.p + 1, s1 + g2.s, tuple(qubits)), "combine")


def _merge_qubit(q1: QubitFactorization, q2: QubitFactorization, shift: int, ident) -> QubitFactorization:
    n1 = len(q1.regions)
    regions = list(q1.regions) + [tuple(v + shift for v in r) for r in q2.regions]
    partner = list(q1.partner) + [j + n1 if j >= 0 else -1 for j in q2.partner]
    parent = list(range(len(regions)))

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        a, b = find(a), find(b)
        if a != b:
            parent[max(a, b)] = min(a, b)

    for r2, r1 in ident:
        if not (0 <= r1 < n1 and 0 <= r2 < len(q2.regions)):
            raise BadArguments(f"bad region identification {(r2, r1)}")
        union(r2 + n1, r1)
        p1, p2 = partner[r1], partner[r2 + n1]
        if p1 >= 0 and p2 >= 0:
            union(p1, p2)
    groups: dict[int, list[int]] = {}
    for k in range(len(regions)):
        groups.setdefault(find(k), []).append(k)
    matched: dict[int, int] = {}
    for root, members in groups.items():
        targets = {find(partner[k]) for k in members if partner[k] >= 0}
        if len(targets) > 1 or root in targets:
            raise BadArguments("region identification merges a region with two different complements")
        if targets:
            matched[root] = targets.pop()
    roots = sorted(groups)
    index = {r: k for k, r in enumerate(roots)}
    new_regions = tuple(tuple(v for k in groups[r] for v in regions[k]) for r in roots)
    pairs = {tuple(sorted((index[a], index[b]))) for a, b in matched.items()}
    return QubitFactorization(new_regions, tuple(sorted(pairs)))


def one_factorization(n: int) -> list[list[tuple[int, int]]]:
    """Circle-method 1-factorization of K_n: n-1 perfect matchings covering every edge once."""
    if n < 2 or n % 2:
        raise OddOrder(f"K_{n} has no 1-factorization (need even n >= 2)")
    m = n - 1
    rounds = []
    for r in range(m):
        edges = [tuple(sorted((r, n - 1)))]
        for i in range(1, n // 2):
            a, b = (r + i) % m, (r - i) % m
            edges.append((min(a, b), max(a, b)))
        rounds.append(sorted(edges))
    return rounds


def split_qubit(g: OrthogonalityGraph, q: int) -> OrthogonalityGraph:
    """Replace qubit ``q`` (all components K_{2,2}) by two qubits.

    Each block ``{x1, x2 | y1, y2}`` = ``{a, a | A, A}`` becomes the two-qubit
    states ``aa, bb, AB, BA`` (fresh letters per block), so that each formerly
    orthogonal pair is orthogonal on exactly one of the new qubits.
    """
    require_valid(g)
    if not 0 <= q < g.p:
        raise BadArguments(f"qubit {q} out of range")
    qf = g.qubits[q]
    for comp in qf.components():
        if len(comp[0]) != 2 or len(comp[1]) != 2:
            raise NotSplittable(q, comp)
    first, second = [], []
    for (x1, x2), (y1, y2) in qf.components():
        first += [((x1,), (y1,)), ((x2,), (y2,))]
        second += [((x1,), (y2,)), ((x2,), (y1,))]
    new = (QubitFactorization.from_components(first), QubitFactorization.from_components(second))
    qubits = g.qubits[:q] + new + g.qubits[q + 1 :]
    return OrthogonalityGraph(g.p + 1, g.s, qubits)


def _pairs_graph(s: int) -> OrthogonalityGraph:
    """The s = 2p construction: s/2 orthogonal pairs, pair-blocks wired by a 1-factorization."""
    k2 = s // 2
    pairs = [(2 * i, 2 * i + 1) for i in range(k2)]
    qubits = [QubitFactorization.from_components([((a,), (b,)) for a, b in pairs])]
    for matching in one_factorization(k2):
        qubits.append(QubitFactorization.from_components([(pairs[i], pairs[j]) for i, j in matching]))
    return OrthogonalityGraph(len(qubits), s, tuple(qubits))


@lru_cache(maxsize=None)
def _route(p: int, s: int):
    if s % 4 or s < 4 or s < p + 1 or s > 2**p:
        return None
    if s == 2**p:
        return ("standard",)
    if s <= 2 * p:
        return ("split",)
    if p % 4 == 1 and s == 2 * p + 2:
        return ("six-six",) if p == 5 else None
    for s1 in range(min(2 ** (p - 1), s - 4), (s - 1) // 2, -4):
        s2 = s - s1
        if _route(p - 1, s1) and _route(p - 1, s2):
            return ("combine", s1, s2)
    return None


def build_multiple_of_four(p: int, s: int) -> OrthogonalityGraph:
    if p < 1 or s % 4 or s < 4 or s < p + 1 or s > 2**p:
        raise BadArguments(f"need 4 | s and p+1 <= s <= 2^p, got p={p}, s={s}")
    route = _route(p, s)
    if route is None:
        raise Unsupported(p, s)
    kind = route[0]
    if kind == "standard":
        g = graph_from_states(standard_basis(p))
    elif kind == "split":
        g = _pairs_graph(s)
        for q in range(1, 1 + p - g.p):
            # qubits 1..: K_{2,2} blocks; each split pushes later originals one slot right
            g = split_qubit(g, 2 * q - 1)
    elif kind == "six-six":
        six = graph_from_states(parse_basis(SIX_STATE_KET))
        g = combine(six, six)
    else:
        _, s1, s2 = route
        g = combine(build_multiple_of_four(p - 1, s1), build_multiple_of_four(p - 1, s2))
    return _verified(g, f"build_multiple_of_four({p}, {s})")


# ---------------------------------------------------------------------------
# size theory

NEAR_MAXIMAL = "NearMaximal"
ODD_P_PLUS_2 = "OddPPlus2"
BELOW_MINIMUM = "BelowMinimum"
TOO_SMALL_TRIVIAL = "TooSmallTrivial"


def known_nonexistence(p: int, s: int) -> str | None:
    """Name of the printed result ruling out a p-qubit UPB of size s, if any."""
    if p < 1 or not 1 <= s <= 2**p:
        raise BadArguments(f"need p >= 1 and 1 <= s <= 2^p, got p={p}, s={s}")
    if s <= p:
        return TOO_SMALL_TRIVIAL
    if s < min_size(p):
        return BELOW_MINIMUM
    if 2**p - 4 < s < 2**p:
        return NEAR_MAXIMAL
    if p % 2 == 1 and s == p + 2:
        return ODD_P_PLUS_2
    return None


@lru_cache(maxsize=None)
def paper_claims() -> dict[tuple[int, int], dict]:
    """Table of published existence facts keyed by ``(p, s)``."""
    text = resources.files("upb").joinpath("data/paper-claims.jsonl").read_text()
    out = {}
    for line in text.splitlines():
        if line.strip():
            doc = json.loads(line)
            out[(doc["p"], doc["s"])] = doc
    return out


@dataclass
class SizeCatalog:
    p: int
    attainable: dict[int, str]
    impossible: dict[int, str]
    unknown: set[int]
    from_combine: set[int] = field(default_factory=set)
    proven_gap: int = 0
    possible_gap: int = 0

    def status(self, s: int) -> str:
        if s in self.attainable:
            return "exists"
        if s in self.impossible:
            return "impossible"
        return "unknown"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "attainable": ranges(sorted(self.attainable)),
            "impossible": ranges(sorted(self.impossible)),
            "unknown": ranges(sorted(self.unknown)),
            "from_combine": ranges(sorted(self.from_combine)),
            "proven_gap": self.proven_gap,
            "possible_gap": self.possible_gap,
        }


def ranges(values: Iterable[int]) -> list[str]:
    """Compress sorted integers into ``a-b`` runs."""
    out = []
    for v in values:
        if out and out[-1][1] == v - 1:
            out[-1][1] = v
        else:
            out.append([v, v])
    return [f"{a}" if a == b else f"{a}-{b}" for a, b in out]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@lru_cache(maxsize=None)
def _attainable_mask(p: int) -> tuple[int, int]:
    """(all attainable sizes, sizes reached by combining two (p-1)-qubit UPBs) as bitmasks."""
    mask = 1 << 2**p
    for (pp, s), doc in paper_claims().items():
        if pp == p and doc["status"] == "exists":
            mask |= 1 << s
    mask |= 1 << min_size(p)
    for s in range(4, 2**p + 1, 4):
        if _route(p, s):
            mask |= 1 << s
    combined = 0
    if p > 1:
        prev, _ = _attainable_mask(p - 1)
        for s1 in _bits(prev):
            combined |= prev << s1
    return mask | combined, combined


def attainable_sizes(p: int, computed: Mapping[int, int] | None = None) -> SizeCatalog:
    """Partition ``[1, 2^p]`` into attainable / impossible / unknown sizes.

    ``computed`` optionally maps sizes to class counts from completed
    exhaustive searches on p qubits.
    """
    if p < 1:
        raise BadArguments(f"p must be >= 1, got {p}")
    mask, combined = _attainable_mask(p)
    claims = paper_claims()
    attainable: dict[int, str] = {}
    for s in _bits(mask):
        if s == 2**p:
            attainable[s] = "constructed: standard basis"
        elif _route(p, s):
            attainable[s] = "constructed: multiple of four"
        elif (combined >> s) & 1:
            attainable[s] = "constructed: combine"
        elif s == min_size(p):
            attainable[s] = "paper-claim: minimum size"
        else:
            attainable[s] = "paper-claim: " + claims[(p, s)]["source"]
    impossible: dict[int, str] = {}
    for s in range(1, 2**p + 1):
        rule = known_nonexistence(p, s)
        if rule:
            impossible[s] = "rule: " + rule
        elif computed and computed.get(s) == 0:
            impossible[s] = "computed: exhaustive search"
        elif claims.get((p, s), {}).get("status") == "impossible":
            impossible[s] = "paper-claim: " + claims[(p, s)]["source"]
    clash = set(attainable) & set(impossible)
    if clash:
        raise AssertionError(f"sizes both attainable and impossible: {sorted(clash)}")
    unknown = set(range(1, 2**p + 1)) - set(attainable) - set(impossible)
    proven_gap = possible_gap = 0
    nontrivial = sorted(s for s in attainable if s < 2**p)
    for x, y in zip(nontrivial, nontrivial[1:]):
        run = range(x + 1, y)
        possible_gap = max(possible_gap, len(run))
        if all(t in impossible for t in run):
            proven_gap = max(proven_gap, len(run))
    return SizeCatalog(p, attainable, impossible, unknown, set(_bits(combined)), proven_gap, possible_gap)


def sum_min_sizes(p: int) -> int:
    """Sum of min_size(k) for 4 <= k <= p-1."""
    return sum(min_size(k) for k in range(4, p))


def bound_comparison(p: int) -> tuple[int, int]:
    if p < 7:
        raise BadArguments(f"bound comparison needs p >= 7, got {p}")
    lower = sum_min_sizes(p)
    closed = (p * p + 3 * p - 30) // 2
    if not lower <= closed <= lower + 2:
        raise AssertionError(f"sandwich fails at p={p}: {lower} <= {closed} <= {lower + 2}")
    return lower, closed
