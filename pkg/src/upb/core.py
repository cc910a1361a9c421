"""Orthogonality graphs of qubit product sets.

A product set of ``s`` states on ``p`` qubits is described, one qubit at a
time, by which states share a local vector (a *region*) and which regions
hold mutually orthogonal vectors (a *matched pair*).  A matched pair
``(A, B)`` contributes the complete bipartite graph ``K_{|A|,|B|}`` to that
qubit's orthogonality graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import InvalidGraph, RaggedBasis

__all__ = [
    "QubitFactorization",
    "OrthogonalityGraph",
    "SizeProfile",
    "Symbol",
    "SymbolicProductBasis",
    "Violation",
    "ValidationReport",
    "validate_graph",
    "require_valid",
    "graph_from_states",
    "profile_of",
    "relabel",
]


def _region_sort_key(region: Sequence[int]) -> tuple[int, int]:
    return (len(region), min(region) if region else -1)


@dataclass(frozen=True)
class QubitFactorization:
    """Regions of equal local vectors on one qubit plus the pairing of orthogonal regions.

    Regions are stored sorted by ``(size, min vertex)`` and each region as a
    sorted tuple; matching pairs refer to the normalized region order and are
    stored as sorted ``(i, j)`` tuples with ``i < j``.  Construction never
    raises on malformed input so that :func:`validate_graph` can report it.
    """

    regions: tuple[tuple[int, ...], ...]
    matching: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        raw = [tuple(sorted(r)) for r in self.regions]
        order = sorted(range(len(raw)), key=lambda i: (_region_sort_key(raw[i]), raw[i]))
        new_index = {old: new for new, old in enumerate(order)}
        regions = tuple(raw[i] for i in order)
        pairs = []
        for pair in self.matching:
            i, j = (new_index.get(x, x) for x in pair)
            pairs.append((i, j) if i <= j else (j, i))
        object.__setattr__(self, "regions", regions)
        object.__setattr__(self, "matching", tuple(sorted(pairs)))

    @classmethod
    def from_components(cls, components: Iterable[Sequence[Sequence[int]]]) -> "QubitFactorization":
        """Build from ``(A, B)`` vertex-set pairs; an empty ``B`` means ``A`` is unmatched."""
        regions: list[tuple[int, ...]] = []
        matching = []
        for comp in components:
            a, b = (tuple(comp[0]), tuple(comp[1]) if len(comp) > 1 else ())
            regions.append(a)
            if b:
                regions.append(b)
                matching.append((len(regions) - 2, len(regions) - 1))
        return cls(tuple(regions), tuple(matching))

    @property
    def n_vertices(self) -> int:
        return sum(len(r) for r in self.regions)

    @cached_property
    def partner(self) -> tuple[int, ...]:
        """``partner[r]`` is the region matched with ``r``, or -1."""
        out = [-1] * len(self.regions)
        for i, j in self.matching:
            out[i], out[j] = j, i
        return tuple(out)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << v for v in r) for r in self.regions)

    def components(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Matched pairs as ``(A, B)`` followed by unmatched regions as ``(R, ())``."""
        out = [(self.regions[i], self.regions[j]) for i, j in self.matching]
        out += [(r, ()) for k, r in enumerate(self.regions) if self.partner[k] < 0]
        return out


@dataclass(frozen=True)
class OrthogonalityGraph:
    """``p`` qubit factorizations over the shared vertex set ``{0..s-1}``."""

    p: int
    s: int
    qubits: tuple[QubitFactorization, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))

    @cached_property
    def region_of(self) -> tuple[tuple[int, ...], ...]:
        """``region_of[q][v]``: index of the region holding vertex ``v`` on qubit ``q``."""
        table = []
        for qf in self.qubits:
            row = [-1] * self.s
            for k, region in enumerate(qf.regions):
                for v in region:
                    if 0 <= v < self.s:
                        row[v] = k
            table.append(tuple(row))
        return tuple(table)

    @cached_property
    def orth_masks(self) -> tuple[int, ...]:
        """Bitmask of vertices orthogonal to ``v`` on at least one qubit."""
        out = [0] * self.s
        for qf in self.qubits:
            for i, j in qf.matching:
                mi, mj = qf.masks[i], qf.masks[j]
                for v in qf.regions[i]:
                    out[v] |= mj
                for v in qf.regions[j]:
                    out[v] |= mi
        return tuple(out)

    def adjacent(self, q: int, u: int, v: int) -> bool:
        """True iff ``u`` and ``v`` are orthogonal on qubit ``q``."""
        ru, rv = self.region_of[q][u], self.region_of[q][v]
        return self.qubits[q].partner[ru] == rv

    def edge_count(self) -> int:
        return sum(len(qf.regions[i]) * len(qf.regions[j]) for qf in self.qubits for i, j in qf.matching)


class Violation(NamedTuple):
    qubit: int | None
    rule: str
    detail: str

    def __str__(self) -> str:
        where = "graph" if self.qubit is None else f"qubit {self.qubit}"
        return f"{where}: {self.rule} ({self.detail})"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_graph(g: OrthogonalityGraph) -> ValidationReport:
    """Collect every structural violation; never raises."""
    out: list[Violation] = []
    if not isinstance(g.p, int) or g.p < 1:
        out.append(Violation(None, "bad-qubit-count", f"p={g.p!r}"))
    if not isinstance(g.s, int) or g.s < 1:
        out.append(Violation(None, "bad-state-count", f"s={g.s!r}"))
    if len(g.qubits) != g.p:
        out.append(Violation(None, "qubit-count-mismatch", f"p={g.p} but {len(g.qubits)} factorizations"))
    s = g.s if isinstance(g.s, int) else 0
    for q, qf in enumerate(g.qubits):
        seen: dict[int, int] = {}
        for k, region in enumerate(qf.regions):
            if not region:
                out.append(Violation(q, "empty-region", f"region {k}"))
            for v in region:
                if not isinstance(v, int) or not 0 <= v < s:
                    out.append(Violation(q, "vertex-out-of-range", f"vertex {v!r} in region {k}"))
                elif v in seen:
                    out.append(Violation(q, "overlapping-regions", f"vertex {v} in regions {seen[v]} and {k}"))
                else:
                    seen[v] = k
        missing = sorted(set(range(s)) - set(seen))
        if missing:
            out.append(Violation(q, "uncovered-vertices", f"vertices {missing}"))
        used: dict[int, tuple[int, int]] = {}
        for pair in qf.matching:
            i, j = pair
            if i == j:
                out.append(Violation(q, "self-paired-region", f"pair {pair}"))
                continue
            for r in (i, j):
                if not 0 <= r < len(qf.regions):
                    out.append(Violation(q, "region-index-out-of-range", f"pair {pair}"))
                elif r in used:
                    out.append(Violation(q, "region-matched-twice", f"region {r} in {used[r]} and {pair}"))
                else:
                    used[r] = pair
    return ValidationReport(tuple(out))


def require_valid(g: OrthogonalityGraph) -> None:
    report = validate_graph(g)
    if not report.ok:
        raise InvalidGraph(report.violations)


def relabel(g: OrthogonalityGraph, vertex_perm: Sequence[int], qubit_perm: Sequence[int] | None = None) -> OrthogonalityGraph:
    """Vertex ``v`` becomes ``vertex_perm[v]``; new qubit ``i`` is old qubit ``qubit_perm[i]``."""
    order = range(g.p) if qubit_perm is None else qubit_perm
    qubits = []
    for q in order:
        qf = g.qubits[q]
        regions = tuple(tuple(vertex_perm[v] for v in r) for r in qf.regions)
        qubits.append(QubitFactorization(regions, qf.matching))
    return OrthogonalityGraph(g.p, g.s, tuple(qubits))


# ---------------------------------------------------------------------------
# size profiles


@dataclass(frozen=True, order=True)
class SizeProfile:
    """Per qubit, the multiset of complete-bipartite component sizes ``(a, b)``, ``a >= b``.

    ``b == 0`` marks an unmatched region and is only meaningful when
    ``extended`` is set.  Pairs within a qubit are sorted descending.
    """

    p: int
    s: int
    qubits: tuple[tuple[tuple[int, int], ...], ...]
    extended: bool = False

    def __post_init__(self):
        norm = tuple(
            tuple(sorted(((max(a, b), min(a, b)) for a, b in comps), reverse=True)) for comps in self.qubits
        )
        object.__setattr__(self, "qubits", norm)

    def normalized(self) -> "SizeProfile":
        """Qubits sorted (descending) so profiles equal up to qubit permutation compare equal."""
        return SizeProfile(self.p, self.s, tuple(sorted(self.qubits, reverse=True)), self.extended)

    def edges(self) -> int:
        return sum(a * b for comps in self.qubits for a, b in comps)

    def to_json(self) -> dict:
        return {"p": self.p, "s": self.s, "qubits": [[list(c) for c in comps] for comps in self.qubits]}

    @classmethod
    def from_json(cls, doc: dict) -> "SizeProfile":
        qubits = tuple(tuple((int(a), int(b)) for a, b in comps) for comps in doc["qubits"])
        extended = any(b == 0 for comps in qubits for _, b in comps)
        return cls(int(doc["p"]), int(doc["s"]), qubits, extended)

    def __str__(self) -> str:
        def comp(a: int, b: int) -> str:
            return f"K{a},{b}" if b else f"R{a}"

        return " / ".join(" u ".join(comp(a, b) for a, b in comps) for comps in self.qubits)


def profile_of(g: OrthogonalityGraph) -> SizeProfile:
    require_valid(g)
    qubits = []
    extended = False
    for qf in g.qubits:
        comps = [(len(a), len(b)) for a, b in qf.components()]
        extended = extended or any(b == 0 for _, b in comps)
        qubits.append(tuple(comps))
    return SizeProfile(g.p, g.s, tuple(qubits), extended)


# ---------------------------------------------------------------------------
# symbolic product bases


class Symbol(NamedTuple):
    """A local vector: ``letter`` names a basis of C^2 and ``complemented`` picks its second member.

    The computational basis uses the letter ``'0'``; ``Symbol('0', True)`` is ``|1>``.
    """

    letter: str
    complemented: bool = False


@dataclass(frozen=True)
class SymbolicProductBasis:
    states: tuple[tuple[Symbol, ...], ...]

    def __post_init__(self):
        states = tuple(tuple(Symbol(*sym) for sym in state) for state in self.states)
        lengths = {len(st) for st in states}
        if len(lengths) > 1:
            raise RaggedBasis(f"states have unequal lengths {sorted(lengths)}")
        object.__setattr__(self, "states", states)

    @property
    def s(self) -> int:
        return len(self.states)

    @property
    def p(self) -> int:
        return len(self.states[0]) if self.states else 0


def graph_from_states(b: SymbolicProductBasis) -> OrthogonalityGraph:
    """Read off the orthogonality graph of a symbolic product set."""
    if not isinstance(b, SymbolicProductBasis):
        b = SymbolicProductBasis(tuple(b))
    qubits = []
    for q in range(b.p):
        groups: dict[Symbol, list[int]] = {}
        for v, state in enumerate(b.states):
            groups.setdefault(state[q], []).append(v)
        keys = list(groups)
        index = {sym: k for k, sym in enumerate(keys)}
        matching = []
        for sym, k in index.items():
            other = index.get(Symbol(sym.letter, True))
            if not sym.complemented and other is not None:
                matching.append((k, other))
        qubits.append(QubitFactorization(tuple(tuple(groups[k]) for k in keys), tuple(matching)))
    return OrthogonalityGraph(b.p, b.s, tuple(qubits))
