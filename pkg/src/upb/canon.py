"""Canonical forms of orthogonality graphs under qubit permutation and vertex relabeling.

The labeling search is individualization-refinement over a *layered*
structure: weighted nodes, and per layer a partition of the nodes into
regions with a partial matching between regions.  An orthogonality graph is
the special case of unit weights; the search module also canonicalizes
partial placements whose nodes are cells of interchangeable vertices.

Total order (frozen in catalog version 1): a leaf of the search tree gives
a discrete labeling; its certificate is ``(weights by label, sorted layer
certificates)`` where a layer certificate is the sorted tuple of its
components ``(A, B)`` (relabeled vertex tuples, ``A <= B``; ``B == ()`` for
an unmatched region).  The canonical form is the leaf with the smallest
certificate under Python tuple comparison, and the key is the graph record
of that relabeled graph with qubits in certificate order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import OrthogonalityGraph, QubitFactorization, profile_of, require_valid
from .errors import MixedDimensions
from .notation import decode_graph, encode_graph

__all__ = [
    "Layered",
    "canonical_form",
    "canonical_graph",
    "canonical_key",
    "are_equivalent",
    "CatalogEntry",
    "dedupe",
]


class Layered:
    """Weighted nodes plus, per layer, regions and a region matching."""

    __slots__ = ("n", "weights", "regions", "partners", "region_of")

    def __init__(self, weights: Sequence[int], layers: Sequence[tuple[Sequence[Sequence[int]], Sequence[int]]]):
        self.n = len(weights)
        self.weights = tuple(weights)
        self.regions = [tuple(tuple(r) for r in regs) for regs, _ in layers]
        self.partners = [tuple(part) for _, part in layers]
        self.region_of = []
        for regs in self.regions:
            row = [0] * self.n
            for k, r in enumerate(regs):
                for v in r:
                    row[v] = k
            self.region_of.append(row)

    @classmethod
    def from_graph(cls, g: OrthogonalityGraph) -> "Layered":
        return cls([1] * g.s, [(qf.regions, qf.partner) for qf in g.qubits])

    def certificate(self, lab: Sequence[int]) -> tuple:
        inv = [0] * self.n
        for v, l in enumerate(lab):
            inv[l] = v
        weights = tuple(self.weights[inv[l]] for l in range(self.n))
        layers = []
        for regs, part in zip(self.regions, self.partners):
            rel = [tuple(sorted(lab[v] for v in r)) for r in regs]
            comps = []
            for k, r in enumerate(rel):
                j = part[k]
                if j < 0:
                    comps.append((r, ()))
                elif k < j:
                    other = rel[j]
                    comps.append((r, other) if r <= other else (other, r))
            layers.append(tuple(sorted(comps)))
        return (weights, tuple(sorted(layers)))

    # -- refinement -------------------------------------------------------

    def refine(self, colors: list[int]) -> list[int]:
        """Iterate the isomorphism-invariant color refinement to a fixpoint."""
        n = self.n
        ncolors = len(set(colors))
        while True:
            region_sigs = []
            for regs in self.regions:
                region_sigs.append([tuple(sorted(colors[v] for v in r)) for r in regs])
            node_sigs = []
            for v in range(n):
                parts = []
                for L, regs in enumerate(self.regions):
                    k = self.region_of[L][v]
                    j = self.partners[L][k]
                    parts.append((region_sigs[L][k], region_sigs[L][j] if j >= 0 else None))
                parts.sort(key=_sig_key)
                node_sigs.append((colors[v], parts))
            ranks = {}
            for sig in sorted(node_sigs, key=_node_key):
                key = _node_key(sig)
                if key not in ranks:
                    ranks[key] = len(ranks)
            new = [ranks[_node_key(sig)] for sig in node_sigs]
            # ranks are dense over distinct signatures, ordered by (old color, ...)
            if len(ranks) == ncolors:
                return new
            colors, ncolors = new, len(ranks)


def _sig_key(part):
    own, other = part
    return (own, () if other is None else (other,))


def _node_key(sig):
    color, parts = sig
    return (color, tuple(_sig_key(p) for p in parts))


def _individualize(colors: list[int], v: int) -> list[int]:
    # v keeps a color below the rest of its cell; ranks stay dense and ordered
    c = colors[v]
    return [x + 1 if (x > c or (x == c and u != v)) else x for u, x in enumerate(colors)]


def _orbits_fixing(autos: list[tuple[int, ...]], prefix: list[int], n: int) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gamma in autos:
        if all(gamma[v] == v for v in prefix):
            for v in range(n):
                a, b = find(v), find(gamma[v])
                if a != b:
                    parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


def canonical_form(struct: Layered) -> tuple[tuple, list[int]]:
    """Return ``(certificate, labeling)`` of the minimal leaf; ``labeling[v]`` is v's new index."""
    n = struct.n
    wrank = {w: k for k, w in enumerate(sorted(set(struct.weights)))}
    colors0 = struct.refine([wrank[w] for w in struct.weights])
    best: list = [None, None, None]  # cert, labeling, inverse labeling
    autos: list[tuple[int, ...]] = []

    def search(colors: list[int], prefix: list[int]) -> None:
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = None
        for c in sorted(counts):
            if counts[c] > 1:
                target = c
                break
        if target is None:
            cert = struct.certificate(colors)
            if best[0] is None or cert < best[0]:
                inv = [0] * n
                for v, l in enumerate(colors):
                    inv[l] = v
                best[0], best[1], best[2] = cert, list(colors), inv
            elif cert == best[0]:
                inv_best = best[2]
                autos.append(tuple(inv_best[colors[v]] for v in range(n)))
            return
        cell = [v for v in range(n) if colors[v] == target]
        tried: list[int] = []
        for v in cell:
            if tried and autos:
                orbit = _orbits_fixing(autos, prefix, n)
                if any(orbit[v] == orbit[w] for w in tried):
                    continue
            search(struct.refine(_individualize(colors, v)), prefix + [v])
            tried.append(v)

    search(colors0, [])
    return best[0], best[1]


def canonical_graph(g: OrthogonalityGraph) -> OrthogonalityGraph:
    require_valid(g)
    struct = Layered.from_graph(g)
    cert, lab = canonical_form(struct)
    _, layers = cert
    qubits = []
    for layer in layers:
        regions, matching = [], []
        for a, b in layer:
            regions.append(a)
            if b:
                regions.append(b)
                matching.append((len(regions) - 2, len(regions) - 1))
        qubits.append(QubitFactorization(tuple(regions), tuple(matching)))
    return OrthogonalityGraph(g.p, g.s, tuple(qubits))


def canonical_key(g: OrthogonalityGraph) -> bytes:
    """Graph record of the canonical relabeling; equal iff the graphs are equivalent."""
    return encode_graph(canonical_graph(g))


def are_equivalent(g1: OrthogonalityGraph, g2: OrthogonalityGraph) -> bool:
    require_valid(g1)
    require_valid(g2)
    if (g1.p, g1.s) != (g2.p, g2.s):
        return False
    if profile_of(g1).normalized() != profile_of(g2).normalized():
        return False
    return canonical_key(g1) == canonical_key(g2)


@dataclass
class CatalogEntry:
    key: bytes
    graph: OrthogonalityGraph
    multiplicity: int = 1
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        from .notation import graph_to_json

        doc = {"key": self.key.decode("ascii"), "graph": graph_to_json(self.graph), "multiplicity": self.multiplicity}
        if self.provenance:
            doc["provenance"] = self.provenance
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "CatalogEntry":
        from .notation import graph_from_json

        return cls(
            doc["key"].encode("ascii"),
            graph_from_json(doc["graph"]),
            int(doc.get("multiplicity", 1)),
            dict(doc.get("provenance", {})),
        )


def dedupe(graphs: Iterable[OrthogonalityGraph], keys: Iterable[bytes] | None = None) -> list[CatalogEntry]:
    """One entry per equivalence class, first representative kept, sorted by key."""
    classes: dict[bytes, CatalogEntry] = {}
    dims = None
    key_iter = iter(keys) if keys is not None else None
    for g in graphs:
        if dims is None:
            dims = (g.p, g.s)
        elif dims != (g.p, g.s):
            raise MixedDimensions(f"graph with (p,s)=({g.p},{g.s}) in a stream of {dims}")
        key = next(key_iter) if key_iter is not None else canonical_key(g)
        entry = classes.get(key)
        if entry is None:
            classes[key] = CatalogEntry(key, g, 1)
        else:
            entry.multiplicity += 1
    return [classes[k] for k in sorted(classes)]


def representative(key: bytes) -> OrthogonalityGraph:
    return decode_graph(key)
