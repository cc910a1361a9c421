"""Exact UPB decision from the orthogonality graph.

A product state ``|z>`` is orthogonal to a product state ``|v>`` iff they are
orthogonal on some qubit.  On a qubit, ``|z_q>`` is orthogonal to exactly one
direction of C^2, so it can be orthogonal to the states of at most one region.
Hence a set is extendible iff one region per qubit (at most) can be chosen so
that the chosen regions cover every vertex.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import OrthogonalityGraph, require_valid
from .errors import DegenerateSample

__all__ = [
    "ExtensionWitness",
    "Verdict",
    "VerdictKind",
    "missing_pairs",
    "is_mutually_orthogonal",
    "extension_witness",
    "classify",
    "is_upb",
    "CrosscheckResult",
    "numeric_crosscheck",
]


@dataclass(frozen=True)
class ExtensionWitness:
    """``choices[q]`` is a region index on qubit ``q`` or ``None`` (no constraint there)."""

    choices: tuple[int | None, ...]

    def covered(self, g: OrthogonalityGraph) -> int:
        mask = 0
        for q, r in enumerate(self.choices):
            if r is not None:
                mask |= g.qubits[q].masks[r]
        return mask

    def is_valid_for(self, g: OrthogonalityGraph) -> bool:
        return len(self.choices) == g.p and self.covered(g) == (1 << g.s) - 1

    def regions(self, g: OrthogonalityGraph) -> list[tuple[int, tuple[int, ...]]]:
        return [(q, g.qubits[q].regions[r]) for q, r in enumerate(self.choices) if r is not None]


class VerdictKind(enum.Enum):
    UPB = "UPB"
    NOT_PAIRWISE_ORTHOGONAL = "NotPairwiseOrthogonal"
    EXTENDIBLE = "Extendible"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    missing: tuple[tuple[int, int], ...] = ()
    witness: ExtensionWitness | None = None

    @property
    def is_upb(self) -> bool:
        return self.kind is VerdictKind.UPB

    def __str__(self) -> str:
        return self.kind.value


def missing_pairs(g: OrthogonalityGraph) -> list[tuple[int, int]]:
    """Vertex pairs orthogonal on no qubit."""
    require_valid(g)
    orth = g.orth_masks
    return [(u, v) for u in range(g.s) for v in range(u + 1, g.s) if not (orth[u] >> v) & 1]


def is_mutually_orthogonal(g: OrthogonalityGraph) -> bool:
    require_valid(g)
    full = (1 << g.s) - 1
    return all((m | (1 << v)) == full for v, m in enumerate(g.orth_masks))


def extension_witness(g: OrthogonalityGraph) -> ExtensionWitness | None:
    """Find a cover of all vertices by at most one region per qubit, or ``None``.

    Branches on the lowest uncovered vertex: it must be covered on some
    unused qubit, and on that qubit only its own region can cover it.
    Bound: covered + sum of the largest region sizes of unused qubits < s.
    """
    require_valid(g)
    s, p = g.s, g.p
    full = (1 << s) - 1
    biggest = [max(len(r) for r in qf.regions) for qf in g.qubits]
    order = sorted(range(p), key=lambda q: -biggest[q])
    region_of = g.region_of
    masks = [qf.masks for qf in g.qubits]
    choice: list[int | None] = [None] * p

    def search(covered: int, unused: list[int]) -> bool:
        if covered == full:
            return True
        if not unused:
            return False
        if bin(covered).count("1") + sum(biggest[q] for q in unused) < s:
            return False
        v = (~covered & (covered + 1)).bit_length() - 1
        for k, q in enumerate(unused):
            r = region_of[q][v]
            choice[q] = r
            if search(covered | masks[q][r], unused[:k] + unused[k + 1 :]):
                return True
            choice[q] = None
        return False

    if not search(0, order):
        return None
    witness = ExtensionWitness(tuple(choice))
    assert witness.is_valid_for(g), "internal error: witness does not cover"
    return witness


def classify(g: OrthogonalityGraph) -> Verdict:
    missing = missing_pairs(g)
    if missing:
        return Verdict(VerdictKind.NOT_PAIRWISE_ORTHOGONAL, missing=tuple(missing))
    w = extension_witness(g)
    if w is not None:
        return Verdict(VerdictKind.EXTENDIBLE, witness=w)
    return Verdict(VerdictKind.UPB)


def is_upb(g: OrthogonalityGraph) -> bool:
    return classify(g).is_upb


# ---------------------------------------------------------------------------
# numerical cross-check

_ZERO = 1e-9
_SEPARATION = 1e-6


@dataclass(frozen=True)
class CrosscheckResult:
    agree: bool
    numeric_kind: VerdictKind
    combinatorial_kind: VerdictKind
    report: str = ""
    attempts: int = 1

    def __bool__(self) -> bool:
        return self.agree


def _sample_vectors(g: OrthogonalityGraph, rng: np.random.Generator) -> list[np.ndarray]:
    """Per qubit, a (regions, 2) array of unit vectors realising the factorization."""
    out = []
    for qf in g.qubits:
        vecs = np.zeros((len(qf.regions), 2))
        for k, partner in enumerate(qf.partner):
            if partner >= 0 and partner < k:
                continue
            theta = rng.uniform(0.0, math.pi)
            vecs[k] = (math.cos(theta), math.sin(theta))
            if partner >= 0:
                vecs[partner] = (-math.sin(theta), math.cos(theta))
        gram = np.abs(vecs @ vecs.T)
        for i, j in itertools.combinations(range(len(qf.regions)), 2):
            if qf.partner[i] == j:
                continue
            if gram[i, j] < _SEPARATION or gram[i, j] > 1.0 - _SEPARATION:
                raise DegenerateSample(f"regions {i},{j} sampled too close to equal or orthogonal")
        out.append(vecs)
    return out


def numeric_crosscheck(g: OrthogonalityGraph, seed: int = 0, max_attempts: int = 100) -> CrosscheckResult:
    """Re-decide UPB-ness from random concrete unit vectors and compare with :func:`classify`.

    Candidate extending vectors per qubit are the orthogonal complements of
    every local vector in use plus one generic vector; any other local vector
    is orthogonal to no state on that qubit.
    """
    verdict = classify(g)
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        try:
            local = _sample_vectors(g, rng)
        except DegenerateSample:
            continue
        break
    else:
        raise DegenerateSample(f"no non-degenerate sample after {max_attempts} attempts")

    s, p = g.s, g.p
    # states[q][v] is the local vector of state v on qubit q
    states = [local[q][list(g.region_of[q])] for q in range(p)]
    problems = []

    orth = np.zeros((s, s), dtype=bool)
    for q in range(p):
        overlap = np.abs(states[q] @ states[q].T)
        local_zero = overlap < _ZERO
        for u, v in itertools.combinations(range(s), 2):
            if local_zero[u, v] != g.adjacent(q, u, v):
                problems.append(f"qubit {q}: pair ({u},{v}) overlap {overlap[u, v]:.3g} disagrees with graph")
        orth |= local_zero
    full_overlap = np.ones((s, s))
    for q in range(p):
        full_overlap *= np.abs(states[q] @ states[q].T)
    np.fill_diagonal(orth, True)
    if not orth.all():
        numeric_kind = VerdictKind.NOT_PAIRWISE_ORTHOGONAL
    else:
        if full_overlap[~np.eye(s, dtype=bool)].max(initial=0.0) >= _ZERO:
            problems.append("product inner products do not vanish for locally orthogonal pairs")
        # int64 bitmasks hold up to 62 states; beyond that fall back to Python ints
        dtype = np.int64 if s <= 62 else object
        reachable = np.zeros(1, dtype=dtype)
        for q in range(p):
            rot = np.column_stack([-local[q][:, 1], local[q][:, 0]])  # complement of each region vector
            generic = rng.normal(size=(1, 2))
            cands = np.vstack([rot, generic / np.linalg.norm(generic)])
            hits = np.abs(cands @ states[q].T) < _ZERO
            cand_masks = (hits.astype(dtype) << np.arange(s).astype(dtype)).sum(axis=1)
            reachable = np.unique((reachable[:, None] | cand_masks[None, :]).ravel())
        extendible = bool((reachable == (1 << s) - 1).any())
        numeric_kind = VerdictKind.EXTENDIBLE if extendible else VerdictKind.UPB

    agree = numeric_kind is verdict.kind and not problems
    if numeric_kind is not verdict.kind:
        problems.append(f"numeric verdict {numeric_kind.value} vs combinatorial {verdict.kind.value}")
    return CrosscheckResult(agree, numeric_kind, verdict.kind, "; ".join(problems), attempt)
