"""Step 2: find every UPB graph with a given size profile.

Qubits are placed one at a time.  After k qubits the vertices fall into
*cells* (vertices that agree on every placed qubit) and the partial state is
the weighted cell structure.  Placing the next qubit means choosing how many
vertices of each cell go to each component side: a contingency table with
row sums = cell sizes and column sums = side sizes.  Vertices inside a cell
are interchangeable, so tables enumerate placements without the s!
relabelings a vertex-by-vertex search would revisit, and equivalent partial
states are merged by their canonical form.

Prunes, all sound:

* a cell of x vertices needs x <= 2^r with r qubits still to place (those
  vertices must become mutually orthogonal on the remaining qubits);
* pairs orthogonal on no placed qubit cannot outnumber the edges of the
  remaining qubits (zero for the last qubit);
* a product state orthogonal to the best region choice on placed qubits,
  extended greedily over the remaining qubits, must miss some vertex;
* columns of interchangeable component sides are kept in lexicographic order.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from ..canon import Layered, canonical_form
from ..checker import classify
from ..core import OrthogonalityGraph, QubitFactorization, SizeProfile
from .profiles import guaranteed_cover

__all__ = ["search_profile", "layer_order"]


class _Layer:
    """Columns of one qubit: component sides, their partners and the swap symmetries."""

    __slots__ = ("comps", "sizes", "partner", "edges", "sides", "symmetry")

    def __init__(self, comps: Sequence[tuple[int, int]]):
        self.comps = tuple(comps)
        sizes, partner, groups = [], [], []
        for a, b in comps:
            if b > 0:
                sizes += [a, b]
                partner += [len(sizes) - 1, len(sizes) - 2]
                groups.append((len(sizes) - 2, len(sizes) - 1))
            else:
                sizes.append(a)
                partner.append(-1)
                groups.append((len(sizes) - 1,))
        self.sizes = tuple(sizes)
        self.partner = tuple(partner)
        self.edges = sum(a * b for a, b in comps)
        self.sides = tuple(x for x in sizes)
        sym = []
        for (a, b), cols in zip(comps, groups):
            if b > 0 and a == b:
                sym.append(((cols[0],), (cols[1],)))
        for j in range(len(comps) - 1):
            if comps[j] == comps[j + 1]:
                sym.append((groups[j], groups[j + 1]))
        self.symmetry = tuple(sym)


def layer_order(pr: SizeProfile) -> list[int]:
    """Qubits with the largest component side first, then the most edges (measured fastest)."""

    def key(q: int):
        comps = pr.qubits[q]
        return (-max(a for a, _ in comps), -sum(a * b for a, b in comps), q)

    return sorted(range(pr.p), key=key)


def _tables(
    sizes, orth, layer: _Layer, maxcell: int, cap: int, degcap: int, last: _Layer | None = None
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All admissible count tables (cell x column) for ``layer``.

    ``last`` is the final layer when this is the penultimate one; then the
    deficit graph must already split into bipartite pieces that each fit
    inside one component of the final layer.
    """
    n, m = len(sizes), len(layer.sizes)
    fits = sorted({(max(a, b), min(a, b)) for a, b in last.comps if b > 0}) if last is not None else []
    caps = list(layer.sizes)
    pcol = layer.partner
    sym = layer.symmetry
    entries: list[tuple[int, int, int]] = []
    deficit: list[int] = []  # per entry, pairs it still needs covered by later qubits
    dadj: list[int] = []  # per entry, bitmask of entries it is not yet orthogonal to
    weight: list[int] = []

    def clique_over(cands: int, budget: int) -> bool:
        # does some clique of the deficit graph inside cands weigh more than budget?
        total = 0
        m2 = cands
        while m2:
            low = m2 & -m2
            total += weight[low.bit_length() - 1]
            m2 ^= low
        if total <= budget:
            return False
        while cands:
            low = cands & -cands
            j = low.bit_length() - 1
            cands ^= low
            if weight[j] > budget or clique_over(cands & dadj[j], budget - weight[j]):
                return True
        return False

    def piece_fits(e: int) -> bool:
        # 2-colour the deficit piece holding entry e (weights are 1 here)
        colour = {e: 0}
        count = [weight[e], 0]
        stack = [e]
        while stack:
            u = stack.pop()
            mask = dadj[u]
            while mask:
                low = mask & -mask
                w = low.bit_length() - 1
                mask ^= low
                if w not in colour:
                    colour[w] = 1 - colour[u]
                    count[colour[w]] += weight[w]
                    stack.append(w)
                elif colour[w] == colour[u]:
                    return False
        big, small = max(count), min(count)
        return any(a >= big and b >= small for a, b in fits)

    row = [0] * m
    table: list[tuple[int, ...]] = [()] * n
    out: list[tuple[tuple[int, ...], ...]] = []

    def fill(c: int, k0: int, left: int, uncovered: int, ties: int) -> None:
        # place the next nonzero entry of row c at some column k >= k0
        if left == 0:
            end_row(c, uncovered, ties)
            return
        rest = 0
        for j in range(k0, m):
            rest += caps[j]
        oc = orth[c]
        for k in range(k0, m):
            if rest < left:
                return
            rest -= caps[k]
            pk = pcol[k]
            lo = max(1, left - rest)
            hi = min(left, caps[k], maxcell)
            if hi < lo:
                continue
            hit = [j for j, (c2, k2, _) in enumerate(entries) if k2 != pk and (c2 == c or not (oc >> c2) & 1)]
            base = 0
            hitmask = 0
            for j in hit:
                base += entries[j][2]
                hitmask |= 1 << j
            for x in range(hi, lo - 1, -1):
                deg = x - 1 + base
                if deg > degcap:
                    continue
                if any(deficit[j] + x > degcap for j in hit):
                    continue
                du = x * (x - 1) // 2 + x * base
                if uncovered + du > cap:
                    continue
                if hitmask and clique_over(hitmask, maxcell - x):
                    continue
                e = len(entries)
                for j in hit:
                    deficit[j] += x
                    dadj[j] |= 1 << e
                entries.append((c, k, x))
                deficit.append(deg)
                dadj.append(hitmask)
                weight.append(x)
                if last is None or not hitmask or piece_fits(e):
                    caps[k] -= x
                    row[k] = x
                    fill(c, k + 1, left - x, uncovered + du, ties)
                    caps[k] += x
                    row[k] = 0
                entries.pop()
                deficit.pop()
                dadj.pop()
                weight.pop()
                for j in hit:
                    deficit[j] -= x
                    dadj[j] &= ~(1 << e)

    def end_row(c: int, uncovered: int, ties: int) -> None:
        for idx, (ga, gb) in enumerate(sym):
            if (ties >> idx) & 1:
                va = [row[j] for j in ga]
                vb = [row[j] for j in gb]
                if va < vb:
                    return
                if va > vb:
                    ties &= ~(1 << idx)
        saved = tuple(row)
        table[c] = saved
        if c == n - 1:
            out.append(tuple(table))
        else:
            row[:] = [0] * m
            fill(c + 1, 0, sizes[c + 1], uncovered, ties)
            row[:] = saved

    fill(0, 0, sizes[0], 0, (1 << len(sym)) - 1)
    return iter(out)


def _last_layer(sizes, orth, layer: _Layer) -> Iterator[tuple[int, ...]]:
    """Column of every vertex on the final qubit, cells expanded to single vertices.

    Pairs not yet orthogonal (the *deficit* graph) must all be covered here,
    i.e. every deficit edge runs between the two sides of one component.  So
    each connected piece of the deficit graph is bipartite and lands whole in
    one component, oriented one of two ways; vertices with no deficit edge go
    anywhere.
    """
    cell_of = [c for c, x in enumerate(sizes) for _ in range(x)]
    n = len(cell_of)
    adj = []
    for v in range(n):
        cv, mask = cell_of[v], 0
        for u in range(n):
            if u != v and (cell_of[u] == cv or not (orth[cv] >> cell_of[u]) & 1):
                mask |= 1 << u
        adj.append(mask)

    side = [-1] * n
    pieces: list[tuple[list[int], list[int]]] = []
    free: list[int] = []
    for v in range(n):
        if side[v] >= 0:
            continue
        if not adj[v]:
            free.append(v)
            side[v] = 0
            continue
        side[v] = 0
        parts: tuple[list[int], list[int]] = ([v], [])
        stack = [v]
        while stack:
            u = stack.pop()
            m = adj[u]
            while m:
                low = m & -m
                w = low.bit_length() - 1
                m ^= low
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    parts[side[w]].append(w)
                    stack.append(w)
                elif side[w] == side[u]:
                    return  # odd cycle: some pair can never be made orthogonal
        pieces.append(parts)
    pieces.sort(key=lambda pr: -(len(pr[0]) + len(pr[1])))

    comps = []  # (column A, column B, a, b)
    k = 0
    for a, b in layer.comps:
        if b > 0:
            comps.append((k, k + 1, a, b))
            k += 2
        else:
            comps.append((k, -1, a, 0))
            k += 1
    ncomp = len(comps)
    caps = list(layer.sizes)
    used = [False] * ncomp
    col = [-1] * n

    def twin_blocked(j: int) -> bool:
        # empty components of the same shape are interchangeable: only fill the first
        if used[j]:
            return False
        for i in range(j):
            if not used[i] and comps[i][2:] == comps[j][2:]:
                return True
        return False

    def place(i: int) -> Iterator[tuple[int, ...]]:
        if i == len(pieces):
            yield from place_free(0)
            return
        x, y = pieces[i]
        for j, (ca, cb, a, b) in enumerate(comps):
            if cb < 0 or twin_blocked(j):
                continue
            orients = [(x, y), (y, x)]
            if not used[j] and a == b:
                orients = orients[:1]
            for p0, p1 in orients:
                if len(p0) <= caps[ca] and len(p1) <= caps[cb]:
                    caps[ca] -= len(p0)
                    caps[cb] -= len(p1)
                    was = used[j]
                    used[j] = True
                    for v in p0:
                        col[v] = ca
                    for v in p1:
                        col[v] = cb
                    yield from place(i + 1)
                    used[j] = was
                    caps[ca] += len(p0)
                    caps[cb] += len(p1)

    def place_free(i: int) -> Iterator[tuple[int, ...]]:
        if i == len(free):
            if not any(caps):
                yield tuple(col)
            return
        v = free[i]
        for j, (ca, cb, a, b) in enumerate(comps):
            if twin_blocked(j):
                continue
            targets = (ca,) if cb < 0 or (not used[j] and a == b) else (ca, cb)
            for k in targets:
                if caps[k]:
                    caps[k] -= 1
                    was = used[j]
                    used[j] = True
                    col[v] = k
                    yield from place_free(i + 1)
                    used[j] = was
                    caps[k] += 1

    yield from place(0)


def _max_cover(weights: Sequence[int], region_masks: list[list[int]]) -> int:
    """Largest total weight coverable by at most one region per layer."""
    layers = sorted(region_masks, key=lambda regs: -max(_w(weights, r) for r in regs))
    best_left = []
    acc = 0
    for regs in reversed(layers):
        acc += max(_w(weights, r) for r in regs)
        best_left.append(acc)
    best_left.reverse()
    best = 0

    def rec(i: int, covered: int, total: int) -> None:
        nonlocal best
        if total > best:
            best = total
        if i == len(layers) or total + best_left[i] <= best:
            return
        for r in layers[i]:
            new = r & ~covered
            rec(i + 1, covered | r, total + _w(weights, new))

    rec(0, 0, 0)
    return best


def _w(weights: Sequence[int], mask: int) -> int:
    t = 0
    while mask:
        low = mask & -mask
        t += weights[low.bit_length() - 1]
        mask ^= low
    return t


class _State:
    __slots__ = ("sizes", "orth", "cols")

    def __init__(self, sizes, orth, cols):
        self.sizes = sizes  # cell sizes
        self.orth = orth  # per cell, bitmask of cells orthogonal to it on some placed qubit
        self.cols = cols  # per placed layer, the column of every cell

    def child(self, table, layer: _Layer) -> "_State":
        index = []  # (old cell, column) of each new cell
        for c, r in enumerate(table):
            for k, x in enumerate(r):
                if x:
                    index.append((c, k, x))
        sizes = tuple(x for _, _, x in index)
        orth = []
        pcol = layer.partner
        for c, k, _ in index:
            mask = 0
            oc = self.orth[c]
            for j, (c2, k2, _) in enumerate(index):
                if (c2 != c and (oc >> c2) & 1) or pcol[k] == k2:
                    mask |= 1 << j
            orth.append(mask)
        cols = [tuple(old[c] for c, _, _ in index) for old in self.cols]
        cols.append(tuple(k for _, k, _ in index))
        return _State(sizes, tuple(orth), cols)

    def region_masks(self, layers: Sequence[_Layer]) -> list[list[int]]:
        out = []
        for layer, cols in zip(layers, self.cols):
            masks = [0] * len(layer.sizes)
            for cell, k in enumerate(cols):
                masks[k] |= 1 << cell
            out.append(masks)
        return out

    def structure(self, layers: Sequence[_Layer]) -> Layered:
        parts = []
        for layer, cols in zip(layers, self.cols):
            regions = [[] for _ in layer.sizes]
            for cell, k in enumerate(cols):
                regions[k].append(cell)
            parts.append((regions, layer.partner))
        return Layered(self.sizes, parts)

    def graph(self, p: int, s: int, layers: Sequence[_Layer], order: Sequence[int]) -> OrthogonalityGraph:
        qubits: list[QubitFactorization | None] = [None] * p
        for layer, cols, q in zip(layers, self.cols, order):
            regions = [[] for _ in layer.sizes]
            for v, k in enumerate(cols):
                regions[k].append(v)
            matching = [(k, j) for k, j in enumerate(layer.partner) if k < j]
            qubits[q] = QubitFactorization(tuple(tuple(r) for r in regions), tuple(matching))
        return OrthogonalityGraph(p, s, tuple(qubits))


def search_profile(pr: SizeProfile, order: Sequence[int] | None = None, stats: dict | None = None) -> list[OrthogonalityGraph]:
    """Every UPB graph with profile ``pr``, one per equivalence class that the search meets.

    Qubit ``q`` of each returned graph carries ``pr.qubits[q]``.  Classes
    are not globally deduplicated across profiles; that is the caller's job.
    """
    p, s = pr.p, pr.s
    order = list(layer_order(pr) if order is None else order)
    layers = [_Layer(pr.qubits[q]) for q in order]
    edges_after = [sum(layer.edges for layer in layers[i + 1 :]) for i in range(p)]
    degree_after = [sum(max(layer.sides) for layer in layers[i + 1 :]) for i in range(p)]
    sides_after = [[layer.sides for layer in layers[i + 1 :]] for i in range(p)]

    states = [_State((s,), (0,), [])]
    counts = []
    for i, layer in enumerate(layers[:-1]):
        remaining = p - 1 - i
        maxcell = 1 << remaining
        nxt: list[_State] = []
        seen: set = set()
        made = 0
        for st in states:
            final = layers[-1] if remaining == 1 else None
            for table in _tables(st.sizes, st.orth, layer, maxcell, edges_after[i], degree_after[i], final):
                child = st.child(table, layer)
                made += 1
                cover = _max_cover(child.sizes, child.region_masks(layers[: i + 1]))
                if guaranteed_cover(cover, sides_after[i]) >= s:
                    continue
                cert, _ = canonical_form(child.structure(layers[: i + 1]))
                if cert in seen:
                    continue
                seen.add(cert)
                nxt.append(child)
        counts.append((made, len(nxt)))
        states = nxt
        if not states:
            break

    out = []
    seen = set()
    made = 0
    last = layers[-1]
    for st in states:
        cell_of = [c for c, x in enumerate(st.sizes) for _ in range(x)]
        expanded = [tuple(cols[c] for c in cell_of) for cols in st.cols]
        for assignment in _last_layer(st.sizes, st.orth, last):
            made += 1
            g = _State((1,) * s, None, expanded + [assignment]).graph(p, s, layers, order)
            cert, _ = canonical_form(Layered.from_graph(g))
            if cert in seen:
                continue
            seen.add(cert)
            if classify(g).is_upb:
                out.append(g)
    counts.append((made, len(out)))
    if stats is not None:
        stats["layers"] = counts
        stats["order"] = order
    return out
