"""Ket-string notation and the compact JSON graph record.

Ket strings write one symbol per qubit and separate states by commas::

    000,1aA,A1a,aA1

``0``/``1`` are the computational basis, a lowercase letter ``x`` is the
first member of some other basis and the uppercase ``X`` is its orthogonal
complement (the overlined vector in print).  Letters are scoped per qubit
position.  Whitespace is ignored.
"""

from __future__ import annotations

import json
from typing import Iterable

from .core import OrthogonalityGraph, QubitFactorization, Symbol, SymbolicProductBasis, require_valid
from .errors import DecodeError, DuplicateState, KetSyntaxError, RaggedBasis

CATALOG_FORMAT = "upb-catalog"
CATALOG_VERSION = 1

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def parse_symbol(ch: str, position: int = 0) -> Symbol:
    if ch == "0":
        return Symbol("0", False)
    if ch == "1":
        return Symbol("0", True)
    if "a" <= ch <= "z":
        return Symbol(ch, False)
    if "A" <= ch <= "Z":
        return Symbol(ch.lower(), True)
    raise KetSyntaxError(f"illegal character {ch!r}", position)


def format_symbol(sym: Symbol) -> str:
    if sym.letter == "0":
        return "1" if sym.complemented else "0"
    return sym.letter.upper() if sym.complemented else sym.letter


def parse_basis(text: str) -> SymbolicProductBasis:
    states: list[tuple[Symbol, ...]] = []
    current: list[Symbol] = []
    state_start = 0
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch == ",":
            if not current:
                raise KetSyntaxError("empty state", pos)
            states.append(tuple(current))
            current = []
            state_start = pos + 1
            continue
        current.append(parse_symbol(ch, pos))
    if not current:
        raise KetSyntaxError("empty state", state_start)
    states.append(tuple(current))

    width = len(states[0])
    for k, st in enumerate(states):
        if len(st) != width:
            raise RaggedBasis(f"state {k} has {len(st)} symbols, expected {width}")
    seen: dict[tuple[Symbol, ...], int] = {}
    for k, st in enumerate(states):
        if st in seen:
            raise DuplicateState(f"state {k} repeats state {seen[st]}")
        seen[st] = k
    return SymbolicProductBasis(tuple(states))


def canonical_letters(b: SymbolicProductBasis) -> SymbolicProductBasis:
    """Rename letters per qubit in first-seen order: ``0``, then ``a``, ``b``, ... (flags kept)."""
    columns = []
    for q in range(b.p):
        names: dict[str, str] = {}
        for st in b.states:
            letter = st[q].letter
            if letter not in names:
                k = len(names)
                names[letter] = "0" if k == 0 else _LETTERS[k - 1]
        columns.append(names)
    states = tuple(
        tuple(Symbol(columns[q][sym.letter], sym.complemented) for q, sym in enumerate(st)) for st in b.states
    )
    return SymbolicProductBasis(states)


def format_basis(b: SymbolicProductBasis) -> str:
    b = canonical_letters(b)
    return ",".join("".join(format_symbol(sym) for sym in st) for st in b.states)


def basis_from_graph(g: OrthogonalityGraph) -> SymbolicProductBasis:
    """A symbolic product set realising ``g``: one basis per matched pair or unmatched region."""
    require_valid(g)
    states = [[None] * g.p for _ in range(g.s)]
    for q, qf in enumerate(g.qubits):
        k = 0
        for a, b in qf.components():
            letter = "0" if k == 0 else _LETTERS[k - 1]
            k += 1
            for v in a:
                states[v][q] = Symbol(letter, False)
            for v in b:
                states[v][q] = Symbol(letter, True)
    return SymbolicProductBasis(tuple(tuple(st) for st in states))


# ---------------------------------------------------------------------------
# graph records


def graph_to_json(g: OrthogonalityGraph) -> dict:
    return {
        "p": g.p,
        "s": g.s,
        "qubits": [
            {"regions": [list(r) for r in qf.regions], "matching": [list(m) for m in qf.matching]}
            for qf in g.qubits
        ],
    }


def encode_graph(g: OrthogonalityGraph) -> bytes:
    """Single-line compact record; byte-identical for equal (normalized) graphs."""
    require_valid(g)
    return json.dumps(graph_to_json(g), separators=(",", ":")).encode("ascii")


def _expect(cond: bool, message: str, offset: int) -> None:
    if not cond:
        raise DecodeError(message, offset)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def graph_from_json(doc, offset: int = 0) -> OrthogonalityGraph:
    _expect(isinstance(doc, dict), "record is not an object", offset)
    for key in ("p", "s", "qubits"):
        _expect(key in doc, f"missing field {key!r}", offset)
    p, s, qubits = doc["p"], doc["s"], doc["qubits"]
    _expect(_is_int(p) and _is_int(s), "p and s must be integers", offset)
    _expect(isinstance(qubits, list), "qubits must be a list", offset)
    out = []
    for q in qubits:
        _expect(isinstance(q, dict) and "regions" in q and "matching" in q, "malformed qubit entry", offset)
        regions, matching = q["regions"], q["matching"]
        _expect(
            isinstance(regions, list) and all(isinstance(r, list) and all(_is_int(v) for v in r) for r in regions),
            "regions must be lists of integers",
            offset,
        )
        _expect(
            isinstance(matching, list)
            and all(isinstance(m, list) and len(m) == 2 and all(_is_int(v) for v in m) for m in matching),
            "matching must be integer pairs",
            offset,
        )
        out.append(QubitFactorization(tuple(tuple(r) for r in regions), tuple(tuple(m) for m in matching)))
    g = OrthogonalityGraph(p, s, tuple(out))
    try:
        require_valid(g)
    except ValueError as exc:
        raise DecodeError(f"invalid graph: {exc}", offset) from None
    return g


def decode_graph(data: bytes | str) -> OrthogonalityGraph:
    text = data.decode("ascii") if isinstance(data, (bytes, bytearray)) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(exc.msg, exc.pos) from None
    except UnicodeDecodeError as exc:  # pragma: no cover - ascii decode above
        raise DecodeError("non-ascii input", exc.start) from None
    return graph_from_json(doc)


def catalog_header(**extra) -> dict:
    return {"format": CATALOG_FORMAT, "version": CATALOG_VERSION, **extra}


def dump_jsonl(lines: Iterable[dict]) -> str:
    return "".join(json.dumps(doc, separators=(",", ":"), sort_keys=False) + "\n" for doc in lines)
