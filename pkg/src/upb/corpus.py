"""Bundled fixture UPBs: every printed basis plus the generated 12-state family.

File names are ``p<qubits>s<states>[_tag].ket``; ``p3s8_Bnn`` are the 17
inequivalent complete 3-qubit product bases.  The ``p4s12_shifts_Bnn``
fixtures are Shifts on the last qubit's ``0`` side and ``Bnn`` on its ``1``
side, built on the fly.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .construct import combine, shifts
from .core import OrthogonalityGraph, SymbolicProductBasis, graph_from_states
from .notation import parse_basis

__all__ = ["fixture_names", "load_basis", "load_fixture", "fixtures", "complete_bases"]


def _files():
    return resources.files("upb") / "data" / "corpus"


@lru_cache(maxsize=None)
def _stored() -> dict[str, str]:
    out = {}
    for entry in _files().iterdir():
        if entry.name.endswith(".ket"):
            out[entry.name[: -len(".ket")]] = entry.read_text(encoding="ascii").strip()
    return dict(sorted(out.items()))


def complete_bases() -> list[str]:
    return [name for name in _stored() if name.startswith("p3s8_B")]


def fixture_names() -> list[str]:
    names = list(_stored())
    names += [f"p4s12_shifts_{name[len('p3s8_'):]}" for name in complete_bases()]
    return names


def load_basis(name: str) -> SymbolicProductBasis:
    """Ket text of a stored fixture, parsed (generated fixtures have no ket text of their own)."""
    try:
        return parse_basis(_stored()[name])
    except KeyError:
        raise KeyError(f"no stored fixture named {name!r}") from None


def load_fixture(name: str) -> OrthogonalityGraph:
    if name.startswith("p4s12_shifts_"):
        other = load_basis("p3s8_" + name[len("p4s12_shifts_") :])
        return graph_from_states(combine(shifts(), other))
    return graph_from_states(load_basis(name))


def fixtures() -> dict[str, OrthogonalityGraph]:
    return {name: load_fixture(name) for name in fixture_names()}
