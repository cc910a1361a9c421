"""``upb`` command line: parse, check, canonicalize, construct and census qubit UPBs.

Exit codes: 0 success (or a true answer), 1 false answer or domain error,
2 usage error.  Structured output is one JSON document per line; ``--pretty``
switches to human-readable text.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .canon import CatalogEntry, are_equivalent, canonical_graph, canonical_key
from .checker import classify, numeric_crosscheck
from .construct import (
    attainable_sizes,
    build_multiple_of_four,
    combine,
    ranges,
    shifts,
    split_qubit,
    standard_basis,
)
from .core import OrthogonalityGraph, SymbolicProductBasis, graph_from_states, profile_of
from .errors import BadArguments, Interrupted, MixedDimensions, UPBError
from .notation import basis_from_graph, decode_graph, format_basis, graph_to_json, parse_basis
from .search import ProfileConstraints, enumerate_profiles, full_search, read_catalog, write_catalog

__all__ = ["main", "build_parser", "merge_catalogs", "read_graph"]


def _dumps(doc) -> str:
    return json.dumps(doc, separators=(",", ":"))


def _text_arg(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        return Path(arg[1:]).read_text(encoding="ascii")
    return arg


def read_graph(arg: str) -> OrthogonalityGraph:
    """A ket string or a graph record, given inline, as ``@file`` or as ``-`` (stdin)."""
    text = _text_arg(arg).strip()
    if text.startswith("{"):
        return decode_graph(text)
    return graph_from_states(parse_basis(text))


def read_input(arg: str) -> tuple[OrthogonalityGraph, SymbolicProductBasis | None]:
    """Like :func:`read_graph` but keeps the parsed basis of ket input."""
    text = _text_arg(arg).strip()
    if text.startswith("{"):
        return decode_graph(text), None
    b = parse_basis(text)
    return graph_from_states(b), b


def _graph_doc(g: OrthogonalityGraph, b: SymbolicProductBasis | None = None) -> dict:
    return {"basis": format_basis(b if b is not None else basis_from_graph(g)), "graph": graph_to_json(g)}


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args) -> int:
    g, b = read_input(args.input)
    doc = _graph_doc(g, b)
    if args.pretty:
        print(doc["basis"])
        print(f"profile: {profile_of(g)}")
    else:
        print(_dumps({**doc, "profile": profile_of(g).to_json()["qubits"]}))
    return 0


def cmd_check(args) -> int:
    g = read_graph(args.input)
    verdict = classify(g)
    print(verdict.kind.value)
    doc: dict = {"graph": graph_to_json(g)}
    if verdict.missing:
        doc["missing"] = [list(pr) for pr in verdict.missing]
    if verdict.witness is not None:
        doc["witness"] = [{"qubit": q, "region": list(r)} for q, r in verdict.witness.regions(g)]
    if args.crosscheck:
        result = numeric_crosscheck(g, seed=args.seed)
        doc["crosscheck"] = {"agree": result.agree, "numeric": result.numeric_kind.value, "report": result.report}
    print(_dumps(doc))
    return 0 if verdict.is_upb else 1


def cmd_canon(args) -> int:
    g = read_graph(args.input)
    cg = canonical_graph(g)
    if args.pretty:
        print(format_basis(basis_from_graph(cg)))
    else:
        print(_dumps({"key": canonical_key(g).decode("ascii"), "basis": format_basis(basis_from_graph(cg))}))
    return 0


def cmd_equiv(args) -> int:
    same = are_equivalent(read_graph(args.first), read_graph(args.second))
    print("true" if same else "false")
    return 0 if same else 1


def _constraints(args) -> ProfileConstraints:
    return ProfileConstraints(
        args.p,
        args.s,
        allow_unmatched_regions=args.allow_unmatched,
        use_lemma_A1=not args.no_lemma_a1,
        use_lemma_A2=not args.no_lemma_a2,
        use_odd_pair_rule=args.odd_pair_rule,
    )


def cmd_search(args) -> int:
    if args.workers < 1:
        raise BadArguments("--workers must be at least 1")
    c = _constraints(args)
    resume = args.resume or f"{args.output}.resume.jsonl"

    def progress(done: int, total: int) -> None:
        if args.verbose:
            print(f"\r{done}/{total} profiles", end="", file=sys.stderr, flush=True)

    try:
        catalog, report = full_search(args.p, args.s, c, workers=args.workers, resume=resume, progress=progress)
    except Interrupted as exc:
        print(f"\ninterrupted; rerun with --resume {resume}", file=sys.stderr)
        raise exc
    if args.verbose:
        print(file=sys.stderr)
    write_catalog(args.output, catalog, args.p, args.s)
    if args.resume is None:
        os.remove(resume)
    doc = report.to_json()
    doc.pop("completed_units")
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_json(), indent=1) + "\n", encoding="ascii")
    print(report.table() if args.pretty else _dumps(doc))
    return 0


def cmd_profiles(args) -> int:
    c = _constraints(args)
    stats: dict = {}
    profiles = enumerate_profiles(c, stats)
    if not args.count:
        for pr in profiles:
            print(str(pr) if args.pretty else _dumps(pr.to_json()))
    summary = {"count": len(profiles), "candidates": stats["candidates"], "pruned": stats["pruned"], "constraints": c.describe()}
    print(_dumps({"summary": summary}))
    return 0


def cmd_construct(args) -> int:
    m = args.method
    b = None
    if m == "shifts":
        b = shifts()
        g = graph_from_states(b)
    elif m == "standard":
        _need(args, "p")
        b = standard_basis(args.p)
        g = graph_from_states(b)
    elif m == "mult4":
        _need(args, "p", "s")
        g = build_multiple_of_four(args.p, args.s)
    elif m == "combine":
        if len(args.inputs) != 2:
            raise BadArguments("combine takes exactly two inputs")
        u1, u2 = (_symbolic_or_graph(x) for x in args.inputs)
        out = combine(u1, u2)
        if isinstance(out, OrthogonalityGraph):
            g = out
        else:
            b, g = out, graph_from_states(out)
    elif m == "split":
        if len(args.inputs) != 1 or args.qubit is None:
            raise BadArguments("split takes one input and --qubit")
        g = split_qubit(read_graph(args.inputs[0]), args.qubit)
    else:  # pragma: no cover - argparse restricts choices
        raise BadArguments(m)
    doc = _graph_doc(g, b)
    print(doc["basis"] if args.pretty else _dumps(doc))
    return 0


def _need(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise BadArguments(f"--method {args.method} needs " + ", ".join("--" + n for n in missing))


def _symbolic_or_graph(arg: str):
    text = _text_arg(arg).strip()
    return decode_graph(text) if text.startswith("{") else parse_basis(text)


def cmd_sizes(args) -> int:
    cat = attainable_sizes(args.p)
    if args.pretty:
        print(f"p = {args.p}")
        print("attainable: " + ", ".join(ranges(sorted(cat.attainable))))
        print("impossible: " + ", ".join(ranges(sorted(cat.impossible))))
        print("unknown:    " + (", ".join(ranges(sorted(cat.unknown))) or "none"))
        if cat.from_combine:
            print(f"combining two {args.p - 1}-qubit UPBs: " + ", ".join(ranges(sorted(cat.from_combine))))
        print(f"largest gap: {cat.proven_gap} proven, {cat.possible_gap} possible")
    else:
        print(_dumps(cat.to_json()))
    return 0


def merge_catalogs(paths: Sequence[str | os.PathLike]) -> tuple[dict, list[CatalogEntry]]:
    """Union of catalogs of one (p, s): first representative per key, largest multiplicity kept.

    Taking the maximum (not the sum) makes merging idempotent.
    """
    if not paths:
        raise BadArguments("nothing to merge")
    header = None
    merged: dict[bytes, CatalogEntry] = {}
    for path in paths:
        h, entries = read_catalog(path)
        dims = (h.get("p"), h.get("s"))
        if entries and None in dims:
            dims = (entries[0].graph.p, entries[0].graph.s)
        if header is None:
            header = {**h, "p": dims[0], "s": dims[1]}
        elif dims != (header["p"], header["s"]):
            raise MixedDimensions(f"{path} holds (p,s)={dims}, expected ({header['p']},{header['s']})")
        for e in entries:
            sources = sorted(set(e.provenance.get("sources", [])) | {str(path)})
            have = merged.get(e.key)
            if have is None:
                merged[e.key] = CatalogEntry(e.key, e.graph, e.multiplicity, {**e.provenance, "sources": sources})
            else:
                have.multiplicity = max(have.multiplicity, e.multiplicity)
                have.provenance["sources"] = sorted(set(have.provenance["sources"]) | set(sources))
    return header, [merged[k] for k in sorted(merged)]


def cmd_merge(args) -> int:
    header, entries = merge_catalogs(args.catalogs)
    write_catalog(args.output, entries, header["p"], header["s"])
    print(_dumps({"p": header["p"], "s": header["s"], "classes": len(entries)}))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_constraint_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, required=True, help="number of qubits")
    sp.add_argument("--s", type=int, required=True, help="number of states")
    sp.add_argument("--allow-unmatched", action="store_true", help="also enumerate regions with no orthogonal partner")
    sp.add_argument("--no-lemma-a1", action="store_true", help="disable the single-component qubit prune")
    sp.add_argument("--no-lemma-a2", action="store_true", help="disable the guaranteed-cover prune")
    sp.add_argument("--odd-pair-rule", action="store_true", help="enable the optional odd-size prune")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="upb", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")
    inp = "ket string (e.g. 000,1aA,A1a,aA1), graph record JSON, @FILE or - for stdin"

    sp = sub.add_parser("parse", help="parse a ket string into a graph record")
    sp.add_argument("input", help=inp)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("check", help="decide whether a product set is a UPB")
    sp.add_argument("input", help=inp)
    sp.add_argument("--crosscheck", action="store_true", help="also re-decide numerically from random vectors")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("canon", help="canonical key of a graph")
    sp.add_argument("input", help=inp)
    sp.set_defaults(func=cmd_canon)

    sp = sub.add_parser("equiv", help="are two graphs equivalent (exit 0) or not (exit 1)")
    sp.add_argument("first", help=inp)
    sp.add_argument("second", help=inp)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("search", help="classify all UPBs of a given size")
    _add_constraint_flags(sp)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--resume", help="work log; completed profiles listed there are skipped")
    sp.add_argument("--report", help="also write the full report JSON here")
    sp.add_argument("-o", "--output", required=True, help="catalog file (JSONL)")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("profiles", help="list size profiles surviving the necessary conditions")
    _add_constraint_flags(sp)
    sp.add_argument("--count", action="store_true", help="print only the summary line")
    sp.set_defaults(func=cmd_profiles)

    sp = sub.add_parser("construct", help="build a UPB")
    sp.add_argument("--method", required=True, choices=["shifts", "standard", "combine", "mult4", "split"])
    sp.add_argument("--p", type=int)
    sp.add_argument("--s", type=int)
    sp.add_argument("--qubit", type=int, help="qubit to split")
    sp.add_argument("inputs", nargs="*", help=inp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("sizes", help="which sizes admit a p-qubit UPB")
    sp.add_argument("--p", type=int, required=True)
    sp.set_defaults(func=cmd_sizes)

    sp = sub.add_parser("merge", help="merge catalogs of the same (p, s)")
    sp.add_argument("catalogs", nargs="+")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_merge)

    for sp in sub.choices.values():
        sp.add_argument("--pretty", action="store_true", help="human-readable output")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BadArguments as exc:
        parser.print_usage(sys.stderr)
        print(f"upb: error: {exc}", file=sys.stderr)
        return 2
    except (UPBError, OSError) as exc:
        print(f"upb: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
