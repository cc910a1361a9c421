"""Step 3 and orchestration: run every profile, merge, deduplicate, persist."""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from ..canon import CatalogEntry, canonical_key, dedupe
from ..core import SizeProfile
from ..errors import DecodeError, Interrupted, MixedDimensions, VersionMismatch
from ..notation import CATALOG_FORMAT, CATALOG_VERSION, catalog_header, decode_graph, encode_graph, graph_from_json
from .placement import search_profile
from .profiles import ProfileConstraints, enumerate_profiles, register_search_result

__all__ = ["SearchReport", "full_search", "profile_hash", "write_catalog", "read_catalog"]


@dataclass
class SearchReport:
    p: int
    s: int
    constraints: dict
    profiles_enumerated: int = 0
    profiles_pruned: dict = field(default_factory=dict)
    profiles_searched: int = 0
    profiles_resumed: int = 0
    raw_graphs: int = 0
    classes: int = 0
    seconds: dict = field(default_factory=dict)
    completed_units: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        rows = [
            ("p, s", f"{self.p}, {self.s}"),
            ("profiles enumerated", self.profiles_enumerated),
            *((f"  pruned by {rule}", n) for rule, n in sorted(self.profiles_pruned.items())),
            ("profiles searched", self.profiles_searched),
            ("  of which resumed", self.profiles_resumed),
            ("raw graphs", self.raw_graphs),
            ("classes", self.classes),
            *((f"seconds ({phase})", f"{t:.2f}") for phase, t in self.seconds.items()),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def profile_hash(pr: SizeProfile) -> str:
    doc = json.dumps(pr.normalized().to_json(), separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(doc.encode("ascii")).hexdigest()[:20]


def _run_unit(doc: dict) -> tuple[str, list[tuple[str, str]]]:
    pr = SizeProfile.from_json(doc)
    found = [(canonical_key(g).decode("ascii"), encode_graph(g).decode("ascii")) for g in search_profile(pr)]
    # one graph per class per unit keeps resume files small
    by_key = {}
    for key, rec in found:
        by_key.setdefault(key, rec)
    return profile_hash(pr), sorted(by_key.items())


def _load_resume(path: Path) -> dict[str, list[tuple[str, str]]]:
    done: dict[str, list[tuple[str, str]]] = {}
    if not path.exists():
        return done
    with path.open("r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError:
                break  # torn final line from an interrupted write
            done[doc["profile"]] = [tuple(x) for x in doc["graphs"]]
    return done


def full_search(
    p: int,
    s: int,
    c: ProfileConstraints | None = None,
    workers: int = 1,
    resume: str | os.PathLike | None = None,
    cancel: Callable[[], bool] | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> tuple[list[CatalogEntry], SearchReport]:
    """Classify all p-qubit UPBs of size s.

    ``resume`` names a JSONL work log; completed profiles found there are
    not searched again and newly completed ones are appended, so an
    interrupted run picks up where it stopped.  The returned catalog is
    sorted by canonical key and does not depend on ``workers``.
    """
    c = c or ProfileConstraints(p, s)
    if (c.p, c.s) != (p, s):
        raise ValueError(f"constraints are for ({c.p},{c.s}), search is for ({p},{s})")
    report = SearchReport(p, s, c.describe())

    t0 = time.perf_counter()
    stats: dict = {}
    profiles = enumerate_profiles(c, stats)
    report.profiles_enumerated = stats["candidates"]
    report.profiles_pruned = stats["pruned"]
    report.seconds["enumerate"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    log_path = Path(resume) if resume is not None else None
    done = _load_resume(log_path) if log_path else {}
    hashes = [profile_hash(pr) for pr in profiles]
    todo = [pr for pr, h in zip(profiles, hashes) if h not in done]
    report.profiles_resumed = len(profiles) - len(todo)
    results: dict[str, list[tuple[str, str]]] = {h: done[h] for h in hashes if h in done}

    log = log_path.open("a", encoding="ascii") if log_path else None
    pool = ProcessPoolExecutor(workers) if workers > 1 and len(todo) > 1 else None
    try:
        docs = [pr.to_json() for pr in todo]
        stream: Iterator = pool.map(_run_unit, docs, chunksize=max(1, len(docs) // (workers * 16) if workers else 1)) if pool else map(_run_unit, docs)
        for n, (h, found) in enumerate(stream, 1):
            results[h] = found
            if log:
                log.write(json.dumps({"profile": h, "graphs": found}, separators=(",", ":")) + "\n")
                log.flush()
            if progress:
                progress(n, len(todo))
            if cancel and cancel():
                raise KeyboardInterrupt
    except KeyboardInterrupt:
        if pool:
            pool.shutdown(wait=False, cancel_futures=True)
            pool = None
        raise Interrupted(str(log_path) if log_path else None) from None
    finally:
        if pool:
            pool.shutdown()
        if log:
            log.close()
    report.profiles_searched = len(profiles)
    report.completed_units = hashes
    report.seconds["search"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    keys, graphs = [], []
    for h in hashes:
        for key, rec in results[h]:
            keys.append(key.encode("ascii"))
            graphs.append(decode_graph(rec))
    report.raw_graphs = len(graphs)
    catalog = dedupe(graphs, keys)
    report.classes = len(catalog)
    report.seconds["dedupe"] = time.perf_counter() - t0
    register_search_result(p, s, len(catalog))
    return catalog, report


# ---------------------------------------------------------------------------
# catalog files


def write_catalog(path: str | os.PathLike, entries: Iterable[CatalogEntry], p: int, s: int) -> None:
    """Header line then one entry per line, written atomically."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="ascii") as fh:
        fh.write(json.dumps(catalog_header(p=p, s=s), separators=(",", ":")) + "\n")
        for e in entries:
            fh.write(json.dumps(e.to_json(), separators=(",", ":")) + "\n")
    os.replace(tmp, path)


def read_catalog(path: str | os.PathLike) -> tuple[dict, list[CatalogEntry]]:
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines:
        raise DecodeError("empty catalog", 0)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DecodeError(f"bad header: {exc.msg}", exc.pos) from None
    if not isinstance(header, dict) or header.get("format") != CATALOG_FORMAT:
        raise DecodeError("not a upb catalog", 0)
    if header.get("version") != CATALOG_VERSION:
        raise VersionMismatch(f"catalog version {header.get('version')!r}, expected {CATALOG_VERSION}")
    entries = []
    offset = len(lines[0]) + 1
    for line in lines[1:]:
        if line.strip():
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DecodeError(exc.msg, offset + exc.pos) from None
            entry = CatalogEntry(
                doc["key"].encode("ascii"),
                graph_from_json(doc["graph"], offset),
                int(doc.get("multiplicity", 1)),
                dict(doc.get("provenance", {})),
            )
            if (entry.graph.p, entry.graph.s) != (header.get("p", entry.graph.p), header.get("s", entry.graph.s)):
                raise MixedDimensions(f"entry with (p,s)=({entry.graph.p},{entry.graph.s}) in a ({header['p']},{header['s']}) catalog")
            entries.append(entry)
        offset += len(line) + 1
    return header, entries
