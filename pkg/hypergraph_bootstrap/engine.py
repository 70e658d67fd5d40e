"""Synchronous K_k^(r)-bootstrap percolation.

Round ``t`` adds, all at once, every non-edge ``e`` of ``G_{t-1}`` lying in a
``k``-set ``S`` whose other ``r``-subsets are all edges of ``G_{t-1}``. Two
engines produce identical traces:

* the naive engine evaluates that rule over every ``k``-set of ``[0, n)``
  each round, as one numpy gather over a dense membership array;
* the incremental engine only looks at ``k``-sets containing an edge added in
  the previous round (for round 1, any edge of ``G_0``). A non-edge that was
  not infectable at round ``t`` can only become infectable at ``t + 1``
  through a witness meeting round ``t``'s additions.

Each infected edge is reported with its lexicographically least witness.
"""

import json
import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Set, TextIO, Tuple, Union

import numpy as np
from humanfriendly import format_size
from pydantic import ValidationError

from hypergraph_bootstrap import config
from hypergraph_bootstrap.core import (
    Edge,
    Hypergraph,
    binomial,
    edge_unkey,
    faces,
    insert_vertex,
    keys_of,
)
from hypergraph_bootstrap.exceptions import FormatError, InvalidConfig, ResourceError
from hypergraph_bootstrap.schemas import EngineKind, PercolationConfig

logger = logging.getLogger("hypergraph_bootstrap.engine")

Infection = Tuple[Edge, Optional[Edge]]

_EMPTY: frozenset = frozenset()


@dataclass
class RoundRecord:
    t: int
    added: List[Infection]

    @property
    def edges(self) -> List[Edge]:
        return [edge for edge, _ in self.added]


@dataclass
class RunResult:
    M: int
    rounds: List[RoundRecord]
    initial_edge_count: int
    final_edge_count: int
    percolated: bool
    truncated: bool
    engine_kind: EngineKind
    wall_ms: float = 0.0
    final: Optional[Hypergraph] = field(default=None, repr=False, compare=False)

    def edge_trace(self) -> List[List[Edge]]:
        """Round-by-round added edges, without witnesses."""
        return [record.edges for record in self.rounds]

    @property
    def one_edge_per_round(self) -> bool:
        return all(len(record.added) == 1 for record in self.rounds)

    def summary(self) -> str:
        return (
            f"M={self.M} percolated={str(self.percolated).lower()} "
            f"final_edges={self.final_edge_count} rounds={len(self.rounds)} "
            f"wall_ms={self.wall_ms:.3f}"
        )


def make_config(**kwargs) -> PercolationConfig:
    """Build a PercolationConfig, reporting validation failures as InvalidConfig."""
    try:
        return PercolationConfig(**kwargs)
    except ValidationError as e:
        raise InvalidConfig(str(e)) from e


def _check_k(r: int, k: int) -> None:
    if k <= r:
        raise InvalidConfig(f"Clique size k={k} must exceed the uniformity r={r}")


def _max_rounds(G: Hypergraph, cfg: PercolationConfig) -> int:
    return cfg.max_rounds if cfg.max_rounds is not None else G.total + 1


# --- Naive engine ---


def lex_combinations(n: int, k: int) -> np.ndarray:
    """All k-subsets of [0, n) as rows of an array, in lexicographic order."""
    dtype = np.int16 if n <= np.iinfo(np.int16).max else np.int32
    if k > n or k < 1:
        return np.zeros((0, max(k, 0)), dtype=dtype)
    rows = np.arange(0, n - k + 1, dtype=dtype).reshape(-1, 1)
    for depth in range(2, k + 1):
        last = rows[:, -1].astype(np.int64)
        hi = n - k + depth - 1
        counts = hi - last
        total = int(counts.sum())
        parent = np.repeat(np.arange(len(rows)), counts)
        starts = np.cumsum(counts) - counts
        offsets = np.arange(total) - np.repeat(starts, counts)
        appended = (last[parent] + 1 + offsets).astype(dtype)
        rows = np.column_stack([rows[parent], appended])
    return rows


class KSetTable:
    """Every k-set of [0, n) with the colex keys of its r-subsets.

    ``subkeys[s, p]`` is the key of the p-th r-subset (lexicographic position
    order) of the s-th k-set (lexicographic order).
    """

    def __init__(self, n: int, r: int, k: int, memory_budget_bytes: int):
        count = binomial(n, k)
        width = binomial(k, r)
        key_dtype = np.int32 if binomial(n, r) < 2**31 else np.int64
        estimate = count * (
            k * 4 + width * np.dtype(key_dtype).itemsize + width
        )
        if estimate > memory_budget_bytes:
            raise ResourceError(
                f"Naive engine table for n={n}, r={r}, k={k} needs about "
                f"{format_size(estimate)}, budget is {format_size(memory_budget_bytes)}"
            )
        self.n, self.r, self.k = n, r, k
        self.sets = lex_combinations(n, k)
        self.subkeys = np.empty((count, width), dtype=key_dtype)
        for p, positions in enumerate(combinations(range(k), r)):
            self.subkeys[:, p] = keys_of(self.sets[:, list(positions)], n, r)
        self.width = width
        logger.debug(
            f"Built k-set table n={n} r={r} k={k}: {count} sets x {width} subsets"
        )

    def infect(self, present: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Keys infectable from ``present`` (sorted) and the row of each least witness."""
        hits = present[self.subkeys]
        missing = self.width - np.count_nonzero(hits, axis=1)
        rows = np.flatnonzero(missing == 1)
        if rows.size == 0:
            return np.zeros(0, dtype=np.int64), rows
        holes = np.argmin(hits[rows], axis=1)
        keys = self.subkeys[rows, holes].astype(np.int64)
        # rows are ascending, so the first occurrence of a key is its least witness
        keys, first = np.unique(keys, return_index=True)
        return keys, rows[first]


@lru_cache(maxsize=2)
def _kset_table(n: int, r: int, k: int, memory_budget_bytes: int) -> KSetTable:
    return KSetTable(n, r, k, memory_budget_bytes)


def _naive_infections(
    G: Hypergraph, table: KSetTable, present: np.ndarray, record_witnesses: bool
) -> List[Infection]:
    keys, rows = table.infect(present)
    witnesses = table.sets[rows] if record_witnesses else None
    added = []
    for i, key in enumerate(keys.tolist()):
        witness = tuple(witnesses[i].tolist()) if witnesses is not None else None
        added.append((edge_unkey(key, G.n, G.r), witness))
    return added


def infect_round_naive(
    G: Hypergraph, k: int, memory_budget_bytes: Optional[int] = None
) -> List[Infection]:
    """Edges added to G by one round of the K_k^(r) process, in colex order, with witnesses."""
    _check_k(G.r, k)
    if k > G.n:
        return []
    budget = config.MEMORY_BUDGET_BYTES if memory_budget_bytes is None else memory_budget_bytes
    table = _kset_table(G.n, G.r, k, budget)
    return _naive_infections(G, table, G.mask(), record_witnesses=True)


def run_naive(G0: Hypergraph, cfg: PercolationConfig) -> RunResult:
    _check_k(G0.r, cfg.k)
    started = time.perf_counter()
    max_rounds = _max_rounds(G0, cfg)
    state = G0.copy()
    rounds: List[RoundRecord] = []
    truncated = False
    logger.info(
        f"Naive run: r={G0.r} n={G0.n} k={cfg.k} initial_edges={G0.edge_count}"
    )
    if cfg.k <= G0.n:
        table = _kset_table(G0.n, G0.r, cfg.k, cfg.memory_budget_bytes)
        present = G0.mask()
        while True:
            added = _naive_infections(state, table, present, cfg.record_witnesses)
            if not added:
                break
            if len(rounds) >= max_rounds:
                truncated = True
                break
            t = len(rounds) + 1
            for edge, _ in added:
                key = state.key(edge)
                state.add_key(key)
                present[key] = True
            rounds.append(RoundRecord(t=t, added=added))
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug(f"round {t}: +{len(added)} edges")
    return _finish(G0, state, rounds, truncated, EngineKind.NAIVE, started)


# --- Incremental engine ---


class LinkIndex:
    """Maps each (r-1)-set to the vertices completing it to an edge."""

    def __init__(self, edges: Iterable[Edge] = ()):
        self._links: Dict[Edge, Set[int]] = defaultdict(set)
        for edge in edges:
            self.add(edge)

    def add(self, edge: Edge) -> None:
        for i, face in enumerate(faces(edge)):
            self._links[face].add(edge[i])

    def link(self, face: Edge):
        return self._links.get(face, _EMPTY)

    def completions(self, edge: Edge) -> Set[int]:
        """Vertices v such that every r-subset of edge + v other than edge is present."""
        links = sorted((self.link(face) for face in faces(edge)), key=len)
        common = set(links[0])
        for other in links[1:]:
            common &= other
            if not common:
                break
        return common


class IncrementalEngine:
    """Frontier-driven rounds over a private copy of G0."""

    def __init__(self, G0: Hypergraph, k: int):
        _check_k(G0.r, k)
        self.k = k
        self.r = G0.r
        self.n = G0.n
        self.state = G0.copy()
        self.links = LinkIndex(G0.edges()) if k == G0.r + 1 else None
        self.frontier: List[Edge] = list(G0.edges())

    def _scan_linked(self, f: Edge, found: Dict[int, Edge]) -> None:
        # k = r + 1: S = f + v is missing exactly the r-subset (face_i + v)
        state = self.state
        fs = faces(f)
        links = [self.links.link(face) for face in fs]
        for i in range(self.r):
            others = sorted(links[:i] + links[i + 1 :], key=len)
            common = set(others[0])
            for other in others[1:]:
                common &= other
                if not common:
                    break
            if not common:
                continue
            common -= links[i]
            common.difference_update(f)
            for v in common:
                edge = insert_vertex(fs[i], v)
                key = state.key(edge)
                if key not in found:
                    found[key] = edge

    def _scan_general(self, f: Edge, found: Dict[int, Edge]) -> None:
        state = self.state
        rest = [v for v in range(self.n) if v not in f]
        for extra in combinations(rest, self.k - self.r):
            S = tuple(sorted(f + extra))
            hole = None
            for sub in combinations(S, self.r):
                key = state.key(sub)
                if not state.has_key(key):
                    if hole is not None:
                        hole = None
                        break
                    hole = (key, sub)
            else:
                if hole is not None and hole[0] not in found:
                    found[hole[0]] = hole[1]

    def least_witness(self, edge: Edge) -> Edge:
        if self.links is not None:
            return insert_vertex(edge, min(self.links.completions(edge)))
        state = self.state
        best = None
        rest = [v for v in range(self.n) if v not in edge]
        for extra in combinations(rest, self.k - self.r):
            S = tuple(sorted(edge + extra))
            if best is not None and S >= best:
                continue
            if all(
                sub == edge or state.has_canonical(sub)
                for sub in combinations(S, self.r)
            ):
                best = S
        return best

    def infections(self, record_witnesses: bool = True) -> List[Infection]:
        """The next round's additions, without committing them."""
        if self.k > self.n:
            return []
        found: Dict[int, Edge] = {}
        scan = self._scan_linked if self.links is not None else self._scan_general
        for f in self.frontier:
            scan(f, found)
        added = []
        for key in sorted(found):
            edge = found[key]
            witness = self.least_witness(edge) if record_witnesses else None
            added.append((edge, witness))
        return added

    def commit(self, added: List[Infection]) -> None:
        for edge, _ in added:
            self.state.add_key(self.state.key(edge))
            if self.links is not None:
                self.links.add(edge)
        self.frontier = [edge for edge, _ in added]


def infect_round_incremental(G: Hypergraph, k: int) -> List[Infection]:
    """One round from G via the frontier scan with every edge of G on the frontier."""
    return IncrementalEngine(G, k).infections(record_witnesses=True)


def run_incremental(G0: Hypergraph, cfg: PercolationConfig) -> RunResult:
    started = time.perf_counter()
    engine = IncrementalEngine(G0, cfg.k)
    max_rounds = _max_rounds(G0, cfg)
    rounds: List[RoundRecord] = []
    truncated = False
    logger.info(
        f"Incremental run: r={G0.r} n={G0.n} k={cfg.k} initial_edges={G0.edge_count}"
    )
    while True:
        added = engine.infections(cfg.record_witnesses)
        if not added:
            break
        if len(rounds) >= max_rounds:
            truncated = True
            break
        engine.commit(added)
        rounds.append(RoundRecord(t=len(rounds) + 1, added=added))
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(f"round {len(rounds)}: +{len(added)} edges")
    return _finish(G0, engine.state, rounds, truncated, EngineKind.INCREMENTAL, started)


def _finish(
    G0: Hypergraph,
    final: Hypergraph,
    rounds: List[RoundRecord],
    truncated: bool,
    kind: EngineKind,
    started: float,
) -> RunResult:
    result = RunResult(
        M=len(rounds),
        rounds=rounds,
        initial_edge_count=G0.edge_count,
        final_edge_count=final.edge_count,
        percolated=final.edge_count == final.total,
        truncated=truncated,
        engine_kind=kind,
        wall_ms=(time.perf_counter() - started) * 1000.0,
        final=final,
    )
    if truncated:
        logger.warning(f"Run stopped after max_rounds={result.M} with infections pending")
    logger.info(
        f"{kind.value} run finished: M={result.M} final_edges={result.final_edge_count} "
        f"percolated={result.percolated} wall_ms={result.wall_ms:.1f}"
    )
    return result


def run(G0: Hypergraph, cfg: PercolationConfig) -> RunResult:
    """Run the process to stabilisation with the engine named by ``cfg.engine_kind``."""
    if cfg.engine_kind == EngineKind.NAIVE:
        return run_naive(G0, cfg)
    return run_incremental(G0, cfg)


def infect_round(G: Hypergraph, k: int, engine_kind: EngineKind) -> List[Infection]:
    if engine_kind == EngineKind.NAIVE:
        return infect_round_naive(G, k)
    return infect_round_incremental(G, k)


# --- New copies ---


def new_copies(
    G_prev: Hypergraph,
    added: List[Edge],
    k: int,
    links: Optional[LinkIndex] = None,
) -> List[Edge]:
    """k-sets complete in G_prev + added but not in G_prev, sorted.

    ``links``, when given, must index exactly the edges of ``G_prev`` and is
    only used for k = r + 1.
    """
    if not added:
        return []
    r = G_prev.r
    added_keys = {G_prev.key(edge) for edge in added}

    def present(sub: Edge) -> bool:
        key = G_prev.key(sub)
        return key in added_keys or G_prev.has_key(key)

    copies: Set[Edge] = set()
    if links is not None and k == r + 1:
        extra = LinkIndex(added)
        for edge in added:
            common = None
            for face in faces(edge):
                candidates = links.link(face) | extra.link(face)
                common = set(candidates) if common is None else common & candidates
            for v in common - set(edge):
                copies.add(insert_vertex(edge, v))
        return sorted(copies)

    for edge in added:
        rest = [v for v in range(G_prev.n) if v not in edge]
        for extra_vertices in combinations(rest, k - r):
            S = tuple(sorted(edge + extra_vertices))
            if S in copies:
                continue
            if all(present(sub) for sub in combinations(S, r)):
                copies.add(S)
    return sorted(copies)


# --- Trace files ---


def trace_lines(result: RunResult, witnesses: bool = True) -> Iterable[str]:
    for record in result.rounds:
        edges = []
        for edge, witness in record.added:
            item = {"e": list(edge)}
            if witnesses and witness is not None:
                item["w"] = list(witness)
            edges.append(item)
        yield json.dumps({"t": record.t, "edges": edges}) + "\n"


def write_trace(
    result: RunResult, path: Union[str, Path], witnesses: bool = True
) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.writelines(trace_lines(result, witnesses))
    logger.debug(f"Wrote {len(result.rounds)} trace rounds to {path}")


def parse_trace(stream: TextIO) -> List[RoundRecord]:
    rounds = []
    for line_number, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
            added = [
                (
                    tuple(item["e"]),
                    tuple(item["w"]) if "w" in item else None,
                )
                for item in payload["edges"]
            ]
            rounds.append(RoundRecord(t=int(payload["t"]), added=added))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise FormatError(f"invalid trace record: {e}", line_number)
    return rounds


def read_trace(path: Union[str, Path]) -> List[RoundRecord]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_trace(f)
