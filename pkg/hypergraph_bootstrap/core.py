"""Uniform hypergraphs with canonical edges, colex keys and a text format.

Vertices are dense 0-based integers. An edge is the sorted tuple of its ``r``
vertices; its key is the colexicographic rank
``sum(C(v_i, i) for i, v_i in enumerate(edge, start=1))``, so the keys of all
``r``-subsets of ``[0, n)`` are exactly ``[0, C(n, r))``.
"""

import logging
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
from humanfriendly import format_size

from hypergraph_bootstrap import config
from hypergraph_bootstrap.exceptions import (
    DuplicateEdge,
    FormatError,
    InvalidEdge,
    ResourceError,
)

logger = logging.getLogger("hypergraph_bootstrap.core")

VertexId = int
Edge = Tuple[int, ...]

STORE_HASHED = "hashed"
STORE_DENSE = "dense"
STORE_AUTO = "auto"


# --- Binomial coefficients and colex ranking ---


class PascalTable:
    """Binomial coefficients C(v, i) for 0 <= v <= n and 0 <= i <= r.

    ``rows[i][v]`` is the python integer, ``array[i, v]`` the same value as
    int64 for vectorised key computation.
    """

    def __init__(self, n: int, r: int):
        if n < 0 or r < 0:
            raise InvalidEdge(f"Pascal table needs n, r >= 0 (got n={n}, r={r})")
        rows = [[0] * (n + 1) for _ in range(r + 1)]
        for v in range(n + 1):
            rows[0][v] = 1
            for i in range(1, min(v, r) + 1):
                rows[i][v] = rows[i - 1][v - 1] + rows[i][v - 1]
        self.n = n
        self.r = r
        self.rows = rows
        self.total = rows[r][n]
        if self.total >= 2**config.KEY_BITS:
            raise ResourceError(
                f"C({n},{r}) = {self.total} does not fit a {config.KEY_BITS}-bit edge key"
            )
        self.array = np.array(rows, dtype=np.int64)

    def __call__(self, v: int, i: int) -> int:
        return self.rows[i][v]


@lru_cache(maxsize=64)
def pascal_table(n: int, r: int) -> PascalTable:
    return PascalTable(n, r)


def binomial(n: int, r: int) -> int:
    """C(n, r) read from the cached Pascal table (0 when r > n)."""
    if r < 0 or n < 0:
        return 0
    if r > n:
        return 0
    return pascal_table(n, r).total


def canonical_edge(vertices: Iterable[int], r: int, n: int) -> Edge:
    """Sort ``vertices`` into the canonical edge of an r-uniform hypergraph on n vertices."""
    try:
        edge = tuple(sorted(int(v) for v in vertices))
    except (TypeError, ValueError) as e:
        raise InvalidEdge(f"Edge vertices must be integers: {e}") from e
    if len(edge) != r:
        raise InvalidEdge(f"Edge {list(edge)} has {len(edge)} vertices, expected {r}")
    for a, b in zip(edge, edge[1:]):
        if a == b:
            raise InvalidEdge(f"Edge {list(edge)} repeats vertex {a}")
    if edge and (edge[0] < 0 or edge[-1] >= n):
        raise InvalidEdge(f"Edge {list(edge)} has a vertex outside [0, {n})")
    return edge


def edge_key(edge: Sequence[int], n: int) -> int:
    """Colexicographic rank of a canonical edge among all r-subsets of [0, n).

    Raises :class:`InvalidEdge` unless the vertices are strictly increasing and in [0, n).
    """
    if any(a >= b for a, b in zip(edge, edge[1:])):
        raise InvalidEdge(f"Edge {list(edge)} is not strictly increasing")
    if edge and (edge[0] < 0 or edge[-1] >= n):
        raise InvalidEdge(f"Edge {list(edge)} has a vertex outside [0, {n})")
    rows = pascal_table(n, len(edge)).rows
    key = 0
    for i, v in enumerate(edge, start=1):
        key += rows[i][v]
    return key


def edge_unkey(key: int, n: int, r: int) -> Edge:
    """Inverse of :func:`edge_key`."""
    table = pascal_table(n, r)
    if not 0 <= key < table.total:
        raise InvalidEdge(f"Key {key} outside [0, C({n},{r}))")
    rows = table.rows
    edge = [0] * r
    v = n - 1
    for i in range(r, 0, -1):
        row = rows[i]
        while row[v] > key:
            v -= 1
        edge[i - 1] = v
        key -= row[v]
        v -= 1
    return tuple(edge)


def keys_of(edges: np.ndarray, n: int, r: int) -> np.ndarray:
    """Vectorised :func:`edge_key` for an integer array of canonical edges (..., r)."""
    table = pascal_table(n, r).array
    keys = np.zeros(edges.shape[:-1], dtype=np.int64)
    for i in range(r):
        keys += table[i + 1, edges[..., i]]
    return keys


def faces(edge: Edge) -> List[Edge]:
    """The (r-1)-subsets of an edge, face ``i`` omitting ``edge[i]``."""
    return [edge[:i] + edge[i + 1 :] for i in range(len(edge))]


def insert_vertex(face: Edge, v: int) -> Edge:
    return tuple(sorted(face + (v,)))


# --- Edge stores ---


class HashedEdgeStore:
    """Edge keys in a python set."""

    kind = STORE_HASHED

    def __init__(self, total: int):
        self.total = total
        self._keys = set()

    def add(self, key: int) -> bool:
        if key in self._keys:
            return False
        self._keys.add(key)
        return True

    def discard(self, key: int) -> bool:
        if key in self._keys:
            self._keys.remove(key)
            return True
        return False

    def __contains__(self, key: int) -> bool:
        return key in self._keys

    def __len__(self) -> int:
        return len(self._keys)

    def keys(self) -> List[int]:
        return sorted(self._keys)

    def mask(self) -> np.ndarray:
        bits = np.zeros(self.total, dtype=bool)
        if self._keys:
            bits[np.fromiter(self._keys, dtype=np.int64, count=len(self._keys))] = True
        return bits

    def copy(self) -> "HashedEdgeStore":
        other = HashedEdgeStore(self.total)
        other._keys = set(self._keys)
        return other


class DenseEdgeStore:
    """Edge keys as a boolean numpy array over [0, C(n, r))."""

    kind = STORE_DENSE

    def __init__(self, total: int):
        self.total = total
        self._bits = np.zeros(total, dtype=bool)
        self._count = 0

    def add(self, key: int) -> bool:
        if self._bits[key]:
            return False
        self._bits[key] = True
        self._count += 1
        return True

    def discard(self, key: int) -> bool:
        if self._bits[key]:
            self._bits[key] = False
            self._count -= 1
            return True
        return False

    def __contains__(self, key: int) -> bool:
        return bool(self._bits[key])

    def __len__(self) -> int:
        return self._count

    def keys(self) -> List[int]:
        return np.flatnonzero(self._bits).tolist()

    def mask(self) -> np.ndarray:
        return self._bits.copy()

    def copy(self) -> "DenseEdgeStore":
        other = DenseEdgeStore.__new__(DenseEdgeStore)
        other.total = self.total
        other._bits = self._bits.copy()
        other._count = self._count
        return other


def make_store(
    n: int,
    r: int,
    kind: Optional[str] = None,
    memory_budget_bytes: Optional[int] = None,
) -> Union[HashedEdgeStore, DenseEdgeStore]:
    """Pick an edge store for an r-uniform hypergraph on n vertices."""
    kind = (kind or config.EDGE_STORE).lower()
    budget = config.MEMORY_BUDGET_BYTES if memory_budget_bytes is None else memory_budget_bytes
    total = pascal_table(n, r).total
    if kind == STORE_HASHED:
        return HashedEdgeStore(total)
    if kind == STORE_DENSE:
        if total > budget:
            raise ResourceError(
                f"Dense edge store needs {format_size(total)}, budget is {format_size(budget)}"
            )
        return DenseEdgeStore(total)
    if kind == STORE_AUTO:
        if total <= budget:
            return DenseEdgeStore(total)
        logger.warning(
            f"C({n},{r}) = {total} exceeds the dense budget of {format_size(budget)}; using hashed store"
        )
        return HashedEdgeStore(total)
    raise ValueError(f"Unknown edge store '{kind}'. Must be one of: hashed, dense, auto")


# --- Hypergraph ---


class Hypergraph:
    """An r-uniform hypergraph on vertices [0, n).

    Mutation is single-writer; a hypergraph that is no longer mutated may be
    read from several threads.
    """

    def __init__(
        self,
        r: int,
        n: int,
        edges: Iterable[Iterable[int]] = (),
        store: Optional[str] = None,
        memory_budget_bytes: Optional[int] = None,
    ):
        if r < 2:
            raise InvalidEdge(f"Uniformity must be at least 2 (got r={r})")
        if n < 0:
            raise InvalidEdge(f"Vertex count must be non-negative (got n={n})")
        self.r = r
        self.n = n
        self._table = pascal_table(n, r)
        self._store = make_store(n, r, store, memory_budget_bytes)
        for edge in edges:
            self.add_edge(edge)

    @property
    def store_kind(self) -> str:
        return self._store.kind

    @property
    def total(self) -> int:
        """C(n, r), the number of edges of the complete hypergraph."""
        return self._table.total

    def canonical(self, vertices: Iterable[int]) -> Edge:
        return canonical_edge(vertices, self.r, self.n)

    def key(self, edge: Edge) -> int:
        rows = self._table.rows
        key = 0
        for i, v in enumerate(edge, start=1):
            key += rows[i][v]
        return key

    def unkey(self, key: int) -> Edge:
        return edge_unkey(key, self.n, self.r)

    def add_edge(self, vertices: Iterable[int]) -> bool:
        """Insert an edge; returns False if it was already present."""
        return self._store.add(self.key(self.canonical(vertices)))

    def add_key(self, key: int) -> bool:
        return self._store.add(key)

    def remove_edge(self, vertices: Iterable[int]) -> bool:
        return self._store.discard(self.key(self.canonical(vertices)))

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return self.key(self.canonical(vertices)) in self._store

    def has_key(self, key: int) -> bool:
        return key in self._store

    def __contains__(self, vertices) -> bool:
        return self.has_edge(vertices)

    def has_canonical(self, edge: Edge) -> bool:
        """Membership for an edge already known to be canonical."""
        return self.key(edge) in self._store

    @property
    def edge_count(self) -> int:
        return len(self._store)

    def __len__(self) -> int:
        return len(self._store)

    def keys(self) -> List[int]:
        """Edge keys in increasing (colex) order."""
        return self._store.keys()

    def edges(self) -> Iterator[Edge]:
        """Edges in colex order."""
        for key in self._store.keys():
            yield edge_unkey(key, self.n, self.r)

    def mask(self) -> np.ndarray:
        """Boolean membership array over all C(n, r) keys."""
        return self._store.mask()

    def copy(self) -> "Hypergraph":
        other = Hypergraph.__new__(Hypergraph)
        other.r = self.r
        other.n = self.n
        other._table = self._table
        other._store = self._store.copy()
        return other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.r == other.r
            and self.n == other.n
            and self.edge_count == other.edge_count
            and self.keys() == other.keys()
        )

    def __repr__(self) -> str:
        return f"Hypergraph(r={self.r}, n={self.n}, edges={self.edge_count}, store={self.store_kind})"


def is_complete(G: Hypergraph) -> bool:
    """True iff G is the complete r-uniform hypergraph on its vertex set."""
    return G.edge_count == G.total


def relabel(G: Hypergraph, perm: Sequence[int]) -> Hypergraph:
    """Apply the vertex permutation ``v -> perm[v]``."""
    if sorted(perm) != list(range(G.n)):
        raise InvalidEdge(f"Relabeling must be a permutation of [0, {G.n})")
    return Hypergraph(
        G.r, G.n, ([perm[v] for v in edge] for edge in G.edges()), store=G.store_kind
    )


def all_edges(n: int, r: int) -> Iterator[Edge]:
    """Every r-subset of [0, n) in lexicographic order."""
    return combinations(range(n), r)


# --- Text format ---


def _data_lines(stream: TextIO) -> Iterator[Tuple[int, List[str]]]:
    for line_number, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield line_number, stripped.split()


def _parse_ints(tokens: List[str], line_number: int) -> List[int]:
    try:
        return [int(tok, 10) for tok in tokens]
    except ValueError:
        raise FormatError(f"expected base-10 integers, got '{' '.join(tokens)}'", line_number)


def parse_hypergraph(stream: TextIO, store: Optional[str] = None) -> Hypergraph:
    """Read the ``r n m`` text format from an open stream."""
    lines = _data_lines(stream)
    try:
        line_number, tokens = next(lines)
    except StopIteration:
        raise FormatError("missing 'r n m' header")
    header = _parse_ints(tokens, line_number)
    if len(header) != 3:
        raise FormatError(f"header must be 'r n m', got {len(header)} values", line_number)
    r, n, m = header
    if r < 2 or n < 0 or m < 0:
        raise FormatError(f"invalid header r={r} n={n} m={m}", line_number)
    try:
        G = Hypergraph(r, n, store=store)
    except InvalidEdge as e:
        raise FormatError(str(e), line_number)
    if m > G.total:
        raise FormatError(f"m={m} exceeds C({n},{r}) = {G.total}", line_number)

    count = 0
    for line_number, tokens in lines:
        if count == m:
            raise FormatError(f"more than m={m} edge lines", line_number)
        vertices = _parse_ints(tokens, line_number)
        try:
            edge = canonical_edge(vertices, r, n)
        except InvalidEdge as e:
            raise FormatError(str(e), line_number)
        if not G.add_key(G.key(edge)):
            raise DuplicateEdge(f"duplicate edge {list(edge)}", line_number)
        count += 1
    if count != m:
        raise FormatError(f"header declares m={m} edges, found {count}")
    return G


def read_hypergraph(path: Union[str, Path], store: Optional[str] = None) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as f:
        G = parse_hypergraph(f, store=store)
    logger.debug(f"Read {G!r} from {path}")
    return G


def format_hypergraph(G: Hypergraph, comments: Iterable[str] = ()) -> Iterator[str]:
    """Lines of the text format, edges in colex order."""
    for comment in comments:
        yield f"# {comment}\n"
    yield f"{G.r} {G.n} {G.edge_count}\n"
    for edge in G.edges():
        yield " ".join(str(v) for v in edge) + "\n"


def write_hypergraph(
    G: Hypergraph, path: Union[str, Path], comments: Iterable[str] = ()
) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.writelines(format_hypergraph(G, comments))
    logger.debug(f"Wrote {G!r} to {path}")

