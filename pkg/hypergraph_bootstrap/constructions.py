"""Initial infections: the slow K_4^(3) construction and small reference hypergraphs.

The slow construction for parameter ``n`` lives on ``9n - 4`` vertices named

* top vertices ``t_1 .. t_n``,
* bottom vertices ``b_1 .. b_n`` and ``b_-1 .. b_-(n-1)``,
* middle vertices ``m_-(n-1) .. m_2n`` forming a path,
* dummy vertices ``d_{i,1}, d_{i,2}, d_{i,3}`` for ``1 <= i <= n - 1``,

laid out on dense indices as

    t_i -> i - 1            b_j  -> n + j - 1        b_-j -> 2n + j - 1
    m_l -> l + 4n - 2       d_{i,s} -> 6n - 1 + 3(i - 1) + (s - 1)

The process started from it infects exactly one edge per round, in the order
produced by :func:`expected_sequence`.
"""

import logging
import random
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Union

from hypergraph_bootstrap.core import Edge, Hypergraph, all_edges, binomial
from hypergraph_bootstrap.exceptions import FormatError, InvalidEdge, UnsupportedParameter
from hypergraph_bootstrap.schemas import Label, LabelKind

logger = logging.getLogger("hypergraph_bootstrap.constructions")

# stage value used for the top-swap chain in ExpectedStep
DUMMY_STAGE = 0


def _require_n(n: int) -> None:
    if n < 2:
        raise UnsupportedParameter(f"n must be ≥ 2 (got n={n})")


class SlowLabels:
    """The fixed label <-> index map of the slow construction with parameter n."""

    def __init__(self, n: int):
        _require_n(n)
        self.n = n
        self.vertex_count = 9 * n - 4

    def t(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise UnsupportedParameter(f"t_{i} outside 1..{self.n}")
        return i - 1

    def b(self, j: int) -> int:
        """b_j for j > 0, b_-|j| for j < 0."""
        n = self.n
        if 1 <= j <= n:
            return n + j - 1
        if 1 <= -j <= n - 1:
            return 2 * n - j - 1
        raise UnsupportedParameter(f"b_{j} outside -{n - 1}..{n}")

    def m(self, l: int) -> int:
        n = self.n
        if not -(n - 1) <= l <= 2 * n:
            raise UnsupportedParameter(f"m_{l} outside -{n - 1}..{2 * n}")
        return l + 4 * n - 2

    def d(self, i: int, s: int) -> int:
        if not (1 <= i <= self.n - 1 and 1 <= s <= 3):
            raise UnsupportedParameter(f"d_{i},{s} outside its range")
        return 6 * self.n - 1 + 3 * (i - 1) + (s - 1)

    def vertex(self, label: Union[Label, str]) -> int:
        if isinstance(label, str):
            label = Label.parse(label)
        if label.kind == LabelKind.TOP:
            return self.t(label.index)
        if label.kind == LabelKind.BOTTOM_POS:
            return self.b(label.index)
        if label.kind == LabelKind.BOTTOM_NEG:
            return self.b(-label.index)
        if label.kind == LabelKind.MIDDLE:
            return self.m(label.index)
        return self.d(label.index, label.slot)

    def label(self, v: int) -> Label:
        n = self.n
        if not 0 <= v < self.vertex_count:
            raise InvalidEdge(f"Vertex {v} outside [0, {self.vertex_count})")
        if v < n:
            return Label(kind=LabelKind.TOP, index=v + 1)
        if v < 2 * n:
            return Label(kind=LabelKind.BOTTOM_POS, index=v - n + 1)
        if v < 3 * n - 1:
            return Label(kind=LabelKind.BOTTOM_NEG, index=v - 2 * n + 1)
        if v < 6 * n - 1:
            return Label(kind=LabelKind.MIDDLE, index=v - 4 * n + 2)
        offset = v - (6 * n - 1)
        return Label(kind=LabelKind.DUMMY, index=offset // 3 + 1, slot=offset % 3 + 1)

    def labels(self) -> List[Label]:
        return [self.label(v) for v in range(self.vertex_count)]

    def triple(self, *vertices: int) -> Edge:
        return tuple(sorted(vertices))


@dataclass
class LabeledConstruction:
    G0: Hypergraph
    labels: SlowLabels
    e0: Edge
    n_param: int

    def label_of(self, v: int) -> Label:
        return self.labels.label(v)

    def vertex_of(self, label: Union[Label, str]) -> int:
        return self.labels.vertex(label)


class ExpectedStep(NamedTuple):
    edge: Edge
    phase: int
    stage: int  # +j for b_j, -j for b_-j, DUMMY_STAGE for the top-swap chain
    position: int


def dummy_chain(labels: SlowLabels, i: int) -> List[int]:
    """The ordered vertices t_i, m_2n-1, m_2n, d_i1, d_i2, d_i3, t_i+1, m_0, m_1 of a top swap."""
    n = labels.n
    return [
        labels.t(i),
        labels.m(2 * n - 1),
        labels.m(2 * n),
        labels.d(i, 1),
        labels.d(i, 2),
        labels.d(i, 3),
        labels.t(i + 1),
        labels.m(0),
        labels.m(1),
    ]


def _gadget_edges(chain: List[int]) -> Iterator[Edge]:
    # consecutive quadruples of the chain are K_4^(3) copies missing two faces
    for a in range(6):
        yield tuple(sorted((chain[a], chain[a + 1], chain[a + 3])))
        yield tuple(sorted((chain[a], chain[a + 2], chain[a + 3])))


def slow3_edges(labels: SlowLabels) -> Iterator[Edge]:
    n = labels.n
    t, b, m = labels.t, labels.b, labels.m
    tri = labels.triple

    # (a) the seed e0
    yield tri(t(1), m(0), m(1))
    # (b) top paths
    for i in range(1, n + 1):
        for l in range(1, n):
            yield tri(t(i), m(l), m(l + 1))
    # (c) bottom paths for b_j
    for j in range(1, n + 1):
        for l in range(-(j - 1), n + j):
            yield tri(b(j), m(l), m(l + 1))
    # (d) bottom paths for b_-j
    for j in range(1, n):
        for l in range(-j, n + j):
            yield tri(b(-j), m(l), m(l + 1))
    # (e) bottom swaps out of b_j
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            yield tri(t(i), b(j), m(-(j - 1)))
            yield tri(t(i), b(j), m(n + j))
    # (f) bottom swaps out of b_-j
    for i in range(1, n + 1):
        for j in range(1, n):
            yield tri(t(i), b(-j), m(n + j))
            yield tri(t(i), b(-j), m(-j))
    # (g) top swaps
    for i in range(1, n):
        yield from _gadget_edges(dummy_chain(labels, i))


def slow3(n: int, store: Optional[str] = None) -> LabeledConstruction:
    """The slow-percolating 3-uniform initial infection with parameter n."""
    labels = SlowLabels(n)
    G0 = Hypergraph(3, labels.vertex_count, store=store)
    duplicates = 0
    for edge in slow3_edges(labels):
        if not G0.add_edge(edge):
            duplicates += 1
    if duplicates:
        logger.warning(f"slow3({n}): {duplicates} edges listed by more than one family")
    e0 = labels.triple(labels.t(1), labels.m(0), labels.m(1))
    logger.debug(f"slow3({n}): {G0.n} vertices, {G0.edge_count} edges")
    return LabeledConstruction(G0=G0, labels=labels, e0=e0, n_param=n)


def slow3_edge_count(n: int) -> int:
    return 9 * n * n + 7 * n - 11


def expected_steps(labels: SlowLabels) -> Iterator[ExpectedStep]:
    n = labels.n
    t, b, m = labels.t, labels.b, labels.m
    tri = labels.triple
    for i in range(1, n + 1):
        ti = t(i)
        for j in range(1, n + 1):
            # stage j runs up the middle path, then lengthens it
            position = 0
            for l in range(-(j - 2), n + j):
                yield ExpectedStep(tri(ti, b(j), m(l)), i, j, position)
                position += 1
            yield ExpectedStep(tri(ti, m(n + j - 1), m(n + j)), i, j, position)
            if j == n:
                break
            # stage -j runs back down, then lengthens the other end
            position = 0
            for l in range(n + j - 1, -j, -1):
                yield ExpectedStep(tri(ti, b(-j), m(l)), i, -j, position)
                position += 1
            yield ExpectedStep(tri(ti, m(-(j - 1)), m(-j)), i, -j, position)
        if i < n:
            chain = dummy_chain(labels, i)
            for a in range(6):
                yield ExpectedStep(tri(*chain[a + 1 : a + 4]), i, DUMMY_STAGE, a)


def expected_sequence(n: int) -> List[ExpectedStep]:
    """The predicted one-edge-per-round infection order of slow3(n)."""
    return list(expected_steps(SlowLabels(n)))


def closed_form_T(n: int) -> int:
    """Length of expected_sequence(n): phases of 4n^2 - 2n steps plus 6 per top swap."""
    return 4 * n**3 - 2 * n**2 + 6 * n - 6


# --- Small reference hypergraphs ---


def beachball(top: int, bottom: int, middles: Sequence[int], n: Optional[int] = None) -> Hypergraph:
    """Triples joining each consecutive middle pair with the top or the bottom vertex."""
    vertices = [top, bottom, *middles]
    if len(set(vertices)) != len(vertices):
        raise InvalidEdge(f"Beachball vertices must be distinct: {vertices}")
    if len(middles) < 2:
        raise UnsupportedParameter("A beachball needs at least two middle vertices")
    if n is None:
        n = max(vertices) + 1
    G = Hypergraph(3, n)
    for x, y in zip(middles, middles[1:]):
        G.add_edge((top, x, y))
        G.add_edge((bottom, x, y))
    return G


def path_graph(n: int) -> Hypergraph:
    """The n-vertex path 0 - 1 - ... - (n-1) as a 2-uniform hypergraph."""
    if n < 2:
        raise UnsupportedParameter(f"n must be ≥ 2 (got n={n})")
    return Hypergraph(2, n, ((i, i + 1) for i in range(n - 1)))


def complete_hypergraph(n: int, r: int) -> Hypergraph:
    if r < 2 or n < 0:
        raise UnsupportedParameter(f"complete hypergraph needs r ≥ 2, n ≥ 0 (got n={n}, r={r})")
    return Hypergraph(r, n, all_edges(n, r))


def complete_minus_clique(n: int, k: int) -> Hypergraph:
    """K_n minus every edge inside {0, ..., n-k+1} (a clique on n-k+2 vertices)."""
    if not 2 <= k <= n:
        raise UnsupportedParameter(f"complete-minus-clique needs 2 ≤ k ≤ n (got n={n}, k={k})")
    hole = n - k + 2
    return Hypergraph(2, n, (e for e in combinations(range(n), 2) if e[1] >= hole))


def weak_saturation_bound(n: int, k: int) -> int:
    """Minimum edge count of a weakly K_k-saturated graph on n vertices."""
    return (k - 2) * n - binomial(k - 1, 2)


def random_hypergraph(n: int, r: int, p: float, seed: int = 0) -> Hypergraph:
    """Each r-subset of [0, n) independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise UnsupportedParameter(f"p must lie in [0, 1] (got {p})")
    if r < 2:
        raise UnsupportedParameter(f"r must be ≥ 2 (got {r})")
    rng = random.Random(seed)
    return Hypergraph(r, n, (e for e in all_edges(n, r) if rng.random() < p))


# --- Label sidecar ---


def format_labels(construction: LabeledConstruction) -> Iterator[str]:
    for v, label in enumerate(construction.labels.labels()):
        yield f"{v}\t{label.render()}\n"


def write_labels(construction: LabeledConstruction, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.writelines(format_labels(construction))


def read_labels(path: Union[str, Path]) -> Dict[int, Label]:
    labels = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                index, text = line.rstrip("\n").split("\t")
                labels[int(index)] = Label.parse(text)
            except ValueError as e:
                raise FormatError(f"invalid label line: {e}", line_number)
    return labels
