"""
Tests for edges, colex keys, edge stores and the hypergraph text format.
"""

import io
from itertools import combinations
from unittest.mock import patch

import numpy as np
import pytest

from hypergraph_bootstrap import config
from hypergraph_bootstrap.core import (
    DenseEdgeStore,
    HashedEdgeStore,
    Hypergraph,
    PascalTable,
    binomial,
    canonical_edge,
    edge_key,
    edge_unkey,
    format_hypergraph,
    is_complete,
    keys_of,
    make_store,
    parse_hypergraph,
    read_hypergraph,
    relabel,
    write_hypergraph,
)
from hypergraph_bootstrap.exceptions import (
    DuplicateEdge,
    FormatError,
    InvalidEdge,
    ResourceError,
)


class TestCanonicalEdge:
    """Tests for canonical_edge."""

    def test_sorts_vertices(self):
        """Should return the sorted tuple."""
        assert canonical_edge([5, 2, 9], 3, 10) == (2, 5, 9)
        assert canonical_edge([1, 0], 2, 2) == (0, 1)

    def test_rejects_repeated_vertex(self):
        """Should raise InvalidEdge on a repeated vertex."""
        with pytest.raises(InvalidEdge):
            canonical_edge([2, 2, 9], 3, 10)

    def test_rejects_out_of_range_vertex(self):
        """Should raise InvalidEdge for vertices outside [0, n)."""
        with pytest.raises(InvalidEdge):
            canonical_edge([0, 1, 10], 3, 10)
        with pytest.raises(InvalidEdge):
            canonical_edge([-1, 1, 2], 3, 10)

    def test_rejects_wrong_arity(self):
        """Should raise InvalidEdge when the vertex count is not r."""
        with pytest.raises(InvalidEdge):
            canonical_edge([0, 1], 3, 10)

    def test_invalid_edge_is_value_error(self):
        """Should also be catchable as ValueError."""
        with pytest.raises(ValueError):
            canonical_edge([0, 0], 2, 3)


class TestEdgeKey:
    """Tests for edge_key, edge_unkey and keys_of."""

    def test_known_keys(self):
        """Should match the colex ranks of small triples."""
        assert edge_key((0, 1, 2), 5) == 0
        assert edge_key((0, 1, 3), 5) == 1
        assert edge_key((2, 3, 4), 5) == 9 == binomial(5, 3) - 1

    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_keys_enumerate_colex_order(self, r):
        """Should give keys exactly 0 .. C(n, r) - 1 for all r-subsets in colex order."""
        n = 12
        colex = sorted(combinations(range(n), r), key=lambda e: e[::-1])
        assert [edge_key(e, n) for e in colex] == list(range(binomial(n, r)))

    @pytest.mark.parametrize("n,r", [(n, r) for n in range(1, 13) for r in range(2, 5) if r <= n])
    def test_unkey_inverts_key(self, n, r):
        """Should return e from edge_unkey(edge_key(e)) for every r-subset."""
        for edge in combinations(range(n), r):
            assert edge_unkey(edge_key(edge, n), n, r) == edge

    @pytest.mark.parametrize("edge", [(2, 1, 0), (1, 1, 2), (0, 2, 1)])
    def test_key_rejects_non_canonical_edge(self, edge):
        """Should raise InvalidEdge for unsorted or repeated vertices."""
        with pytest.raises(InvalidEdge):
            edge_key(edge, 5)

    @pytest.mark.parametrize("edge", [(0, 1, 7), (0, 1, 5), (-1, 0, 1)])
    def test_key_rejects_vertex_out_of_range(self, edge):
        """Should raise InvalidEdge for vertices outside [0, n)."""
        with pytest.raises(InvalidEdge):
            edge_key(edge, 5)

    def test_unkey_rejects_out_of_range_key(self):
        """Should raise InvalidEdge for keys outside [0, C(n, r))."""
        with pytest.raises(InvalidEdge):
            edge_unkey(binomial(6, 3), 6, 3)

    def test_keys_of_matches_edge_key(self):
        """Should give vectorised keys equal to the scalar ones."""
        edges = np.array(list(combinations(range(9), 3)), dtype=np.int16)
        expected = [edge_key(tuple(e), 9) for e in edges.tolist()]
        assert keys_of(edges, 9, 3).tolist() == expected

    def test_key_width_is_checked(self):
        """Should raise ResourceError when C(n, r) does not fit the key width."""
        with patch.object(config, "KEY_BITS", 10):
            with pytest.raises(ResourceError):
                PascalTable(20, 5)

    def test_binomial_edge_cases(self):
        """Should give C(n, r) = 0 for r > n and 1 for r = 0."""
        assert binomial(3, 5) == 0
        assert binomial(7, 0) == 1
        assert binomial(10, 3) == 120


class TestEdgeStores:
    """Tests for HashedEdgeStore, DenseEdgeStore and make_store."""

    @pytest.mark.parametrize("kind", ["hashed", "dense"])
    def test_add_edge_is_idempotent(self, kind):
        """Should report a duplicate edge and keep the count."""
        G = Hypergraph(3, 6, store=kind)
        assert G.add_edge((4, 1, 2)) is True
        assert G.add_edge((1, 2, 4)) is False
        assert G.edge_count == 1
        assert (2, 4, 1) in G

    @pytest.mark.parametrize("kind", ["hashed", "dense"])
    def test_remove_and_copy(self, kind):
        """Should make copy() independent of the original."""
        G = Hypergraph(2, 5, [(0, 1), (1, 2)], store=kind)
        H = G.copy()
        assert H.remove_edge((0, 1)) is True
        assert H.remove_edge((0, 1)) is False
        assert G.edge_count == 2
        assert H.edge_count == 1

    def test_stores_agree(self):
        """Should expose identical keys and masks from both stores."""
        edges = [(0, 1, 2), (1, 3, 5), (2, 4, 5)]
        hashed = Hypergraph(3, 6, edges, store="hashed")
        dense = Hypergraph(3, 6, edges, store="dense")
        assert hashed == dense
        assert hashed.keys() == dense.keys()
        assert np.array_equal(hashed.mask(), dense.mask())

    def test_auto_picks_dense_within_budget(self):
        """Should pick the dense store when C(n, r) bytes fit the budget."""
        assert isinstance(make_store(10, 3, "auto", 10_000), DenseEdgeStore)

    def test_auto_falls_back_to_hashed(self):
        """Should fall back to the hashed store over budget."""
        assert isinstance(make_store(10, 3, "auto", 10), HashedEdgeStore)

    def test_auto_fallback_logs_warning(self, caplog):
        """Should log a warning when auto refuses the dense store."""
        with caplog.at_level("WARNING", logger="hypergraph_bootstrap.core"):
            make_store(10, 3, "auto", 10)
        assert any(
            rec.levelname == "WARNING" and "hashed store" in rec.getMessage()
            for rec in caplog.records
        )

    def test_dense_over_budget_raises(self):
        """Should raise ResourceError for an explicit dense store over budget."""
        with pytest.raises(ResourceError):
            make_store(10, 3, "dense", 10)

    def test_unknown_store_kind(self):
        """Should reject unknown store names."""
        with pytest.raises(ValueError):
            make_store(5, 2, "bitmap")

    def test_edges_in_colex_order(self):
        """Should list edges by increasing key."""
        G = Hypergraph(3, 5, [(2, 3, 4), (0, 1, 2), (0, 1, 3)])
        assert list(G.edges()) == [(0, 1, 2), (0, 1, 3), (2, 3, 4)]


class TestIsComplete:
    """Tests for is_complete."""

    def test_complete_graph(self):
        """Should treat K_4 as complete."""
        assert is_complete(Hypergraph(2, 4, combinations(range(4), 2)))

    def test_empty_hypergraph(self):
        """Should not treat the empty 3-graph on 5 vertices as complete."""
        assert not is_complete(Hypergraph(3, 5))

    def test_complete_minus_edge(self, k5_minus_face):
        """Should not treat K_5^(3) minus an edge as complete."""
        assert k5_minus_face.edge_count == 9
        assert not is_complete(k5_minus_face)


class TestRelabel:
    """Tests for relabel."""

    def test_applies_permutation(self):
        """Should map every edge through the permutation."""
        G = Hypergraph(2, 4, [(0, 1), (1, 2)])
        H = relabel(G, [3, 2, 1, 0])
        assert sorted(H.edges()) == [(1, 2), (2, 3)]

    def test_rejects_non_permutation(self):
        """Should raise InvalidEdge for a map that is not a permutation."""
        with pytest.raises(InvalidEdge):
            relabel(Hypergraph(2, 3), [0, 0, 1])


class TestTextFormat:
    """Tests for parse_hypergraph, format_hypergraph and the file helpers."""

    def test_round_trip(self, tmp_path):
        """Should read back an identical edge set after a write."""
        G = Hypergraph(3, 7, [(0, 1, 2), (6, 5, 4), (1, 3, 5)])
        path = tmp_path / "g.hg"
        write_hypergraph(G, path, comments=["example"])
        assert read_hypergraph(path) == G

    def test_format_lines(self):
        """Should emit comments, the header and edges in colex order."""
        G = Hypergraph(2, 3, [(1, 2), (0, 1)])
        assert "".join(format_hypergraph(G, ["hi"])) == "# hi\n2 3 2\n0 1\n1 2\n"

    def test_comments_blank_lines_and_vertex_order(self):
        """Should skip comments and blank lines and canonicalise edge lines."""
        text = "# comment\n\n3 5 2\n# between\n4 0 2\n\n3 1 0\n"
        G = parse_hypergraph(io.StringIO(text))
        assert list(G.edges()) == [(0, 1, 3), (0, 2, 4)]

    @pytest.mark.parametrize(
        "text,line",
        [
            ("3 5\n", 1),
            ("3 5 x\n", 1),
            ("1 5 0\n", 1),
            ("3 5 1\n0 1\n", 2),
            ("3 5 1\n0 1 5\n", 2),
            ("3 5 1\n0 1 1\n", 2),
            ("2 4 1\n0 1\n2 3\n", 3),
            ("2 4 2\n0 a\n2 3\n", 2),
            ("2 3 4\n", 1),
        ],
    )
    def test_malformed_lines_report_line_number(self, text, line):
        """Should raise FormatError carrying the line number for malformed input."""
        with pytest.raises(FormatError) as excinfo:
            parse_hypergraph(io.StringIO(text))
        assert excinfo.value.line_number == line
        assert f"line {line}:" in str(excinfo.value)

        """Should raise FormatError for a file with only comments."""
        """Should report a missing header for a file with only comments."""
        with pytest.raises(FormatError):
            parse_hypergraph(io.StringIO("# nothing here\n"))

    def test_missing_edge_lines(self):
        """Should reject fewer edge lines than m."""
        with pytest.raises(FormatError, match="found 1"):
            parse_hypergraph(io.StringIO("2 4 2\n0 1\n"))

    def test_duplicate_edge_is_hard_error(self):
        """Should raise DuplicateEdge for a duplicate edge in any vertex order."""
        with pytest.raises(DuplicateEdge) as excinfo:
            parse_hypergraph(io.StringIO("3 4 2\n0 1 2\n2 1 0\n"))
        assert excinfo.value.line_number == 3
