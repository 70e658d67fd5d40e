"""
Shared fixtures for the hypergraph_bootstrap test suite.
"""

import pytest

from hypergraph_bootstrap.constructions import complete_hypergraph


@pytest.fixture
def k4_minus_face():
    """K_4^(3) without the edge {0, 1, 2}."""
    G = complete_hypergraph(4, 3)
    G.remove_edge((0, 1, 2))
    return G


@pytest.fixture
def k5_minus_face():
    """K_5^(3) without the edge {0, 1, 2}."""
    G = complete_hypergraph(5, 3)
    G.remove_edge((0, 1, 2))
    return G


@pytest.fixture
def write_text(tmp_path):
    """Write text to a file under tmp_path and return its path."""

    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
