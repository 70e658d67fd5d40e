# Tests for hypergraph_bootstrap
