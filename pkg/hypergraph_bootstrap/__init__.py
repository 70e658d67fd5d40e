from hypergraph_bootstrap.__version__ import __version__
from hypergraph_bootstrap.core import Hypergraph, edge_key, edge_unkey
from hypergraph_bootstrap.engine import (
    RunResult,
    infect_round_incremental,
    infect_round_naive,
    new_copies,
    run,
    run_incremental,
    run_naive,
)
from hypergraph_bootstrap.schemas import EngineKind, PercolationConfig

__all__ = [
    "__version__",
    "EngineKind",
    "Hypergraph",
    "PercolationConfig",
    "RunResult",
    "edge_key",
    "edge_unkey",
    "infect_round_incremental",
    "infect_round_naive",
    "new_copies",
    "run",
    "run_incremental",
    "run_naive",
]
