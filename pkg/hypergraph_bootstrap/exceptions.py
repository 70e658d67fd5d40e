from typing import Optional


class HypergraphBootstrapError(Exception):
    """Base class for all errors raised by hypergraph_bootstrap."""


class InvalidEdge(HypergraphBootstrapError, ValueError):
    """Wrong arity, repeated vertex or vertex outside [0, n)."""


class InvalidConfig(HypergraphBootstrapError, ValueError):
    """Percolation settings that cannot describe a K_k^(r) process."""


class UnsupportedParameter(HypergraphBootstrapError, ValueError):
    """Construction parameter outside its supported range."""


class InvalidInput(HypergraphBootstrapError, ValueError):
    """Verifier precondition not met."""


class FormatError(HypergraphBootstrapError, ValueError):
    """Malformed hypergraph, label or trace file."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DuplicateEdge(FormatError):
    """The same edge appears twice in an input file."""


class ResourceError(HypergraphBootstrapError, MemoryError):
    """Memory budget or key width exceeded."""
