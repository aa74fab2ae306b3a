"""Parallel (r, s) nucleus decomposition of undirected graphs.
"""
from ._version import __version__
from .nd import ND
from .graph import UndirectedGraph, parse_edge_list, read_edge_list
from .peeling import PeelConfig, PeelResult, nucleus_decomposition

__all__ = [
    "ND",
    "PeelConfig",
    "PeelResult",
    "UndirectedGraph",
    "__version__",
    "nucleus_decomposition",
    "parse_edge_list",
    "read_edge_list",
]
