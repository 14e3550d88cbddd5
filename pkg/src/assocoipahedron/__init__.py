"""Directed planar trees with an output signature, the cell complex they index,
and its exact rational realization inside (associahedron x simplex)."""

from .counting import catalan, count_bruteforce, count_closed, count_recursive
from .trees import AlphaTree, Signature, enumerate_cells, enumerate_max_expanded, parse_signature

__all__ = [
    "AlphaTree",
    "Signature",
    "catalan",
    "count_bruteforce",
    "count_closed",
    "count_recursive",
    "enumerate_cells",
    "enumerate_max_expanded",
    "parse_signature",
]
__version__ = "0.1.0"
