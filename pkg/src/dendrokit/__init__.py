"""Bounded, exhaustive combinatorics of trees, operads and dendroidal sets."""

from .trees import GradedSet, Tree, Vertex, corolla, eta, from_code, linear

__version__ = "0.1.0"

__all__ = ["GradedSet", "Tree", "Vertex", "corolla", "eta", "from_code", "linear", "__version__"]
