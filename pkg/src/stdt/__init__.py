"""Entropy-compressed ordered tree index with navigation queries."""

from .errors import InputError, NoSuchNode, TreeError
from .succinct import SuccinctTree, build
from .tree import OrderedTree, Query, parse_bp, random_tree

__all__ = ["InputError", "NoSuchNode", "OrderedTree", "Query", "SuccinctTree", "TreeError",
           "build", "parse_bp", "random_tree"]
__version__ = "0.1.0"
