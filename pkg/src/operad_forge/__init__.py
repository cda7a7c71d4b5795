"""Exact-arithmetic engine for graph insertion operads."""
from .exact import LinComb, RowSpace, nullspace, span
from .graphs import GraphError, MultiHyperGraph, RootedGraph
from .operads import (OPERADS, CarrierError, GraphOperad, RootedTree, check_axioms, compose,
                      get_operad, plie_compose)
from .series import TruncEGF
from .span import ArityBoundError, ClosureError, closure, find_generators, generator_search, membership

__all__ = [
    "ArityBoundError", "CarrierError", "ClosureError", "GraphError", "GraphOperad", "LinComb",
    "MultiHyperGraph", "OPERADS", "RootedGraph", "RootedTree", "RowSpace", "TruncEGF",
    "check_axioms", "closure", "compose", "find_generators", "generator_search", "get_operad",
    "membership", "nullspace", "plie_compose", "span",
]
__version__ = "0.1.0"
