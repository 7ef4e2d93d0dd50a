"""Marked roses, Stallings folds, ideal edges and the reductive part of the
star of a rose in the spine of outer space.

The submodules are usable on their own; the most common names are
re-exported here.
"""
from __future__ import annotations

from .automorphisms import compose, invert, nielsen_factors, random_automorphism
from .complexes import (OrderComplex, Poset, Verdict, contractibility_pipeline, homology_f2,
                        quillen_retract, star_poset)
from .errors import Defect, OuterSpineError, PipelineDefect, UndeterminedComparison
from .folds import KnPath, fold_to_rose, same_point, verify_kn_path
from .free_words import (ConjugacyClass, canonical_class, classes_up_to, enumerate_classes,
                         format_word, parse_word)
from .graphs import Graph
from .marked_graphs import Comparison, MarkedGraph, Rose, compare_norm, roses_equal
from .whitehead import (IdealEdge, ideal_edges, ideal_trees, is_reductive_edge,
                        is_reductive_tree, key_lemma_check, max_reductive_edge, star_graph,
                        whitehead_reduce)

__version__ = "0.1.0"

__all__ = [
    "ConjugacyClass", "Comparison", "Defect", "Graph", "IdealEdge", "KnPath", "MarkedGraph",
    "OrderComplex", "OuterSpineError", "PipelineDefect", "Poset", "Rose",
    "UndeterminedComparison", "Verdict", "canonical_class", "classes_up_to", "compare_norm",
    "compose", "contractibility_pipeline", "enumerate_classes", "fold_to_rose", "format_word",
    "homology_f2", "ideal_edges", "ideal_trees", "invert", "is_reductive_edge",
    "is_reductive_tree", "key_lemma_check", "max_reductive_edge", "nielsen_factors",
    "parse_word", "quillen_retract", "random_automorphism", "roses_equal", "same_point",
    "star_graph", "star_poset", "verify_kn_path", "whitehead_reduce",
]
