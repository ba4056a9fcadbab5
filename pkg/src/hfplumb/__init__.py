"""Heegaard-Floer homology HF+(-Y(G)) of negative definite plumbings with at
most one bad vertex, computed from characteristic vectors and full paths."""

__version__ = "0.1.0"

from .charvec import (
    enumerate_cond13,
    is_characteristic,
    push,
    satisfies_cond13,
    satisfies_terminal,
)
from .families import a_chain, good_path_certificate, sigma_2_3, u_chain_certificate
from .fullpath import PathOutcome, Verdict, basic_vectors, classify, replay_certificate
from .kplus import (
    ExplorationParams,
    HFDecomposition,
    KState,
    class_counts,
    explore,
    grading,
    hf_decomposition,
)
from .plumbing import (
    PlumbingGraph,
    bad_vertices,
    build_graph,
    intersection_matrix,
    is_negative_definite,
    square,
)
