"""Spanning trees with bounded total excess under a spectral radius condition.

Graph model and graph6 codec, adjacency spectra and quotient matrices, exact
polynomial algebra for the extremal families, exact/heuristic minimisation of
total k-excess, and exhaustive verification harnesses.
"""

from .errors import ConvergenceError, Graph6Error, GraphError, NoRootError, ScopeError
from .excess import (ExcessResult, SpanningTree, WinViolation, has_bounded_excess_tree, min_total_excess_exact,
                     min_total_excess_heuristic, prufer_oracle_min_excess, total_excess,
                     win_condition_worst_violator)
from .extremal import build_B1_family, build_Gstar, build_star_family, verify_Gstar_is_exception
from .graph import (Graph, VertexSet, complete_graph, components_after_deletion, disjoint_union,
                    empty_graph, is_connected, is_isomorphic, join)
from .graph6 import emit_graph6, parse_graph6
from .polynomials import (MultiPoly, UniPoly, char_poly_exact, check_f1_negativity, closed_form_rho, f1,
                          largest_real_root, phi_B1, phi_B2, phi_Bstar, verify_difference_identity)
from .spectral import (Partition, QuotientMatrix, is_equitable, largest_eigenvalue_of_quotient,
                       quotient_matrix, spectral_radius, spectrum)

__version__ = "0.1.0"
