"""Spectral extremal problems for bipartite graphs, checked exhaustively at desk scale."""

from .errors import BudgetExceeded, ConvergenceError, ParseError
from .graph import (
    Bipartition, Graph, complete_bipartite, complete_graph, cycle_graph, empty_graph,
    find_bipartition, neighborhood_at_distance, path_graph, peel_to_min_degree, star_graph,
    wheel_graph,
)
from .spectral import (
    Certificate, SpectralResult, certify_lower, compare_rho_squared, gamma_bound_check,
    least_eigenvalue, lower_certificate, spectral_radius, upper_bound_gamma, upper_bound_local,
)
from .formats import encode_graph6, parse_graph6
from .detect import (
    TreePattern, Witness, contains_all_trees, contains_anchored_path, contains_cycle,
    contains_minor, contains_tree, find_minor_model, greedy_min_degree_embed, is_outerplanar,
)
from .enumeration import (
    EnumerationSpec, canonical_form, enumerate_free_trees, enumerate_graphs, is_isomorphic,
)
from .config import RunConfig
from .verify import (
    TheoremReport, diagnose_outerplanar_claims, tree_theorem_sweep, verify_c3free_generalization,
    verify_cycle_theorem, verify_edge_bounds, verify_outerplanar_theorem, verify_path_lemma,
    verify_spectral_sandwich, verify_tree_theorem, verify_turan_tree_bound,
)

__version__ = "0.1.0"
