"""Entanglement labels, generalized relative entropy and GHZ-combination constraints.

Submodules:

``parties``        labels, enumeration and counting
``states``         dense states, partial traces, entropies, product channels
``measures``       exact bi-GP values and the generalized REE (GHZ units)
``ghz_calculus``   closed forms for tensor combinations of GHZ-like states
``constraints``    copy-ratio systems, feasibility certificates, searches
"""
__version__ = "0.1.0"

from .parties import GPSet, parse_label, enumerate_labels, count_labels, enumerate_ghz_labels, classify_label
from .states import PureState, DensityMatrix, make_ghz, partial_trace, von_neumann_entropy
from .separable import Budget
from .measures import EntanglementValue, Kind, bi_gp_entanglement, gre, normalizer, gre_state_profile
from .ghz_calculus import GhzCombination, parse_combination, bi_gp_value, true_npartite_value
from .constraints import build_system, solve_feasibility, check_gen, search_counterexamples
