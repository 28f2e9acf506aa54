"""Qualitative temporal reasoning over Allen's interval algebra.

Subpackages: algebra (labels, composition), network (data model and file
formats), pathcon (path consistency), tractable (SA/NB subclasses and
decompositions), search (backtracking for consistent scenarios), generate
(random instance models B(n) and S(n, p)), bench (experiment harness),
cli (the ianet command).
"""

from .algebra import (
    FULL, EMPTY, REL_NAMES, cardinality, compose, compose_pairwise,
    compose_split, format_label, intersect, inverse, parse_label, weight,
)
from .network import Network, parse_matrix, parse_network, serialize_network, validate
from .pathcon import PCConfig, PCStats, incremental_path_consistency, path_consistency
from .tractable import catalog, decompose, is_ord_horn, is_pointizable
from .search import (
    SearchConfig, SearchResult, backtrack_solve, extract_scenario, realize,
    search_space_size, verify_assignment,
)
from .generate import GeneratorConfig, gen_b, gen_s

__version__ = "0.1.0"
