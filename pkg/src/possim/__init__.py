"""Possibility and necessity as similarity between possible worlds.

Finite-universe implementation of graded implication and consistence,
possibility/necessity distributions and the generalized modus ponens.
"""

from .distributions import (
    DistributionTable,
    TableKind,
    tightest_conditional_necessity,
    tightest_conditional_possibility,
    tightest_necessity,
    tightest_possibility,
    validate_table,
)
from .gmp import GmpProblem, Mode, gmp_necessity, gmp_possibility, simple_gmp_chain
from .kb import KnowledgeBase
from .measures import (
    alpha_possible,
    degree_of_consistence,
    degree_of_implication,
    necessarily_implies,
    world_similarity_to_set,
)
from .similarity import (
    SimilarityRelation,
    alpha_accessible,
    distance_view,
    transitive_closure,
    validate,
)
from .tnorm import EPS, TNorm
from .worlds import EvidentialSet, Partition, Proposition, Universe, evaluate_formula, validate_partition

__version__ = "0.1.0"

__all__ = [
    "DistributionTable", "TableKind", "tightest_conditional_necessity", "tightest_conditional_possibility",
    "tightest_necessity", "tightest_possibility", "validate_table", "GmpProblem", "Mode", "gmp_necessity",
    "gmp_possibility", "simple_gmp_chain", "KnowledgeBase", "alpha_possible", "degree_of_consistence",
    "degree_of_implication", "necessarily_implies", "world_similarity_to_set", "SimilarityRelation",
    "alpha_accessible", "distance_view", "transitive_closure", "validate", "EPS", "TNorm", "EvidentialSet",
    "Partition", "Proposition", "Universe", "evaluate_formula", "validate_partition",
]
