"""Agnostic proper learning of monotone Boolean functions, with local
correction, violation-graph matchings and exact checking oracles."""

from .boolfn import (Evaluator, FunctionLabels, MultilinearPoly, Point, RandomizedLabels, SampleSet, SubsetMask,
                     chi, sample_uniform)
from .convex import PolyBasis, SeparationResult, ellipsoid
from .corrector import BooleanCorrector, KCorrector, hypercube_corrector
from .lca import MatchingLCA, Seed, consistency_fuzz
from .learner import (Hypothesis, SeparationOracle, estimate_distance, monotone_learner, trivial_learner)
from .matching import hypercube_matching, match_violations
from .oracle_exact import (closest_monotone_boolean, exact_hamming_dist, exact_l1_dist,
                           exact_max_weight_violation_matching, min_monotone_error)
from .poset import explicit_dag, full_cube, truncated_cube

__version__ = "0.1.0"

__all__ = [
    "BooleanCorrector", "Evaluator", "FunctionLabels", "Hypothesis", "KCorrector", "MatchingLCA",
    "MultilinearPoly", "Point", "PolyBasis", "RandomizedLabels", "SampleSet", "Seed", "SeparationOracle",
    "SeparationResult", "SubsetMask", "chi", "closest_monotone_boolean", "consistency_fuzz", "ellipsoid",
    "estimate_distance", "exact_hamming_dist", "exact_l1_dist", "exact_max_weight_violation_matching",
    "explicit_dag", "full_cube", "hypercube_corrector", "hypercube_matching", "match_violations",
    "min_monotone_error", "monotone_learner", "sample_uniform", "trivial_learner", "truncated_cube",
]
