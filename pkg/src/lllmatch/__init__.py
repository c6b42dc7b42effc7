"""Local-lemma bounds for random perfect matchings, with exact and Monte Carlo checks."""

from .kernels import BACKEND
from .matching import (
    EventFamily,
    Matching,
    MatchingSpace,
    canonical_form,
    conflict_graph,
    event_probability,
    family_stats,
    in_conflict,
    read_family,
    write_family,
)
from .bounds import (
    asymptotic_bracket,
    delta_sparseness,
    l5_lower_bound,
    lll_lower_bound,
    near_positive_epsilon,
    quotient_events,
    simple_lower_bound,
    upper_bound,
)
from .oracle import (
    avoid_probability_exact,
    check_near_positive,
    check_negative_dependency,
    perfect_matchings,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EventFamily",
    "Matching",
    "MatchingSpace",
    "asymptotic_bracket",
    "avoid_probability_exact",
    "canonical_form",
    "check_near_positive",
    "check_negative_dependency",
    "conflict_graph",
    "delta_sparseness",
    "event_probability",
    "family_stats",
    "in_conflict",
    "l5_lower_bound",
    "lll_lower_bound",
    "near_positive_epsilon",
    "perfect_matchings",
    "quotient_events",
    "read_family",
    "simple_lower_bound",
    "upper_bound",
    "write_family",
]
