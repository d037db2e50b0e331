"""Rich words: palindromic richness, repetition analysis, and search.

Builds and verifies an infinite binary rich word with critical exponent
2 + sqrt(2)/2, and finds the longest rich words below given exponent
thresholds by exhaustive backtracking.
"""

__version__ = "0.1.0"

from .eertree import Antimorphism, Eertree, defect, is_rich, rich_factor
from .generators import Dfao, Morphism, dfao_eval, fixed_point_prefix, word_r
from .numeration import PellRep, decode, encode, is_canonical, is_high_power_period, pell
from .repetitions import (
    R_CRITICAL_EXPONENT,
    Exponent,
    MaximalRep,
    SurdThreshold,
    compare_to_surd,
    critical_exponent,
    exponent_of,
    high_power_periods,
    maximal_repetitions,
    predicted_highest_powers,
    smallest_period,
)
from .search import SearchConfig, SearchResult, run_search

__all__ = [
    "__version__",
    "Antimorphism",
    "Eertree",
    "defect",
    "is_rich",
    "rich_factor",
    "Dfao",
    "Morphism",
    "dfao_eval",
    "fixed_point_prefix",
    "word_r",
    "PellRep",
    "decode",
    "encode",
    "is_canonical",
    "is_high_power_period",
    "pell",
    "R_CRITICAL_EXPONENT",
    "Exponent",
    "MaximalRep",
    "SurdThreshold",
    "compare_to_surd",
    "critical_exponent",
    "exponent_of",
    "high_power_periods",
    "maximal_repetitions",
    "predicted_highest_powers",
    "smallest_period",
    "SearchConfig",
    "SearchResult",
    "run_search",
]
