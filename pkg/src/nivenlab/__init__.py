"""Exact counting, exponential-sum and arc-decomposition experiments for
sums of three base-g Niven numbers."""

from ._backend import backend_name
from .digits import (CenteredExpansion, ProblemInstance, alternation_count,
                     centered_expand, digit_sum, frac_norm_sq_sum, is_niven,
                     nonzero_count, reduce_to_interval)
from .expsum import PhaseEvaluation, SetSpec, exp_sum
from .llt import PmfTable, exact_pmf
from .twisted import CycloVector, twisted_mass_direct, twisted_mass_dp

__version__ = "0.1.0"

__all__ = [
    "CenteredExpansion", "CycloVector", "PhaseEvaluation", "PmfTable",
    "ProblemInstance", "SetSpec", "alternation_count", "backend_name",
    "centered_expand", "digit_sum", "exact_pmf", "exp_sum",
    "frac_norm_sq_sum", "is_niven", "nonzero_count", "reduce_to_interval",
    "twisted_mass_direct", "twisted_mass_dp", "__version__",
]
