"""Exact and numeric statistics of the index of GUE matrices.

The index is the number of positive eigenvalues.  Its distribution and
variance are computed exactly in Q(sqrt(pi)) from a Hankel-determinant
tau-function sequence, cross-checked by several independent variance
formulas, high-precision special-function evaluations and a tridiagonal
Monte Carlo sampler.
"""

from .algebra import (
    SIGMA,
    LaurentSeries,
    PiScalar,
    Poly,
    RationalFunction,
    XiFunction,
    eval_numeric,
    expand_at_one,
    gamma_half,
)
from .report import Check, Report
from .sampler import McEstimate, TridiagonalMatrix, chi_square, estimate, positive_count, sample_tridiagonal
from .special import PrecisionContext
from .tau import (
    IndexDistribution,
    TauSequence,
    build_fg,
    build_tau,
    index_distribution,
    laurent_table,
    verify_identities,
    verify_laurent,
)
from .variance import (
    VarianceValue,
    delta_asymptotic,
    delta_closed_form,
    delta_from_distribution,
    delta_recurrence_table,
    delta_sum,
    delta_voisum,
    e_term,
    homogeneous_check,
    j_m_quadrature,
)

__version__ = "0.1.0"

__all__ = [
    "SIGMA", "LaurentSeries", "PiScalar", "Poly", "RationalFunction", "XiFunction",
    "eval_numeric", "expand_at_one", "gamma_half",
    "Check", "Report",
    "McEstimate", "TridiagonalMatrix", "chi_square", "estimate", "positive_count", "sample_tridiagonal",
    "PrecisionContext",
    "IndexDistribution", "TauSequence", "build_fg", "build_tau", "index_distribution",
    "laurent_table", "verify_identities", "verify_laurent",
    "VarianceValue", "delta_asymptotic", "delta_closed_form", "delta_from_distribution",
    "delta_recurrence_table", "delta_sum", "delta_voisum", "e_term", "homogeneous_check",
    "j_m_quadrature",
]
