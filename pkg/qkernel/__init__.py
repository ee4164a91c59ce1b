"""
qkernel: q-series numerics, bivariate q-Laguerre and little q-Jacobi
polynomials, and a verification harness for their identities.
"""

from qkernel.qcore import (
    DivergenceSuspected,
    DomainError,
    HyperSeries,
    Mode,
    QContext,
    QSeriesError,
    SeriesResult,
    TruncationExceeded,
    TruncationPolicy,
    phi_series,
    q_binomial,
    q_pochhammer,
    q_pochhammer_inf,
)
from qkernel.qpoly import (
    BivariatePolynomial,
    Family,
    FamilyParams,
    evaluate,
    jacobi_bivariate,
    laguerre_bivariate,
    specialize,
)

__version__ = "0.1.0"

__all__ = [
    "BivariatePolynomial",
    "DivergenceSuspected",
    "DomainError",
    "Family",
    "FamilyParams",
    "HyperSeries",
    "Mode",
    "QContext",
    "QSeriesError",
    "SeriesResult",
    "TruncationExceeded",
    "TruncationPolicy",
    "evaluate",
    "jacobi_bivariate",
    "laguerre_bivariate",
    "phi_series",
    "q_binomial",
    "q_pochhammer",
    "q_pochhammer_inf",
    "specialize",
]
