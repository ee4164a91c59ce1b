"""
Structural properties of bivariate little q-Jacobi polynomials.

Features:
- Orthogonality sums against the discrete weight, with the closed-form norm
- Three-term recurrence in two variants of the C_n coefficient
- q-Difference equation, forward and backward shift relations
- Large-degree asymptotic ratio

Residual operations return a Residual whose scale is 1 plus the summed
magnitudes of the individual terms, so float results can be judged without
reference to the size of p_n.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

from qkernel.qcore import (
    DomainError,
    QContext,
    Scalar,
    TruncationExceeded,
    q_pochhammer,
    q_pochhammer_inf,
)
from qkernel.qpoly import evaluate, jacobi_bivariate, jacobi_normalized, magnitude

logger = logging.getLogger(__name__)


class RecurrenceVariant(Enum):
    """C_n variants: (1 - alpha q^n) as printed, or the standard (1 - q^n)."""
    AS_PRINTED = "as_printed"
    STANDARD_KS = "standard_ks"


@dataclass(frozen=True)
class RecurrenceCoeffs:
    A: Scalar
    C: Scalar
    variant: RecurrenceVariant


@dataclass(frozen=True)
class Residual:
    """Signed residual and the rounding scale it should be judged against."""
    value: Scalar
    scale: Scalar

    @property
    def relative(self) -> float:
        return float(abs(self.value) / self.scale)

    def is_zero(self) -> bool:
        return self.value == 0


@dataclass(frozen=True)
class OrthogonalityRecord:
    m: int
    n: int
    lhs_sum: float
    rhs_closed_form: float
    deviation: float
    terms: int


@dataclass(frozen=True)
class AsymptoticRecord:
    n: int
    ratio: float
    limit: float
    deviation: float


def _nonzero(value: Scalar, what: str) -> Scalar:
    if value == 0:
        raise DomainError(f"{what} vanishes")
    return value


def recurrence_coefficients(
    n: int,
    alpha,
    beta,
    variant: RecurrenceVariant,
    ctx: QContext,
) -> RecurrenceCoeffs:
    """
    A_n = q^n (1 - a q^(n+1))(1 - ab q^(n+1)) / ((1 - ab q^(2n+1))(1 - ab q^(2n+2)))
    C_n = a q^n (1 - X)(1 - b q^n) / ((1 - ab q^(2n))(1 - ab q^(2n+1)))
    with X = a q^n (as printed) or q^n (standard).
    """
    alpha = ctx.scalar(alpha)
    beta = ctx.scalar(beta)
    q = ctx.q
    ab = alpha * beta
    A = q ** n * (1 - alpha * q ** (n + 1)) * (1 - ab * q ** (n + 1))
    A /= _nonzero((1 - ab * q ** (2 * n + 1)) * (1 - ab * q ** (2 * n + 2)), "A_n denominator")

    if variant is RecurrenceVariant.STANDARD_KS:
        if n == 0:
            return RecurrenceCoeffs(A, ctx.zero, variant)
        first = 1 - q ** n
    else:
        first = 1 - alpha * q ** n
    C = alpha * q ** n * first * (1 - beta * q ** n)
    C /= _nonzero((1 - ab * q ** (2 * n)) * (1 - ab * q ** (2 * n + 1)), "C_n denominator")
    return RecurrenceCoeffs(A, C, variant)


def recurrence_residual(
    n: int,
    alpha,
    beta,
    x,
    y,
    variant: RecurrenceVariant,
    ctx: QContext,
) -> Residual:
    """
    -x p_n - [A_n p_(n+1) - y (A_n + C_n) p_n + y^2 C_n p_(n-1)], with p_(-1) = 0.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    x, y = ctx.scalar(x), ctx.scalar(y)
    coeffs = recurrence_coefficients(n, alpha, beta, variant, ctx)
    A, C = coeffs.A, coeffs.C
    p_next = jacobi_bivariate(n + 1, alpha, beta, ctx)
    p_this = jacobi_bivariate(n, alpha, beta, ctx)
    terms = [
        -x * evaluate(p_this, x, y),
        -A * evaluate(p_next, x, y),
        y * (A + C) * evaluate(p_this, x, y),
    ]
    scale = 1 + abs(x) * magnitude(p_this, x, y) + abs(A) * magnitude(p_next, x, y)
    scale += abs(y * (A + C)) * magnitude(p_this, x, y)
    if n > 0:
        p_prev = jacobi_bivariate(n - 1, alpha, beta, ctx)
        terms.append(-y * y * C * evaluate(p_prev, x, y))
        scale += abs(y * y * C) * magnitude(p_prev, x, y)
    return Residual(sum(terms), scale)


def adjudicate_recurrence(
    n_max: int,
    alpha,
    beta,
    x,
    y,
    ctx: QContext,
) -> Dict[RecurrenceVariant, List[Residual]]:
    """Residuals of both variants for n = 0..n_max."""
    return {
        variant: [recurrence_residual(n, alpha, beta, x, y, variant, ctx) for n in range(n_max + 1)]
        for variant in RecurrenceVariant
    }


def zero_variants(residuals: Dict[RecurrenceVariant, List[Residual]]) -> List[RecurrenceVariant]:
    """Variants whose residuals all vanish exactly."""
    return [v for v, rs in residuals.items() if all(r.is_zero() for r in rs)]


def _check_box(alpha: Scalar, beta: Scalar, y: Scalar, q: Scalar) -> None:
    if not (0 < alpha < 1 / q and 0 < beta < 1 / q):
        raise DomainError(
            f"orthogonality needs 0 < alpha, beta < 1/q, got alpha={alpha}, beta={beta}"
        )
    if y == 0:
        raise DomainError("orthogonality needs y != 0")


def orthogonality_norm(n: int, alpha, beta, y, ctx: QContext) -> float:
    """
    (ab q^2;q)_inf/(a q;q)_inf (1 - ab q)(a q)^n/(1 - ab q^(2n+1))
    (q;q)_n (b q;q)_n/((a q;q)_n (ab q;q)_n) y^(2n)
    """
    fctx = ctx.as_float()
    q = fctx.q
    a, b, y = float(alpha), float(beta), float(y)
    ab = a * b
    ratio = q_pochhammer_inf(ab * q * q, fctx).value / q_pochhammer_inf(a * q, fctx).value
    norm = ratio * (1 - ab * q) * (a * q) ** n / (1 - ab * q ** (2 * n + 1))
    norm *= q_pochhammer(q, fctx, n) * q_pochhammer(b * q, fctx, n)
    norm /= q_pochhammer(a * q, fctx, n) * q_pochhammer(ab * q, fctx, n)
    return norm * y ** (2 * n)


def orthogonality_check(
    m: int,
    n: int,
    alpha,
    beta,
    y,
    ctx: QContext,
) -> OrthogonalityRecord:
    """
    Weighted sum sum_k (b q;q)_k/(q;q)_k (a q)^k p_m(q^k y, y) p_n(q^k y, y)
    against its closed form h_n y^(2n) delta_mn.

    Sums run in the context's backend (exact sums avoid the cancellation of
    off-diagonal entries); the closed form is always floating point.
    Diagonal deviation is relative to h_n; off-diagonal deviation is |lhs|
    relative to sqrt(h_m h_n).

    Raises:
        DomainError: parameters outside 0 < alpha, beta < 1/q or y = 0
        TruncationExceeded: the sum did not settle within max_terms
    """
    alpha, beta, y = ctx.scalar(alpha), ctx.scalar(beta), ctx.scalar(y)
    q = ctx.q
    _check_box(alpha, beta, y, q)
    policy = ctx.trunc
    pm = jacobi_bivariate(m, alpha, beta, ctx)
    pn = jacobi_bivariate(n, alpha, beta, ctx)
    tol = ctx.scalar(policy.tail_tol)

    weight = ctx.one
    point = y
    total = ctx.zero
    small = 0
    k = 0
    while True:
        if k >= policy.max_terms:
            raise TruncationExceeded(f"orthogonality sum ({m}, {n}) not settled")
        term = weight * evaluate(pm, point, y) * evaluate(pn, point, y)
        total += term
        k += 1
        if abs(term) <= tol * (1 + abs(total)):
            small += 1
            if small >= policy.consecutive_small:
                break
        else:
            small = 0
        weight *= (1 - beta * q ** k) / (1 - q ** k) * alpha * q
        point *= q

    h_m = orthogonality_norm(m, alpha, beta, y, ctx)
    h_n = orthogonality_norm(n, alpha, beta, y, ctx)
    lhs = float(total)
    if m == n:
        rhs = h_n
        deviation = abs(lhs - rhs) / abs(rhs)
    else:
        rhs = 0.0
        deviation = abs(lhs) / math.sqrt(abs(h_m * h_n))
    return OrthogonalityRecord(m, n, lhs, rhs, deviation, k)


def gram_matrix(size: int, alpha, beta, y, ctx: QContext) -> List[OrthogonalityRecord]:
    """Orthogonality records for 0 <= m <= n < size."""
    return [
        orthogonality_check(m, n, alpha, beta, y, ctx)
        for n in range(size)
        for m in range(n + 1)
    ]


def qdifference_residual(n: int, alpha, beta, x, y, ctx: QContext) -> Residual:
    """
    x (q^-n - 1)(1 - ab q^(n+1)) p_n(x, y)
    - [a(b q x - y) p_n(q x, y) - (x - y + a(b q x - y)) p_n(x, y) + (x - y) p_n(x/q, y)]
    """
    alpha, beta = ctx.scalar(alpha), ctx.scalar(beta)
    x, y = ctx.scalar(x), ctx.scalar(y)
    q = ctx.q
    p = jacobi_bivariate(n, alpha, beta, ctx)
    lead = x * (q ** (-n) - 1) * (1 - alpha * beta * q ** (n + 1))
    c_up = alpha * (beta * q * x - y)
    c_mid = x - y + alpha * (beta * q * x - y)
    c_down = x - y
    value = (
        lead * evaluate(p, x, y)
        - c_up * evaluate(p, q * x, y)
        + c_mid * evaluate(p, x, y)
        - c_down * evaluate(p, x / q, y)
    )
    scale = 1 + (abs(lead) + abs(c_mid)) * magnitude(p, x, y)
    scale += abs(c_up) * magnitude(p, q * x, y) + abs(c_down) * magnitude(p, x / q, y)
    return Residual(value, scale)


def forward_shift_residual(n: int, alpha, beta, x, y, ctx: QContext) -> Residual:
    """
    [p_n(x, y) - p_n(q x, y)]
    + q^(1-n)(1 - q^n)(1 - ab q^(n+1))/(1 - a q) x p_(n-1)^(qa, qb)(x, y)

    Raises:
        DomainError: n < 1 or 1 - a q = 0
    """
    if n < 1:
        raise DomainError(f"forward shift needs n >= 1, got {n}")
    alpha, beta = ctx.scalar(alpha), ctx.scalar(beta)
    x, y = ctx.scalar(x), ctx.scalar(y)
    q = ctx.q
    p = jacobi_bivariate(n, alpha, beta, ctx)
    shifted = jacobi_bivariate(n - 1, q * alpha, q * beta, ctx)
    factor = q ** (1 - n) * (1 - q ** n) * (1 - alpha * beta * q ** (n + 1))
    factor /= _nonzero(1 - alpha * q, "1 - alpha q")
    value = evaluate(p, x, y) - evaluate(p, q * x, y) + factor * x * evaluate(shifted, x, y)
    scale = 1 + magnitude(p, x, y) + magnitude(p, q * x, y)
    scale += abs(factor * x) * magnitude(shifted, x, y)
    return Residual(value, scale)


def backward_shift_residual(n: int, alpha, beta, x, y, ctx: QContext) -> Residual:
    """
    a(b x - y) p_n(x, y) - (x - y) p_n(x/q, y) - (1 - a) p_(n+1)^(a/q, b/q)(x, y)

    Raises:
        DomainError: the (a/q, b/q) family is degenerate
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    alpha, beta = ctx.scalar(alpha), ctx.scalar(beta)
    x, y = ctx.scalar(x), ctx.scalar(y)
    q = ctx.q
    p = jacobi_bivariate(n, alpha, beta, ctx)
    shifted = jacobi_bivariate(n + 1, alpha / q, beta / q, ctx)
    c_here = alpha * (beta * x - y)
    c_down = x - y
    value = (
        c_here * evaluate(p, x, y)
        - c_down * evaluate(p, x / q, y)
        - (1 - alpha) * evaluate(shifted, x, y)
    )
    scale = 1 + abs(c_here) * magnitude(p, x, y) + abs(c_down) * magnitude(p, x / q, y)
    scale += abs(1 - alpha) * magnitude(shifted, x, y)
    return Residual(value, scale)


def asymptotic_ratio(n: int, alpha, beta, x, y, ctx: QContext) -> AsymptoticRecord:
    """
    p_n(x, y) / [(-x)^n q^(n(1-n)/2)] against its limit (y/x;q)_inf / (a q;q)_inf.

    The ratio is evaluated from the normalized coefficients of q^(n(n-1)/2) p_n,
    so large n stays finite.

    Raises:
        DomainError: x = 0, or y/x = q^(-k) so that the limit vanishes
    """
    fctx = ctx.as_float()
    x, y = float(x), float(y)
    if x == 0:
        raise DomainError("asymptotic ratio needs x != 0")
    limit = q_pochhammer_inf(y / x, fctx).value / q_pochhammer_inf(float(alpha) * fctx.q, fctx).value
    if limit == 0:
        raise DomainError(f"(y/x;q)_inf vanishes at y/x = {y / x}")
    scaled = evaluate(jacobi_normalized(n, float(alpha), float(beta), fctx), x, y)
    ratio = scaled / (-x) ** n
    return AsymptoticRecord(n, ratio, limit, abs(ratio - limit) / abs(limit))
