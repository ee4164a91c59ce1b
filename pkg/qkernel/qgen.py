"""
Generating functions for qkernel.

Each kind pairs a weighted polynomial sum (left member) with a closed
product/series form (right member):

- gf.l1: sum (-1)^n q^C(n,2)/(q;q)_n L_n t^n = (ty;q)_inf 0phi2(-; q^(a+1), ty; q, -q^(a+1) x t)
- gf.l2: sum (g;q)_n/(q;q)_n L_n t^n
         = (g t y;q)_inf/(ty;q)_inf 1phi2(g; q^(a+1), g t y; q, -q^(a+1) x t)
- gf.l3: sum (q^(a+1);q)_n/(q;q)_n L_n t^n = 1/(ty;q)_inf 1phi1(-x/y; 0; q, q^(a+1) t y)
- gf.l0: sum L_n t^n/(q;q)_n = 1/(ty;q)_inf 0phi1(-; q^(a+1); q, -q^(a+1) x t)
- univariate forms of the above at y = 1 in terms of the q-Laguerre values
- gf.jacobi: sum q^C(n,2) t^n/((q;q)_n (bq;q)_n) p_n
             = 0phi1(-; aq; q, -a q x t) * sum (y/x;q)_n (-xt)^n/((q;q)_n (bq;q)_n)
- gf.bailey: the bilinear sum in p_n(x, y) p_n(u, v) against its double-sum form

All evaluation happens in floating point; exact contexts are converted.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

from qkernel.qcore import (
    DivergenceSuspected,
    DomainError,
    HyperSeries,
    PochhammerTable,
    QContext,
    SeriesResult,
    TruncationExceeded,
    phi_series,
    q_pochhammer_inf,
)
from qkernel.qpoly import (
    evaluate,
    jacobi_normalized,
    laguerre_bivariate,
    univariate_laguerre,
)

logger = logging.getLogger(__name__)


class GenFunKind(Enum):
    """Generating-function identities."""
    L1 = "gf.l1"
    L2 = "gf.l2"
    L3 = "gf.l3"
    L0 = "gf.l0"
    UNIVARIATE_ONES = "gf.univariate.ones"
    UNIVARIATE_ALTERNATING = "gf.univariate.alternating"
    UNIVARIATE_GAMMA = "gf.univariate.gamma"
    JACOBI = "gf.jacobi"
    BAILEY = "gf.bailey"


UNIVARIATE_KINDS = (
    GenFunKind.UNIVARIATE_ONES,
    GenFunKind.UNIVARIATE_ALTERNATING,
    GenFunKind.UNIVARIATE_GAMMA,
)


@dataclass(frozen=True)
class GenFunParams:
    """Parameters shared by the generating functions."""
    alpha: float = 0.3
    beta: float = 0.2
    gamma: float = 0.6
    x: float = 0.2
    y: float = 0.7
    u: float = 0.15
    v: float = 1.0
    t: float = 0.4

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
            "x": self.x, "y": self.y, "u": self.u, "v": self.v, "t": self.t,
        }


@dataclass
class GenFunVerification:
    """Outcome of comparing both members of a generating function."""
    kind: GenFunKind
    lhs: float
    rhs: float
    deviation: float
    deviation_half: float
    n_lhs: int
    rhs_terms: int
    rhs_error: float
    lhs_growing: bool


def _require_ty(kind: GenFunKind, ty: float) -> None:
    if abs(ty) >= 1:
        raise DomainError(f"{kind.value} needs |t y| < 1, got {ty}")


def _check_domain(kind: GenFunKind, p: GenFunParams, q: float) -> None:
    if kind in (GenFunKind.L2, GenFunKind.L3):
        _require_ty(kind, p.t * p.y)
    elif kind in (GenFunKind.UNIVARIATE_ONES, GenFunKind.UNIVARIATE_GAMMA):
        _require_ty(kind, p.t)
    if kind in (GenFunKind.L1, GenFunKind.L2, GenFunKind.L3, GenFunKind.L0) or kind in UNIVARIATE_KINDS:
        if not p.alpha > -1:
            raise DomainError(f"{kind.value} needs alpha > -1, got {p.alpha}")
    if kind is GenFunKind.L3 and p.y == 0:
        raise DomainError("gf.l3 needs y != 0")
    if kind is GenFunKind.JACOBI and p.x == 0:
        raise DomainError("gf.jacobi needs x != 0")
    if kind is GenFunKind.BAILEY:
        yvt = p.y * p.v * p.t
        if abs(yvt) >= 1 or yvt == 0:
            raise DomainError(f"gf.bailey needs 0 < |t y v| < 1, got {yvt}")
        ratio = p.beta * q * q * p.u * p.x / (p.y * p.v) ** 2
        if abs(ratio) >= 1:
            raise DomainError(f"gf.bailey needs |beta q^2 u x/(y v)^2| < 1, got {ratio}")


def lhs_terms(kind: GenFunKind, p: GenFunParams, N: int, ctx: QContext) -> Iterator[float]:
    """Terms n = 0..N of the left member."""
    ctx = ctx.as_float()
    q = ctx.q
    qa1 = ctx.power(p.alpha + 1)
    qq = PochhammerTable(q, ctx)
    weight_tables = {
        GenFunKind.L2: PochhammerTable(p.gamma, ctx),
        GenFunKind.L3: PochhammerTable(qa1, ctx),
        GenFunKind.UNIVARIATE_GAMMA: PochhammerTable(p.gamma, ctx),
    }
    qa1_table = PochhammerTable(qa1, ctx)
    beta_table = PochhammerTable(p.beta * q, ctx)
    alpha_table = PochhammerTable(p.alpha * q, ctx)
    ab_table = PochhammerTable(p.alpha * p.beta * q, ctx)

    for n in range(N + 1):
        tn = p.t ** n
        if kind in (GenFunKind.L1, GenFunKind.L2, GenFunKind.L3, GenFunKind.L0):
            value = evaluate(laguerre_bivariate(n, p.alpha, ctx), p.x, p.y)
            if kind is GenFunKind.L1:
                weight = (-1) ** n * ctx.power(n * (n - 1) // 2) / qq[n]
            elif kind is GenFunKind.L0:
                weight = 1 / qq[n]
            else:
                weight = weight_tables[kind][n] / qq[n]
            yield weight * value * tn
        elif kind in UNIVARIATE_KINDS:
            value = univariate_laguerre(n, p.alpha, p.x, ctx)
            if kind is GenFunKind.UNIVARIATE_ONES:
                weight = 1.0
            elif kind is GenFunKind.UNIVARIATE_ALTERNATING:
                weight = (-1) ** n * ctx.power(n * (n - 1) // 2) / qa1_table[n]
            else:
                weight = weight_tables[kind][n] / qa1_table[n]
            yield weight * value * tn
        elif kind is GenFunKind.JACOBI:
            scaled = evaluate(jacobi_normalized(n, p.alpha, p.beta, ctx), p.x, p.y)
            yield scaled * tn / (qq[n] * beta_table[n])
        else:
            first = evaluate(jacobi_normalized(n, p.alpha, p.beta, ctx), p.x, p.y)
            second = evaluate(jacobi_normalized(n, p.alpha, p.beta, ctx), p.u, p.v)
            weight = alpha_table[n] * ab_table[n] / (beta_table[n] * qq[n])
            try:
                unscale = q ** (-(n * (n - 1) // 2))
            except OverflowError as e:
                raise DivergenceSuspected(f"bilinear sum overflowed at n={n}") from e
            yield weight * (p.beta * q * p.t) ** n * first * second * unscale


def genfun_lhs(kind: GenFunKind, params: GenFunParams, N: int, ctx: QContext) -> float:
    """
    Partial sum n = 0..N of the left member.

    Raises:
        DomainError: |t y| >= 1 for kinds that need it, or other parameter violations
    """
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    _check_domain(kind, params, float(ctx.q))
    return math.fsum(lhs_terms(kind, params, N, ctx))


def _product(value: SeriesResult, *factors: SeriesResult, invert: int = 0) -> SeriesResult:
    """value * factors[0] * ... with the last `invert` factors taken reciprocally."""
    result = value.value
    relative = value.error / abs(value.value) if value.value else value.error
    terms = value.terms
    for i, factor in enumerate(factors):
        if factor.value == 0:
            if i >= len(factors) - invert:
                raise DomainError("infinite product in a denominator vanishes")
            return SeriesResult(0.0, factor.error * abs(result), terms + factor.terms)
        if i >= len(factors) - invert:
            result /= factor.value
        else:
            result *= factor.value
        relative += factor.error / abs(factor.value)
        terms += factor.terms
    return SeriesResult(result, abs(result) * relative, terms)


def genfun_rhs(
    kind: GenFunKind,
    params: GenFunParams,
    ctx: QContext,
    n_max: Optional[int] = None,
) -> SeriesResult:
    """
    Right member assembled from infinite products and phi-series.

    Args:
        kind: Identity
        params: Parameters
        ctx: Arithmetic context (evaluated in floating point)
        n_max: Optional truncation of the series factors

    Raises:
        DomainError, TruncationExceeded, DivergenceSuspected
    """
    _check_domain(kind, params, float(ctx.q))
    ctx = ctx.as_float()
    p = params
    q = ctx.q
    qa1 = ctx.power(p.alpha + 1)

    if kind is GenFunKind.BAILEY:
        return _bailey_rhs(p, ctx, n_max)

    if kind in (GenFunKind.L1, GenFunKind.UNIVARIATE_ALTERNATING):
        ty = p.t * (p.y if kind is GenFunKind.L1 else 1.0)
        series = phi_series(HyperSeries((), (qa1, ty), -qa1 * p.x * p.t), ctx, n_max)
        return _product(series, q_pochhammer_inf(ty, ctx))
    if kind in (GenFunKind.L2, GenFunKind.UNIVARIATE_GAMMA):
        ty = p.t * (p.y if kind is GenFunKind.L2 else 1.0)
        g = p.gamma
        series = phi_series(HyperSeries((g,), (qa1, g * ty), -qa1 * p.x * p.t), ctx, n_max)
        return _product(series, q_pochhammer_inf(g * ty, ctx), q_pochhammer_inf(ty, ctx), invert=1)
    if kind in (GenFunKind.L3, GenFunKind.UNIVARIATE_ONES):
        y = p.y if kind is GenFunKind.L3 else 1.0
        ty = p.t * y
        series = phi_series(HyperSeries((-p.x / y,), (0.0,), qa1 * ty), ctx, n_max)
        return _product(series, q_pochhammer_inf(ty, ctx), invert=1)
    if kind is GenFunKind.L0:
        ty = p.t * p.y
        series = phi_series(HyperSeries((), (qa1,), -qa1 * p.x * p.t), ctx, n_max)
        return _product(series, q_pochhammer_inf(ty, ctx), invert=1)

    # gf.jacobi: the second factor is a 2phi1 whose second upper parameter is 0
    first = phi_series(HyperSeries((), (p.alpha * q,), -p.alpha * q * p.x * p.t), ctx, n_max)
    second = phi_series(HyperSeries((p.y / p.x, 0.0), (p.beta * q,), -p.x * p.t), ctx, n_max)
    return _product(first, second)


def _bailey_rhs(p: GenFunParams, ctx: QContext, n_max: Optional[int]) -> SeriesResult:
    q = ctx.q
    policy = ctx.trunc
    yv = p.y * p.v
    yvt = yv * p.t
    ab = p.alpha * p.beta

    prefactor = _product(
        q_pochhammer_inf(-ab * q * yvt, ctx), q_pochhammer_inf(-yvt, ctx), invert=1
    )
    qq = PochhammerTable(q, ctx)
    ab_table = PochhammerTable(ab * q, ctx)
    x_table = PochhammerTable(p.beta * q * p.x / p.y, ctx)
    u_table = PochhammerTable(p.beta * q * p.u / p.v, ctx)
    d1_table = PochhammerTable(-ab * q * yvt, ctx)
    d2_table = PochhammerTable(-q / yvt, ctx)
    alpha_table = PochhammerTable(p.alpha * q, ctx)
    beta_table = PochhammerTable(p.beta * q, ctx)
    rx = p.beta * q * q * p.u * p.x / yv ** 2
    sx = q / yv

    limit = policy.max_terms if n_max is None else min(n_max, policy.max_terms)
    total = 0.0
    small = 0
    growing = 0
    previous_block = None
    last_block = 0.0
    settled = False
    d = 0
    while d <= limit:
        denominator = d1_table[d] * d2_table[d]
        if denominator == 0:
            raise DomainError(f"double-sum denominator vanishes on diagonal {d}")
        block = []
        for r in range(d + 1):
            s = d - r
            numerator = ab_table[2 * r + 2 * s] * x_table[s] * u_table[s]
            block.append(
                rx ** r * sx ** s * numerator
                / (qq[r] * qq[s] * denominator * alpha_table[r] * beta_table[s])
            )
        block_sum = math.fsum(block)
        block_abs = math.fsum(abs(b) for b in block)
        total += block_sum
        last_block = block_abs
        d += 1
        if block_abs <= policy.tail_tol * (1 + abs(total)):
            small += 1
            if small >= policy.consecutive_small:
                settled = True
                break
        else:
            small = 0
        if d > 20 and previous_block is not None and block_abs > previous_block:
            growing += 1
            if growing >= policy.consecutive_small:
                raise DivergenceSuspected(f"bilinear double sum still growing at diagonal {d}")
        else:
            growing = 0
        previous_block = block_abs

    if not settled and n_max is None:
        raise TruncationExceeded(f"bilinear double sum not settled after {limit} diagonals")
    series = SeriesResult(total, max(last_block, 2.2e-16 * abs(total)), d)
    return _product(series, prefactor)


def genfun_verify(
    kind: GenFunKind,
    params: GenFunParams,
    ctx: QContext,
    N_lhs: int = 60,
) -> GenFunVerification:
    """
    Compare the partial sum of the left member with the right member.

    Deviation is |LHS_N - RHS| / (1 + |RHS|); the same quantity at N/2 shows
    the direction of convergence.
    """
    _check_domain(kind, params, float(ctx.q))
    terms = list(lhs_terms(kind, params, N_lhs, ctx))
    lhs = math.fsum(terms)
    lhs_half = math.fsum(terms[: N_lhs // 2 + 1])
    rhs = genfun_rhs(kind, params, ctx)
    scale = 1 + abs(rhs.value)
    tail = [abs(term) for term in terms[-3:]]
    growing = len(tail) == 3 and tail[0] < tail[1] < tail[2]
    if growing:
        logger.warning(f"{kind.value}: left-member terms still growing at n={N_lhs}")
    result = GenFunVerification(
        kind=kind,
        lhs=lhs,
        rhs=rhs.value,
        deviation=abs(lhs - rhs.value) / scale,
        deviation_half=abs(lhs_half - rhs.value) / scale,
        n_lhs=N_lhs,
        rhs_terms=rhs.terms,
        rhs_error=rhs.error,
        lhs_growing=growing,
    )
    logger.debug(f"{kind.value}: deviation {result.deviation:.3e} (N/2: {result.deviation_half:.3e})")
    return result
