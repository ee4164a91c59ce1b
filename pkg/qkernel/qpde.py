"""
Characterizing q-partial differential equations for qkernel.

Residuals LHS - RHS of the equations satisfied by the bivariate families:

- q-Laguerre:   D_x (1 - q^a eta_x) f = -q^(a+1) eta_x^2 D_y f
- little q-Jacobi: D_x (1 - a eta_x) f = -q D_y (eta_y^-1 - q a b eta_x^2) f
- little q-Legendre: D_x (1 - eta_x) f = -q D_y (eta_y^-1 - q eta_x^2) f
- little q-Laguerre (Wall): D_x (1 - a eta_x) f = -q D_y eta_y^-1 f
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

from qkernel.qcore import DomainError, QContext, Scalar
from qkernel.qops import Axis, qderiv_partial, qderiv_poly, qshift_poly
from qkernel.qpoly import BivariatePolynomial, Family, FamilyParams

logger = logging.getLogger(__name__)


class PdeFamily(Enum):
    LAGUERRE = "laguerre"
    JACOBI = "jacobi"
    LEGENDRE = "legendre"
    WALL = "wall"


@dataclass(frozen=True)
class PdeKind:
    """Which characterizing equation, with its parameters."""
    family: PdeFamily
    alpha: Optional[Scalar] = None
    beta: Optional[Scalar] = None

    @classmethod
    def laguerre(cls, alpha) -> "PdeKind":
        return cls(PdeFamily.LAGUERRE, alpha)

    @classmethod
    def jacobi(cls, alpha, beta) -> "PdeKind":
        return cls(PdeFamily.JACOBI, alpha, beta)

    @classmethod
    def legendre(cls) -> "PdeKind":
        return cls(PdeFamily.LEGENDRE)

    @classmethod
    def wall(cls, alpha) -> "PdeKind":
        return cls(PdeFamily.WALL, alpha)

    @classmethod
    def for_family(cls, params: FamilyParams) -> "PdeKind":
        """Equation characterizing a polynomial family."""
        if params.family is Family.Q_LAGUERRE:
            return cls.laguerre(params.alpha)
        if params.family is Family.LITTLE_Q_LEGENDRE:
            return cls.legendre()
        if params.family is Family.LITTLE_Q_LAGUERRE:
            return cls.wall(params.alpha)
        return cls.jacobi(params.alpha, params.beta)


def pde_sides(
    p: BivariatePolynomial,
    kind: PdeKind,
    ctx: QContext,
) -> Tuple[BivariatePolynomial, BivariatePolynomial]:
    """Both members of the equation applied to p, as degree n-1 polynomials."""
    q = ctx.q
    family = kind.family

    if family is PdeFamily.LAGUERRE:
        alpha = ctx.scalar(kind.alpha)
        if not alpha > -1:
            raise DomainError(f"q-Laguerre equation needs alpha > -1, got {alpha}")
        q_alpha = ctx.power(alpha)
        lhs = qderiv_poly(p - q_alpha * qshift_poly(p, Axis.X, 1, ctx), Axis.X, ctx)
        rhs = -(q_alpha * q) * qshift_poly(qderiv_poly(p, Axis.Y, ctx), Axis.X, 2, ctx)
        return lhs, rhs

    if family is PdeFamily.LEGENDRE:
        lhs = qderiv_poly(p - qshift_poly(p, Axis.X, 1, ctx), Axis.X, ctx)
        inner = qshift_poly(p, Axis.Y, -1, ctx) - q * qshift_poly(p, Axis.X, 2, ctx)
        return lhs, -q * qderiv_poly(inner, Axis.Y, ctx)

    alpha = ctx.scalar(kind.alpha)
    lhs = qderiv_poly(p - alpha * qshift_poly(p, Axis.X, 1, ctx), Axis.X, ctx)
    if family is PdeFamily.WALL:
        inner = qshift_poly(p, Axis.Y, -1, ctx)
    else:
        beta = ctx.scalar(kind.beta)
        inner = qshift_poly(p, Axis.Y, -1, ctx) - (q * alpha * beta) * qshift_poly(p, Axis.X, 2, ctx)
    return lhs, -q * qderiv_poly(inner, Axis.Y, ctx)


def pde_residual(p: BivariatePolynomial, kind: PdeKind, ctx: QContext) -> BivariatePolynomial:
    """
    LHS - RHS of the characterizing equation on p.

    Zero (exactly, in exact mode) iff p solves the equation.
    """
    lhs, rhs = pde_sides(p, kind, ctx)
    return lhs - rhs


def residual_norm(p: BivariatePolynomial, kind: PdeKind, ctx: QContext) -> Tuple[BivariatePolynomial, float]:
    """
    Residual together with its scale-free size
    max|LHS - RHS| / (1 + max(max|LHS|, max|RHS|)).
    """
    lhs, rhs = pde_sides(p, kind, ctx)
    residual = lhs - rhs
    scale = 1.0 + max(lhs.max_abs(), rhs.max_abs())
    return residual, residual.max_abs() / scale


def pde_residual_fn(
    f: Callable[[Scalar, Scalar], Scalar],
    kind: PdeKind,
    x,
    y,
    ctx: QContext,
) -> Scalar:
    """
    Pointwise LHS - RHS of the equation for an arbitrary callable f(x, y).

    Raises:
        DomainError: x = 0 or y = 0
    """
    if x == 0 or y == 0:
        raise DomainError("pointwise residual needs x != 0 and y != 0")
    q = ctx.q
    family = kind.family

    if family is PdeFamily.LAGUERRE:
        q_alpha = ctx.power(ctx.scalar(kind.alpha))
        lhs = qderiv_partial(lambda s, t: f(s, t) - q_alpha * f(q * s, t), Axis.X, x, y, ctx)
        rhs = -(q_alpha * q) * qderiv_partial(lambda s, t: f(q * q * s, t), Axis.Y, x, y, ctx)
        return lhs - rhs

    if family is PdeFamily.LEGENDRE:
        alpha, beta = 1, 1
    elif family is PdeFamily.WALL:
        alpha, beta = ctx.scalar(kind.alpha), 0
    else:
        alpha, beta = ctx.scalar(kind.alpha), ctx.scalar(kind.beta)

    lhs = qderiv_partial(lambda s, t: f(s, t) - alpha * f(q * s, t), Axis.X, x, y, ctx)
    rhs = -q * qderiv_partial(
        lambda s, t: f(s, t / q) - q * alpha * beta * f(q * q * s, t), Axis.Y, x, y, ctx
    )
    return lhs - rhs
