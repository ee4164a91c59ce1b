"""
q-Difference operators for qkernel.

The q-derivative D_q f(x) = (f(x) - f(qx)) / x and the q-shift
eta^r f(x) = f(q^r x), acting either on black-box callables or on the
coefficient vectors of homogeneous bivariate polynomials.
"""

import logging
from enum import Enum
from typing import Callable

from qkernel.qcore import DomainError, QContext, Scalar
from qkernel.qpoly import BivariatePolynomial

logger = logging.getLogger(__name__)


class Axis(Enum):
    """Variable an operator acts on."""
    X = "x"
    Y = "y"


def qderiv_poly(p: BivariatePolynomial, axis: Axis, ctx: QContext) -> BivariatePolynomial:
    """
    q-Derivative of a homogeneous polynomial along one variable.

    Uses D x^k = (1 - q^k) x^(k-1). Constants and the zero polynomial map
    to the zero polynomial.
    """
    n = p.degree
    if n <= 0:
        return BivariatePolynomial.zero()
    c = p.coeffs
    if axis is Axis.X:
        return BivariatePolynomial(tuple((1 - ctx.q ** k) * c[k] for k in range(1, n + 1)))
    return BivariatePolynomial(tuple((1 - ctx.q ** (n - k)) * c[k] for k in range(n)))


def qshift_poly(p: BivariatePolynomial, axis: Axis, r, ctx: QContext) -> BivariatePolynomial:
    """
    q-Shift eta^r along one variable: x -> q^r x (or y -> q^r y).

    r may be negative; exact mode needs an integer r.
    """
    n = p.degree
    if n < 0:
        return p
    if axis is Axis.X:
        return BivariatePolynomial(tuple(ctx.power(r * k) * c for k, c in enumerate(p.coeffs)))
    return BivariatePolynomial(tuple(ctx.power(r * (n - k)) * c for k, c in enumerate(p.coeffs)))


def multiply(p: BivariatePolynomial, r: BivariatePolynomial) -> BivariatePolynomial:
    """Product of two homogeneous polynomials; degrees add."""
    if p.degree < 0 or r.degree < 0:
        return BivariatePolynomial.zero()
    out = [0 * p.coeffs[0]] * (p.degree + r.degree + 1)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(r.coeffs):
            out[i + j] += a * b
    return BivariatePolynomial(tuple(out))


def leibniz_residual(
    f: BivariatePolynomial,
    g: BivariatePolynomial,
    axis: Axis,
    ctx: QContext,
) -> BivariatePolynomial:
    """D(fg) - [D(f) g + eta(f) D(g)], coefficientwise."""
    lhs = qderiv_poly(multiply(f, g), axis, ctx)
    rhs = multiply(qderiv_poly(f, axis, ctx), g) + multiply(
        qshift_poly(f, axis, 1, ctx), qderiv_poly(g, axis, ctx)
    )
    return lhs - rhs


def qderiv_fn(f: Callable[[Scalar], Scalar], x, ctx: QContext) -> Scalar:
    """
    Pointwise q-derivative (f(x) - f(qx)) / x.

    Raises:
        DomainError: x = 0
    """
    if x == 0:
        raise DomainError("q-derivative quotient is undefined at x = 0")
    return (f(x) - f(ctx.q * x)) / x


def qderiv_partial(
    f: Callable[[Scalar, Scalar], Scalar],
    axis: Axis,
    x,
    y,
    ctx: QContext,
) -> Scalar:
    """Pointwise partial q-derivative of a two-variable callable."""
    if axis is Axis.X:
        return qderiv_fn(lambda s: f(s, y), x, ctx)
    return qderiv_fn(lambda s: f(x, s), y, ctx)
