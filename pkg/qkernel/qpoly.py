"""
Bivariate q-polynomial families for qkernel.

Polynomials are homogeneous in (x, y) and stored as the coefficient vector
of x^k y^(n-k), k = 0..n.

Features:
- BivariatePolynomial with linear arithmetic and stable evaluation
- Bivariate q-Laguerre polynomials L_n^(a)(x, y)
- Bivariate little q-Jacobi polynomials p_n^(a,b)(x, y), plus the
  little q-Legendre and little q-Laguerre (Wall) specializations
- Normalized q^(n(n-1)/2) p_n coefficients for large-n evaluation
- Univariate q-Laguerre and little q-Jacobi values for cross-checks
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from qkernel.qcore import (
    DomainError,
    HyperSeries,
    PochhammerTable,
    QContext,
    Scalar,
    phi_series,
    q_pochhammer,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BivariatePolynomial:
    """
    Homogeneous polynomial sum_k coeffs[k] x^k y^(degree-k).

    The zero polynomial of the operators is the empty vector (degree -1).
    """
    coeffs: Tuple[Scalar, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def zero(cls) -> "BivariatePolynomial":
        return cls(())

    @classmethod
    def monomial(cls, n: int, k: int, coefficient: Scalar = 1) -> "BivariatePolynomial":
        """coefficient * x^k y^(n-k)."""
        if not 0 <= k <= n:
            raise DomainError(f"monomial x^{k} y^{n - k} needs 0 <= k <= n")
        coeffs = [0 * coefficient] * (n + 1)
        coeffs[k] = coefficient
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def max_abs(self) -> float:
        if not self.coeffs:
            return 0.0
        return float(np.max(np.abs(self.as_floats())))

    def as_floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=float)

    def _combine(self, other: "BivariatePolynomial", sign: int) -> "BivariatePolynomial":
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return BivariatePolynomial(tuple(sign * c for c in other.coeffs))
        if self.degree != other.degree:
            raise ValueError(
                f"cannot combine homogeneous degrees {self.degree} and {other.degree}"
            )
        return BivariatePolynomial(
            tuple(a + sign * b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return BivariatePolynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, scalar):
        if isinstance(scalar, BivariatePolynomial):
            return NotImplemented
        return BivariatePolynomial(tuple(scalar * c for c in self.coeffs))

    __rmul__ = __mul__


class Family(Enum):
    """Polynomial families."""
    Q_LAGUERRE = "laguerre"
    LITTLE_Q_JACOBI = "jacobi"
    LITTLE_Q_LEGENDRE = "legendre"
    LITTLE_Q_LAGUERRE = "wall"


@dataclass(frozen=True)
class FamilyParams:
    """A polynomial family together with its parameters."""
    family: Family
    alpha: Optional[Scalar] = None
    beta: Optional[Scalar] = None

    def __post_init__(self):
        if self.family in (Family.Q_LAGUERRE, Family.LITTLE_Q_LAGUERRE, Family.LITTLE_Q_JACOBI):
            if self.alpha is None:
                raise DomainError(f"{self.family.value} family needs alpha")
        if self.family is Family.LITTLE_Q_JACOBI and self.beta is None:
            raise DomainError("jacobi family needs beta")
        if self.family is Family.Q_LAGUERRE and not _as_number(self.alpha) > -1:
            raise DomainError(f"q-Laguerre needs alpha > -1, got {self.alpha}")

    @classmethod
    def laguerre(cls, alpha) -> "FamilyParams":
        return cls(Family.Q_LAGUERRE, alpha)

    @classmethod
    def jacobi(cls, alpha, beta) -> "FamilyParams":
        return cls(Family.LITTLE_Q_JACOBI, alpha, beta)

    @classmethod
    def legendre(cls) -> "FamilyParams":
        return cls(Family.LITTLE_Q_LEGENDRE)

    @classmethod
    def wall(cls, alpha) -> "FamilyParams":
        return cls(Family.LITTLE_Q_LAGUERRE, alpha)

    @property
    def is_jacobi_type(self) -> bool:
        return self.family is not Family.Q_LAGUERRE

    def jacobi_parameters(self) -> Tuple[Scalar, Scalar]:
        """Effective (alpha, beta) of a Jacobi-type family."""
        if self.family is Family.LITTLE_Q_LEGENDRE:
            return 1, 1
        if self.family is Family.LITTLE_Q_LAGUERRE:
            return self.alpha, 0
        if self.family is Family.LITTLE_Q_JACOBI:
            return self.alpha, self.beta
        raise DomainError("q-Laguerre is not a Jacobi-type family")

    def basis(self, n: int, ctx: QContext) -> BivariatePolynomial:
        return specialize(self, n, ctx)


def _as_number(value) -> float:
    try:
        if isinstance(value, str):
            return float(Fraction(value))
        return float(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise DomainError(f"not a number: {value!r}") from e


def _powers(ctx: QContext, count: int) -> list:
    """[q^0, q^1, ..., q^(count-1)]."""
    powers = [ctx.one]
    for _ in range(count - 1):
        powers.append(powers[-1] * ctx.q)
    return powers


def laguerre_bivariate(n: int, alpha, ctx: QContext) -> BivariatePolynomial:
    """
    Bivariate q-Laguerre polynomial L_n^(alpha)(x, y).

    c_k = (-1)^k [n, k] q^(k^2 + k alpha) / (q^(alpha+1); q)_k, built by the
    ratio c_(k+1)/c_k.

    Raises:
        DomainError: alpha <= -1, or non-integer alpha in exact mode
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    alpha = ctx.scalar(alpha)
    if not alpha > -1:
        raise DomainError(f"q-Laguerre needs alpha > -1, got {alpha}")
    q_alpha = ctx.power(alpha)
    qp = _powers(ctx, 2 * n + 2)

    coeffs = [ctx.one]
    for k in range(n):
        ratio = -(1 - qp[n - k]) / (1 - qp[k + 1])
        ratio *= q_alpha * qp[2 * k + 1] / (1 - q_alpha * qp[k + 1])
        coeffs.append(coeffs[-1] * ratio)
    return BivariatePolynomial(tuple(coeffs))


def _check_jacobi_alpha(n: int, alpha: Scalar, ctx: QContext) -> None:
    qk = ctx.q
    for j in range(1, n + 1):
        factor = 1 - alpha * qk
        if factor == 0 or (not ctx.is_exact and abs(factor) < 1e-15):
            raise DomainError(
                f"1 - alpha q^{j} vanishes for alpha={alpha}, q={ctx.q}"
            )
        qk *= ctx.q


def jacobi_bivariate(n: int, alpha, beta, ctx: QContext) -> BivariatePolynomial:
    """
    Bivariate little q-Jacobi polynomial p_n^(alpha,beta)(x, y).

    c_k = (-1)^k q^(k(k+1-2n)/2) [n, k] (alpha beta q^(n+1); q)_k / (alpha q; q)_k

    Raises:
        DomainError: 1 - alpha q^j = 0 for some 1 <= j <= n
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    alpha = ctx.scalar(alpha)
    beta = ctx.scalar(beta)
    _check_jacobi_alpha(n, alpha, ctx)
    ab = alpha * beta
    qp = _powers(ctx, 2 * n + 2)

    coeffs = [ctx.one]
    for k in range(n):
        ratio = -(1 - qp[n - k]) * (1 - ab * qp[n + k + 1])
        ratio /= (1 - qp[k + 1]) * (1 - alpha * qp[k + 1])
        ratio *= ctx.q ** (k + 1 - n)
        coeffs.append(coeffs[-1] * ratio)
    return BivariatePolynomial(tuple(coeffs))


def jacobi_normalized(n: int, alpha, beta, ctx: QContext) -> BivariatePolynomial:
    """
    Coefficients of q^(n(n-1)/2) p_n^(alpha,beta)(x, y).

    d_k = (-1)^k q^((n-k)(n-k-1)/2) [n, k] (alpha beta q^(n+1); q)_k / (alpha q; q)_k,
    bounded in n, so large degrees neither overflow nor lose the leading terms.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    alpha = ctx.scalar(alpha)
    beta = ctx.scalar(beta)
    _check_jacobi_alpha(n, alpha, ctx)
    upper = PochhammerTable(alpha * beta * ctx.q ** (n + 1), ctx)
    lower = PochhammerTable(alpha * ctx.q, ctx)

    coeffs = []
    binomial = ctx.one
    for k in range(n + 1):
        if k:
            binomial *= (1 - ctx.q ** (n - k + 1)) / (1 - ctx.q ** k)
        m = n - k
        sign = -1 if k % 2 else 1
        coeffs.append(sign * ctx.power(m * (m - 1) // 2) * binomial * upper[k] / lower[k])
    return BivariatePolynomial(tuple(coeffs))


def specialize(params: FamilyParams, n: int, ctx: QContext) -> BivariatePolynomial:
    """Degree-n basis polynomial of a family."""
    if params.family is Family.Q_LAGUERRE:
        return laguerre_bivariate(n, params.alpha, ctx)
    alpha, beta = params.jacobi_parameters()
    return jacobi_bivariate(n, alpha, beta, ctx)


def evaluate(p: BivariatePolynomial, x, y) -> Scalar:
    """
    Value of p at (x, y).

    Horner in t = x/y scaled by y^n when |y| >= |x|, Horner in u = y/x scaled
    by x^n otherwise, and a direct monomial sum when x or y is zero.
    """
    n = p.degree
    if n < 0:
        return 0 * x
    c = p.coeffs
    if x == 0 or y == 0:
        return sum(c[k] * x ** k * y ** (n - k) for k in range(n + 1))
    if abs(y) >= abs(x):
        t = x / y
        acc = c[n]
        for k in range(n - 1, -1, -1):
            acc = acc * t + c[k]
        return acc * y ** n
    u = y / x
    acc = c[0]
    for k in range(1, n + 1):
        acc = acc * u + c[k]
    return acc * x ** n


def magnitude(p: BivariatePolynomial, x, y) -> Scalar:
    """sum_k |c_k| |x|^k |y|^(n-k); the rounding scale of evaluate(p, x, y)."""
    return evaluate(BivariatePolynomial(tuple(abs(c) for c in p.coeffs)), abs(x), abs(y))


def univariate_laguerre(n: int, alpha, x, ctx: QContext) -> Scalar:
    """
    Univariate q-Laguerre value (q^(alpha+1);q)_n / (q;q)_n * L_n^(alpha)(x, 1).
    """
    p = laguerre_bivariate(n, alpha, ctx)
    scale = q_pochhammer(ctx.power(ctx.scalar(alpha) + 1), ctx, n) / q_pochhammer(ctx.q, ctx, n)
    return scale * evaluate(p, ctx.scalar(x), ctx.one)


def univariate_jacobi(n: int, alpha, beta, x, ctx: QContext) -> Scalar:
    """Little q-Jacobi value 2phi1(q^-n, alpha beta q^(n+1); alpha q; q, q x)."""
    alpha = ctx.scalar(alpha)
    beta = ctx.scalar(beta)
    spec = HyperSeries(
        upper=(ctx.q ** (-n), alpha * beta * ctx.q ** (n + 1)),
        lower=(alpha * ctx.q,),
        z=ctx.q * ctx.scalar(x),
    )
    return phi_series(spec, ctx).value


def coefficient_table(polys: Sequence[BivariatePolynomial]) -> list:
    """Coefficient vectors rendered as strings, for reports and the CLI."""
    return [[str(c) for c in p.coeffs] for p in polys]


if __name__ == "__main__":
    ctx = QContext.exact(Fraction(1, 2))
    for n in range(4):
        print(f"L_{n}^(1):", [str(c) for c in laguerre_bivariate(n, 1, ctx).coeffs])
        print(f"p_{n}^(3,5):", [str(c) for c in jacobi_bivariate(n, 3, 5, ctx).coeffs])
