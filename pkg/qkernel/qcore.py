"""
Scalar q-arithmetic for qkernel.

This module holds the arithmetic context shared by every other module and the
scalar building blocks of basic hypergeometric series.

Features:
- QContext: base q, exact-rational or float mode, truncation policy
- Finite and infinite q-shifted factorials
- Gaussian (q-binomial) coefficients
- r-phi-s series by term-ratio recursion, with terminating-series detection,
  a tail stopping rule and divergence detection
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, float]

DEFAULT_MAX_TERMS = 10000
DEFAULT_TAIL_TOL = 1e-16
DEFAULT_CONSECUTIVE_SMALL = 3

# Term growth is only treated as divergence past this index.
DIVERGENCE_WARMUP = 20

# Float tolerance for recognizing a parameter as q^(-m).
TERMINATING_RTOL = 1e-14


class QSeriesError(Exception):
    """Base class for qkernel numerical errors."""


class DomainError(QSeriesError, ValueError):
    """Parameters outside the domain of an operation."""


class TruncationExceeded(QSeriesError, RuntimeError):
    """A series or product hit max_terms before its stopping rule fired."""


class DivergenceSuspected(QSeriesError, RuntimeError):
    """Series terms kept growing past the warm-up index."""


class Mode(Enum):
    """Arithmetic backend."""
    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for infinite series and products."""
    max_terms: int = DEFAULT_MAX_TERMS
    tail_tol: float = DEFAULT_TAIL_TOL
    consecutive_small: int = DEFAULT_CONSECUTIVE_SMALL

    def __post_init__(self):
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")
        if not self.tail_tol > 0:
            raise DomainError(f"tail_tol must be positive, got {self.tail_tol}")
        if self.consecutive_small < 2:
            raise DomainError(
                f"consecutive_small must be >= 2, got {self.consecutive_small}"
            )


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated series or product with its error estimate."""
    value: Scalar
    error: float
    terms: int
    terminated: bool = False


@lru_cache(maxsize=4096)
def _float_power(q: float, exponent: float) -> float:
    return math.exp(exponent * math.log(q))


def _is_integral(value) -> bool:
    if isinstance(value, int):
        return True
    if isinstance(value, Fraction):
        return value.denominator == 1
    if isinstance(value, float):
        return value.is_integer()
    return False


@dataclass(frozen=True)
class QContext:
    """
    Arithmetic context: the base q, the backend and the truncation policy.

    Exact contexts carry a Fraction q and keep every quantity rational;
    float contexts carry a float q in (0, 1).
    """
    q: Scalar
    mode: Mode = Mode.FLOAT
    trunc: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        if self.mode is Mode.EXACT:
            if not isinstance(self.q, Fraction):
                object.__setattr__(self, "q", _to_fraction(self.q))
        else:
            object.__setattr__(self, "q", float(self.q))
        if not 0 < self.q < 1:
            raise DomainError(f"q must lie in (0, 1), got {self.q}")

    @classmethod
    def exact(cls, q, trunc: Optional[TruncationPolicy] = None) -> "QContext":
        return cls(_to_fraction(q), Mode.EXACT, trunc or TruncationPolicy())

    @classmethod
    def floating(cls, q, trunc: Optional[TruncationPolicy] = None) -> "QContext":
        return cls(float(_to_fraction(q)) if isinstance(q, str) else float(q),
                   Mode.FLOAT, trunc or TruncationPolicy())

    @property
    def is_exact(self) -> bool:
        return self.mode is Mode.EXACT

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.is_exact else 1.0

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.is_exact else 0.0

    def scalar(self, value) -> Scalar:
        """Coerce a number or decimal string into the active backend."""
        if self.is_exact:
            return _to_fraction(value)
        if isinstance(value, str):
            return float(_to_fraction(value))
        return float(value)

    def as_float(self) -> "QContext":
        """Float twin of this context (identity for float contexts)."""
        if not self.is_exact:
            return self
        return QContext(float(self.q), Mode.FLOAT, self.trunc)

    def power(self, exponent) -> Scalar:
        """
        q raised to an arbitrary real exponent.

        Integer exponents are computed by repeated multiplication and stay
        rational in exact mode; other exponents use exp(e ln q), cached.

        Raises:
            DomainError: non-integer exponent in exact mode
        """
        if _is_integral(exponent):
            return self.q ** int(exponent)
        if self.is_exact:
            raise DomainError(
                f"exact mode needs integer exponents of q, got {exponent}"
            )
        return _float_power(self.q, float(exponent))


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"cannot represent {value} exactly")
        # repr keeps the shortest decimal, so 0.4 becomes 2/5
        return Fraction(repr(value))
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise DomainError(f"not a rational number: {value!r}") from e


def q_pochhammer(a, ctx: QContext, n: int) -> Scalar:
    """
    Finite q-shifted factorial (a;q)_n = prod_{k<n} (1 - a q^k).

    Args:
        a: Base parameter
        ctx: Arithmetic context
        n: Number of factors (>= 0)

    Returns:
        The product, exact in exact mode
    """
    if n < 0:
        raise DomainError(f"(a;q)_n needs n >= 0, got {n}")
    a = ctx.scalar(a)
    result = ctx.one
    qk = ctx.one
    for _ in range(n):
        result *= 1 - a * qk
        qk *= ctx.q
    return result


def q_pochhammer_inf(a, ctx: QContext) -> SeriesResult:
    """
    Infinite q-shifted factorial (a;q)_inf.

    The product is always formed in floating point. It stops once
    |a q^k| < tail_tol for consecutive_small successive factors; the error
    bound comes from the geometric remainder of the log-product.

    Raises:
        TruncationExceeded: max_terms factors used before the rule fired
    """
    policy = ctx.trunc
    q = float(ctx.q)
    aqk = float(a)
    value = 1.0
    small = 0
    k = 0
    while True:
        if k >= policy.max_terms:
            raise TruncationExceeded(
                f"(a;q)_inf with a={a} not settled after {policy.max_terms} factors"
            )
        value *= 1.0 - aqk
        k += 1
        if abs(aqk) < policy.tail_tol:
            small += 1
            if small >= policy.consecutive_small:
                break
        else:
            small = 0
        aqk *= q

    rest = abs(aqk * q)
    tail = rest / ((1.0 - q) * (1.0 - rest))
    error = abs(value) * math.expm1(tail)
    return SeriesResult(value=value, error=error, terms=k)


def q_binomial(n: int, k: int, ctx: QContext) -> Scalar:
    """Gaussian binomial [n, k] = (q;q)_n / ((q;q)_k (q;q)_{n-k})."""
    if not 0 <= k <= n:
        raise DomainError(f"q-binomial needs 0 <= k <= n, got n={n}, k={k}")
    q = ctx.q
    return q_pochhammer(q, ctx, n) / (q_pochhammer(q, ctx, k) * q_pochhammer(q, ctx, n - k))


def q_binomial_product(n: int, k: int, ctx: QContext) -> Scalar:
    """Gaussian binomial from the product prod_{i=1}^{k} (1-q^(n-k+i))/(1-q^i)."""
    if not 0 <= k <= n:
        raise DomainError(f"q-binomial needs 0 <= k <= n, got n={n}, k={k}")
    result = ctx.one
    for i in range(1, k + 1):
        result *= (1 - ctx.q ** (n - k + i)) / (1 - ctx.q ** i)
    return result


class PochhammerTable:
    """Lazily extended table of (a;q)_n for repeated indexed access."""

    def __init__(self, a, ctx: QContext):
        self._a = ctx.scalar(a)
        self._q = ctx.q
        self._qk = ctx.one
        self._values: List[Scalar] = [ctx.one]

    def __getitem__(self, n: int) -> Scalar:
        if n < 0:
            raise DomainError(f"(a;q)_n needs n >= 0, got {n}")
        while len(self._values) <= n:
            self._values.append(self._values[-1] * (1 - self._a * self._qk))
            self._qk *= self._q
        return self._values[n]


@dataclass(frozen=True)
class HyperSeries:
    """
    An r-phi-s series: upper parameters a_1..a_r, lower b_1..b_s, argument z.

    Term n is prod (a_i;q)_n / (prod (b_j;q)_n (q;q)_n)
    * [(-1)^n q^(n choose 2)]^(1+s-r) * z^n.
    """
    upper: Tuple = ()
    lower: Tuple = ()
    z: Scalar = 0.0

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))

    @property
    def balance(self) -> int:
        """Exponent 1 + s - r on (-1)^n q^(n choose 2)."""
        return 1 + len(self.lower) - len(self.upper)


def terminating_index(upper: Sequence, ctx: QContext) -> Optional[int]:
    """
    Smallest m such that some upper parameter equals q^(-m), else None.

    Exact mode compares rationals exactly; float mode accepts a relative
    mismatch of TERMINATING_RTOL.
    """
    best: Optional[int] = None
    for a in upper:
        m = _terminating_exponent(ctx.scalar(a), ctx)
        if m is not None and (best is None or m < best):
            best = m
    return best


def _terminating_exponent(a: Scalar, ctx: QContext) -> Optional[int]:
    if a <= 0:
        return None
    if ctx.is_exact:
        value = Fraction(1)
        m = 0
        while value <= a and m <= ctx.trunc.max_terms:
            if value == a:
                return m
            value /= ctx.q
            m += 1
        return None
    m = round(math.log(a) / -math.log(ctx.q))
    if m < 0:
        return None
    if abs(a - ctx.q ** (-m)) <= TERMINATING_RTOL * abs(a):
        return m
    return None


def phi_series(
    spec: HyperSeries,
    ctx: QContext,
    n_max: Optional[int] = None,
) -> SeriesResult:
    """
    Evaluate a basic hypergeometric series by the term-ratio recursion.

    Args:
        spec: Series parameters
        ctx: Arithmetic context
        n_max: Highest term index to include; None sums until the stopping
            rule fires (or max_terms is exhausted)

    Returns:
        SeriesResult; terminated is True when an upper parameter q^(-m)
        cut the sum at n = m

    Raises:
        DomainError: a lower parameter zeroes a denominator
        TruncationExceeded: max_terms reached without n_max and without settling
        DivergenceSuspected: term magnitudes kept growing past n = 20
    """
    if n_max is not None and n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")

    policy = ctx.trunc
    q = ctx.q
    upper = [ctx.scalar(a) for a in spec.upper]
    lower = [ctx.scalar(b) for b in spec.lower]
    z = ctx.scalar(spec.z)
    balance = spec.balance

    stop_at = terminating_index(upper, ctx)
    capped = n_max is not None and n_max <= policy.max_terms
    limit = n_max if capped else policy.max_terms
    if stop_at is not None:
        limit = min(limit, stop_at)

    tol = ctx.scalar(policy.tail_tol)
    term = ctx.one
    total = term
    abs_total = abs(term)
    qn = ctx.one
    small = 0
    growing = 0
    ratio_mag = 0.0
    n = 0
    settled = False
    while n < limit:
        numerator = ctx.one
        for a in upper:
            numerator *= 1 - a * qn
        denominator = 1 - q * qn
        for b in lower:
            factor = 1 - b * qn
            if factor == 0 or (not ctx.is_exact and abs(factor) <= TERMINATING_RTOL):
                raise DomainError(
                    f"lower parameter {b} zeroes (b;q)_{n + 1} in {spec}"
                )
            denominator *= factor
        ratio = numerator / denominator * z
        if balance:
            ratio *= (-qn) ** balance

        previous = term
        term = previous * ratio
        n += 1
        total += term
        abs_total += abs(term)
        qn *= q
        if previous != 0:
            ratio_mag = float(abs(ratio))

        if stop_at is not None:
            continue
        if abs(term) <= tol * (1 + abs(total)):
            small += 1
            if small >= policy.consecutive_small:
                settled = True
                break
        else:
            small = 0
        if n > DIVERGENCE_WARMUP and abs(term) > abs(previous):
            growing += 1
            if growing >= policy.consecutive_small:
                raise DivergenceSuspected(
                    f"terms of {spec} still growing at n={n}"
                )
        else:
            growing = 0

    terminated = stop_at is not None and n == stop_at
    if not settled and not terminated and not capped:
        raise TruncationExceeded(
            f"{spec} not settled after {policy.max_terms} terms"
        )

    if terminated:
        error = 0.0 if ctx.is_exact else 2.2e-16 * float(abs_total) * max(n, 1)
    elif ratio_mag < 1.0:
        error = float(abs(term)) * ratio_mag / (1.0 - ratio_mag)
    else:
        error = float(abs(term)) * policy.consecutive_small
    if not ctx.is_exact:
        error = max(error, 2.2e-16 * float(abs_total))

    logger.debug(f"phi_series {spec}: {n} terms, terminated={terminated}")
    return SeriesResult(value=total, error=error, terms=n + 1, terminated=terminated)
