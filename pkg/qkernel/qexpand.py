"""
Basis expansion of bivariate Taylor grids for qkernel.

A function of (x, y) solves a family's q-partial differential equation iff
its Maclaurin coefficients are forced by the first row:

    lambda_(m,n) = lambda_(0,n+m) * g(m, n)

with g the family's single-pair factor. This module reads expansion
coefficients off a grid, checks that forcing (admissibility), rebuilds grids
from coefficients, and does the same pair by pair for several variables.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from qkernel.qcore import DomainError, QContext, Scalar, q_binomial, q_pochhammer
from qkernel.qpoly import BivariatePolynomial, Family, FamilyParams

logger = logging.getLogger(__name__)

DEFAULT_FLOAT_TOL = 1e-9


class GridFormatError(ValueError):
    """Malformed Taylor grid input."""


@dataclass(frozen=True)
class TaylorGrid:
    """Maclaurin coefficients lambda_(m,n) of x^m y^n; row m, column n."""
    entries: Tuple[Tuple[Scalar, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        if not rows or not rows[0]:
            raise GridFormatError("Taylor grid must be nonempty")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise GridFormatError("Taylor grid rows differ in length")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def zeros(cls, rows: int, cols: int, ctx: QContext) -> "TaylorGrid":
        return cls(tuple(tuple(ctx.zero for _ in range(cols)) for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        m, n = index
        return self.entries[m][n]

    def first_row(self) -> List[Scalar]:
        return list(self.entries[0])

    def homogeneous_components(self) -> List[BivariatePolynomial]:
        """
        Homogeneous parts of degree d = 0..min(M, N); part d collects
        lambda_(k, d-k) as the coefficient of x^k y^(d-k).
        """
        top = min(self.rows, self.cols) - 1
        return [
            BivariatePolynomial(tuple(self.entries[k][d - k] for k in range(d + 1)))
            for d in range(top + 1)
        ]

    def to_json(self) -> dict:
        def render(value):
            return value if isinstance(value, float) else str(value)

        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[render(v) for v in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, payload: dict, ctx: QContext) -> "TaylorGrid":
        """
        Parse {"rows", "cols", "entries"}; entries may be numbers or
        decimal/rational strings.

        Raises:
            GridFormatError: missing keys, shape mismatch or unparseable entries
        """
        if not isinstance(payload, dict):
            raise GridFormatError("grid JSON must be an object")
        try:
            rows = int(payload["rows"])
            cols = int(payload["cols"])
            raw = payload["entries"]
        except (KeyError, TypeError, ValueError) as e:
            raise GridFormatError(f"grid JSON needs rows, cols and entries: {e}") from e
        if not isinstance(raw, list) or len(raw) != rows:
            raise GridFormatError(f"expected {rows} rows of entries")
        entries = []
        for row in raw:
            if not isinstance(row, list) or len(row) != cols:
                raise GridFormatError(f"expected {cols} entries per row")
            try:
                entries.append(tuple(ctx.scalar(v) for v in row))
            except (DomainError, TypeError, ValueError) as e:
                raise GridFormatError(f"bad grid entry: {e}") from e
        return cls(tuple(entries))


@dataclass
class ExpansionResult:
    """Expansion coefficients read from a grid and the admissibility verdict."""
    coeffs: List[Scalar]
    admissible: bool
    max_violation: Scalar
    violation_at: Optional[Tuple[int, int]] = None


def _laguerre_factor(m: int, n: int, alpha, ctx: QContext) -> Scalar:
    alpha = ctx.scalar(alpha)
    q_alpha = ctx.power(alpha)
    sign = -1 if m % 2 else 1
    return (
        sign
        * q_binomial(n + m, m, ctx)
        * ctx.power(m * m) * q_alpha ** m
        / q_pochhammer(q_alpha * ctx.q, ctx, m)
    )


def _jacobi_factor(m: int, n: int, alpha, beta, ctx: QContext) -> Scalar:
    alpha = ctx.scalar(alpha)
    beta = ctx.scalar(beta)
    sign = -1 if m % 2 else 1
    return (
        sign
        * ctx.power(m * (1 - 2 * n - m) // 2)
        * q_binomial(n + m, m, ctx)
        * q_pochhammer(alpha * beta * ctx.q ** (m + n + 1), ctx, m)
        / q_pochhammer(alpha * ctx.q, ctx, m)
    )


def pair_factor(family: FamilyParams, m: int, n: int, ctx: QContext) -> Scalar:
    """g(m, n) with lambda_(m,n) = lambda_(0,n+m) g(m, n) for one variable pair."""
    if family.family is Family.Q_LAGUERRE:
        return _laguerre_factor(m, n, family.alpha, ctx)
    alpha, beta = family.jacobi_parameters()
    return _jacobi_factor(m, n, alpha, beta, ctx)


def _first_row_entry(lam0: Sequence[Scalar], index: int) -> Scalar:
    if index >= len(lam0):
        raise IndexError(
            f"need lambda_(0,{index}) but only {len(lam0)} first-row entries given"
        )
    return lam0[index]


def laguerre_lambda(m: int, n: int, lam0: Sequence[Scalar], alpha, ctx: QContext) -> Scalar:
    """
    lambda_(m,n) = lambda_(0,n+m) (-1)^m [n+m, m] q^(m^2+m alpha) / (q^(alpha+1);q)_m.

    Raises:
        IndexError: lam0 shorter than n + m + 1
    """
    return _first_row_entry(lam0, n + m) * _laguerre_factor(m, n, alpha, ctx)


def jacobi_lambda(m: int, n: int, lam0: Sequence[Scalar], alpha, beta, ctx: QContext) -> Scalar:
    """
    lambda_(m,n) = lambda_(0,n+m) (-1)^m q^(m(1-2n-m)/2) [n+m, m]
    (alpha beta q^(m+n+1);q)_m / (alpha q;q)_m.

    Raises:
        IndexError: lam0 shorter than n + m + 1
    """
    return _first_row_entry(lam0, n + m) * _jacobi_factor(m, n, alpha, beta, ctx)


def laguerre_one_step(m: int, n: int, alpha, ctx: QContext) -> Scalar:
    """
    lambda_(m,n) / lambda_(m-1,n+1)
    = -q^(alpha+1) q^(2(m-1)) (1 - q^(n+1)) / ((1 - q^(alpha+m)) (1 - q^m)).
    """
    if m < 1:
        raise DomainError(f"one-step ratio needs m >= 1, got {m}")
    q_alpha = ctx.power(ctx.scalar(alpha))
    q = ctx.q
    return (
        -q_alpha * q * q ** (2 * (m - 1)) * (1 - q ** (n + 1))
        / ((1 - q_alpha * q ** m) * (1 - q ** m))
    )


def jacobi_one_step(m: int, n: int, alpha, beta, ctx: QContext) -> Scalar:
    """
    lambda_(m,n) / lambda_(m-1,n+1)
    = -q (1 - q^(n+1)) (q^(-(n+1)) - alpha beta q^(2m-1)) / ((1 - q^m)(1 - alpha q^m)).
    """
    if m < 1:
        raise DomainError(f"one-step ratio needs m >= 1, got {m}")
    alpha = ctx.scalar(alpha)
    beta = ctx.scalar(beta)
    q = ctx.q
    return (
        -q * (1 - q ** (n + 1)) * (q ** (-(n + 1)) - alpha * beta * q ** (2 * m - 1))
        / ((1 - q ** m) * (1 - alpha * q ** m))
    )


def _deviation(entry: Scalar, predicted: Scalar) -> Scalar:
    return abs(entry - predicted) / (1 + abs(predicted))


def _default_tol(ctx: QContext, tol) -> Scalar:
    if tol is None:
        return ctx.zero if ctx.is_exact else DEFAULT_FLOAT_TOL
    return ctx.scalar(tol)


def expand(
    grid: TaylorGrid,
    family: FamilyParams,
    ctx: QContext,
    tol=None,
) -> ExpansionResult:
    """
    Expansion coefficients of a grid in the family's basis.

    The first row gives the candidate coefficients; every entry with
    m + n < cols is compared against its forced value, and the largest
    deviation |entry - predicted| / (1 + |predicted|) decides admissibility.

    Args:
        grid: Taylor grid of the function
        family: Basis family
        ctx: Arithmetic context
        tol: Admissibility tolerance; default 0 in exact mode, 1e-9 in float mode

    Returns:
        ExpansionResult (coefficients are returned even when not admissible)

    Raises:
        GridFormatError: more rows than columns; rows m >= cols have no
            first-row coefficient to predict them from
    """
    if grid.rows > grid.cols:
        raise GridFormatError(
            f"grid has {grid.rows} rows but {grid.cols} columns; rows may not exceed columns"
        )
    tol = _default_tol(ctx, tol)
    lam0 = grid.first_row()
    worst = ctx.zero
    worst_at: Optional[Tuple[int, int]] = None
    for m in range(1, grid.rows):
        for n in range(grid.cols - m):
            predicted = lam0[n + m] * pair_factor(family, m, n, ctx)
            deviation = _deviation(grid[m, n], predicted)
            if deviation > worst:
                worst, worst_at = deviation, (m, n)
    admissible = worst <= tol
    logger.debug(f"expand {family.family.value}: max violation {float(worst):.3e} at {worst_at}")
    return ExpansionResult(list(lam0), admissible, worst, worst_at)


def synthesize(
    coeffs: Sequence,
    family: FamilyParams,
    M: int,
    N: int,
    ctx: QContext,
) -> TaylorGrid:
    """Grid of sum_n coeffs[n] * basis_n truncated to rows 0..M, columns 0..N."""
    entries = [[ctx.zero] * (N + 1) for _ in range(M + 1)]
    for n, weight in enumerate(coeffs):
        weight = ctx.scalar(weight)
        if weight == 0:
            continue
        for k, c in enumerate(family.basis(n, ctx).coeffs):
            if k <= M and n - k <= N:
                entries[k][n - k] += weight * c
    return TaylorGrid(tuple(tuple(row) for row in entries))


@dataclass
class TaylorTensor:
    """
    Sparse Maclaurin coefficients of a function of k variable pairs.

    Keys are (m_1, n_1, ..., m_k, n_k) for x_1^m_1 y_1^n_1 ... ; shape gives
    the exclusive bound of each index; missing entries are zero.
    """
    shape: Tuple[int, ...]
    entries: Dict[Tuple[int, ...], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if not self.shape or len(self.shape) % 2:
            raise GridFormatError("tensor shape needs an even, nonzero number of axes")
        for key in self.entries:
            if len(key) != len(self.shape) or any(not 0 <= i < s for i, s in zip(key, self.shape)):
                raise GridFormatError(f"index {key} outside shape {self.shape}")

    @property
    def pairs(self) -> int:
        return len(self.shape) // 2

    def get(self, key: Tuple[int, ...], default: Scalar = 0) -> Scalar:
        return self.entries.get(key, default)


@dataclass
class MultiExpansionResult:
    coeffs: Dict[Tuple[int, ...], Scalar]
    admissible: bool
    max_violation: Scalar
    violation_at: Optional[Tuple[int, ...]] = None


def expand_multivariate(
    tensor: TaylorTensor,
    families: Sequence[FamilyParams],
    ctx: QContext,
    tol=None,
) -> MultiExpansionResult:
    """
    Several-pair expansion, one pair at a time.

    lambda_(m_1,n_1,...,m_k,n_k) must equal lambda_(0,n_1+m_1,...,0,n_k+m_k)
    times the product of the pair factors; coefficients are the entries with
    every m_j = 0.
    """
    if len(families) != tensor.pairs:
        raise DomainError(f"need {tensor.pairs} families, got {len(families)}")
    tol = _default_tol(ctx, tol)
    m_bounds = tensor.shape[0::2]
    n_bounds = tensor.shape[1::2]
    if any(mb > nb for mb, nb in zip(m_bounds, n_bounds)):
        raise GridFormatError(f"tensor shape {tensor.shape} has a pair with more rows than columns")

    coeffs = {
        ns: tensor.get(_interleave((0,) * len(ns), ns), ctx.zero)
        for ns in itertools.product(*(range(b) for b in n_bounds))
    }
    worst = ctx.zero
    worst_at = None
    for ms in itertools.product(*(range(b) for b in m_bounds)):
        if not any(ms):
            continue
        for ns in itertools.product(*(range(b) for b in n_bounds)):
            shifted = tuple(m + n for m, n in zip(ms, ns))
            if any(s >= b for s, b in zip(shifted, n_bounds)):
                continue
            predicted = coeffs[shifted]
            for family, m, n in zip(families, ms, ns):
                predicted *= pair_factor(family, m, n, ctx)
            key = _interleave(ms, ns)
            deviation = _deviation(tensor.get(key, ctx.zero), predicted)
            if deviation > worst:
                worst, worst_at = deviation, key
    return MultiExpansionResult(coeffs, worst <= tol, worst, worst_at)


def synthesize_multivariate(
    coeffs: Dict[Tuple[int, ...], Scalar],
    families: Sequence[FamilyParams],
    shape: Tuple[int, ...],
    ctx: QContext,
) -> TaylorTensor:
    """Tensor of sum c_(n_1..n_k) prod_j basis_(n_j)(x_j, y_j), truncated to shape."""
    entries: Dict[Tuple[int, ...], Scalar] = {}
    for ns, weight in coeffs.items():
        weight = ctx.scalar(weight)
        if weight == 0:
            continue
        bases = [family.basis(n, ctx).coeffs for family, n in zip(families, ns)]
        for ks in itertools.product(*(range(len(b)) for b in bases)):
            key = _interleave(ks, tuple(n - k for n, k in zip(ns, ks)))
            if any(i >= s for i, s in zip(key, shape)):
                continue
            value = weight
            for basis, k in zip(bases, ks):
                value *= basis[k]
            entries[key] = entries.get(key, ctx.zero) + value
    return TaylorTensor(tuple(shape), entries)


def _interleave(ms: Sequence[int], ns: Sequence[int]) -> Tuple[int, ...]:
    return tuple(i for pair in zip(ms, ns) for i in pair)
