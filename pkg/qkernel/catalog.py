"""
Identity catalog and batch runner for the verification harness.

Every identity id maps to one runner that samples parameters, calls the
library operation it exercises and returns VerificationReport records.

Features:
- Ordered registry of the 24 identities with their default arithmetic mode
- Seeded sampling: scrambled Halton points for float suites, random
  rationals for exact suites
- Thread-pool execution with deterministic catalog-ordered output
- Summary aggregation with known (expected) failures
"""

import fnmatch
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc
from tqdm import tqdm

from qkernel.config import RunConfig
from qkernel.qclassic import (
    RecurrenceVariant,
    adjudicate_recurrence,
    asymptotic_ratio,
    backward_shift_residual,
    forward_shift_residual,
    gram_matrix,
    qdifference_residual,
    zero_variants,
)
from qkernel.qcore import (
    DomainError,
    HyperSeries,
    Mode,
    QContext,
    QSeriesError,
    phi_series,
    q_binomial,
    q_binomial_product,
    q_pochhammer,
    q_pochhammer_inf,
)
from qkernel.qexpand import TaylorGrid, expand, synthesize
from qkernel.qgen import GenFunKind, GenFunParams, UNIVARIATE_KINDS, genfun_rhs, genfun_verify, lhs_terms
from qkernel.qops import Axis, leibniz_residual, qderiv_fn
from qkernel.qpde import PdeKind, pde_residual, residual_norm
from qkernel.qpoly import BivariatePolynomial, FamilyParams, jacobi_bivariate

logger = logging.getLogger(__name__)

GF_N_LHS = 60
BAILEY_N_LHS = 40
PDE_MAX_DEGREE = 12
COHERENCE_MAX_DEGREE = 10
EXPANSION_INSTANCES = 20
EXPANSION_MAX_DEGREE = 8
STRUCTURE_MAX_DEGREE = 8
ORTHOGONALITY_SIZE = 7
ASYMPTOTIC_DEGREES = (10, 20, 40, 80)
ASYMPTOTIC_SLACK = 1.1
ASYMPTOTIC_NOISE_FLOOR = 1e-14

INTEGER_JACOBI_PAIRS = ((3, 5), (5, 7), (7, 11))
RECURRENCE_NOTE = (
    "C_n printed with (1 - alpha q^n); the three-term recurrence holds with (1 - q^n)"
)


@dataclass
class VerificationReport:
    """One checked sample of an identity; passed iff metric <= threshold."""
    identity_id: str
    params: Dict[str, Any]
    mode: str
    metric: float
    threshold: float
    passed: bool
    truncation: Dict[str, int] = field(default_factory=lambda: {"N_lhs": 0, "terms_rhs": 0})
    seed: int = 0
    wall_time_ms: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Identity:
    """A catalog entry."""
    identity_id: str
    description: str
    operation: str
    mode: Mode
    exact_class: str
    float_class: str
    runner: Callable[["Suite"], List[VerificationReport]]
    float_only: bool = False


IDENTITIES: Dict[str, Identity] = {}


def register(
    identity_id: str,
    description: str,
    operation: str,
    mode: Mode = Mode.EXACT,
    exact_class: str = "exact",
    float_class: str = "float_identity",
):
    """Decorator adding a runner to the catalog, in definition order."""
    def wrap(runner: Callable[["Suite"], List[VerificationReport]]):
        IDENTITIES[identity_id] = Identity(
            identity_id, description, operation, mode, exact_class, float_class,
            runner, float_only=mode is Mode.FLOAT,
        )
        return runner
    return wrap


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else int(value)
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float):
        return _finite(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _finite(value: float) -> float:
    """Clamp inf/nan to the largest float so reports stay strict JSON."""
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return sys.float_info.max
    return value


class Suite:
    """Run-time state handed to a runner."""

    def __init__(self, identity: Identity, config: RunConfig, index: int):
        self.identity = identity
        self.config = config
        self.seed = config.seed + index
        mode = identity.mode
        if identity.float_only and config.mode is Mode.EXACT:
            logger.warning(f"{identity.identity_id} is a series identity; running in float mode")
            self.ctx = QContext.floating(config.q, config.trunc)
        else:
            self.ctx = config.context(mode)
        self.rng = np.random.default_rng(self.seed)

    @property
    def float_ctx(self) -> QContext:
        return self.ctx.as_float()

    def samples(self, default: int) -> int:
        return self.config.samples or default

    def threshold(self, ctx: QContext) -> float:
        identity = self.identity
        return self.config.threshold(identity.exact_class if ctx.is_exact else identity.float_class)

    def halton(self, count: int, lower: Sequence[float], upper: Sequence[float]) -> List[List[float]]:
        """count scrambled Halton points scaled to the box [lower, upper)."""
        sampler = qmc.Halton(d=len(lower), scramble=True, seed=self.seed)
        points = qmc.scale(sampler.random(count), lower, upper)
        return [[float(v) for v in row] for row in points]

    def rational(self, low: int = -9, high: int = 9) -> Fraction:
        return Fraction(int(self.rng.integers(low, high + 1)), int(self.rng.integers(1, 10)))

    def report(
        self,
        params: Dict[str, Any],
        metric,
        ctx: Optional[QContext] = None,
        N_lhs: int = 0,
        terms_rhs: int = 0,
        threshold: Optional[float] = None,
    ) -> VerificationReport:
        ctx = ctx or self.ctx
        metric = _finite(metric)
        threshold = self.threshold(ctx) if threshold is None else threshold
        return VerificationReport(
            identity_id=self.identity.identity_id,
            params=_jsonable({"q": ctx.q, **params}),
            mode=ctx.mode.value,
            metric=metric,
            threshold=threshold,
            passed=metric <= threshold,
            truncation={"N_lhs": N_lhs, "terms_rhs": terms_rhs},
            seed=self.seed,
        )

    def failure(self, params: Dict[str, Any], error: Exception, ctx: Optional[QContext] = None) -> VerificationReport:
        logger.error(f"{self.identity.identity_id} failed at {params}: {error}")
        return self.report({**params, "error": str(error)}, math.inf, ctx)


def _relative(value, scale) -> float:
    return float(abs(value)) / (1.0 + float(abs(scale)))


def _poly_metric(residual: BivariatePolynomial, scale: float, ctx: QContext) -> float:
    """Exact: max |coefficient|; float: max |coefficient| / (1 + scale)."""
    if ctx.is_exact:
        return residual.max_abs()
    return residual.max_abs() / (1.0 + scale)


def _random_poly(suite: Suite, degree: int, ctx: QContext) -> BivariatePolynomial:
    return BivariatePolynomial(tuple(ctx.scalar(suite.rational()) for _ in range(degree + 1)))


def _q_contexts(suite: Suite, extra: Sequence[Fraction] = (Fraction(1, 3),)) -> List[QContext]:
    """The configured q plus extra exact test bases."""
    ctxs = [suite.ctx]
    for q in extra:
        if q != suite.config.q:
            ctxs.append(QContext(q, suite.ctx.mode, suite.ctx.trunc))
    return ctxs


def _q_grid(suite: Suite) -> List[QContext]:
    """Float bases 0.3, 0.5, 0.7 and the configured q."""
    values = [0.3, 0.5, 0.7]
    configured = float(suite.config.q)
    if configured not in values:
        values.append(configured)
    return [QContext.floating(q, suite.config.trunc) for q in values]


# foundations


@register("eq1.1", "q-Leibniz rule D(fg) = D(f) g + eta(f) D(g)", "qops.leibniz_residual")
def run_leibniz(suite: Suite) -> List[VerificationReport]:
    ctx = suite.ctx
    reports = []
    for i in range(suite.samples(20)):
        f = _random_poly(suite, 1 + i % 4, ctx)
        g = _random_poly(suite, 1 + (i // 4) % 4, ctx)
        axis = Axis.X if i % 2 == 0 else Axis.Y
        residual = leibniz_residual(f, g, axis, ctx)
        scale = f.max_abs() * g.max_abs()
        params = {"f": list(f.coeffs), "g": list(g.coeffs), "axis": axis.value}
        reports.append(suite.report(params, _poly_metric(residual, scale, ctx)))

    # pointwise form with f = x^2, g = (x;q)_3
    for _ in range(5):
        x = ctx.scalar(suite.rational(1, 9))
        lhs = qderiv_fn(lambda s: s * s * q_pochhammer(s, ctx, 3), x, ctx)
        df = qderiv_fn(lambda s: s * s, x, ctx)
        dg = qderiv_fn(lambda s: q_pochhammer(s, ctx, 3), x, ctx)
        g_x = q_pochhammer(x, ctx, 3)
        fq = (ctx.q * x) ** 2
        value = lhs - (df * g_x + fq * dg)
        metric = float(abs(value)) if ctx.is_exact else _relative(value, abs(df * g_x) + abs(fq * dg))
        reports.append(suite.report({"f": "x^2", "g": "(x;q)_3", "x": x}, metric))
    return reports


# alternating 1phi0 sums cancel heavily as a, z approach -1 together
BINOMIAL_SAMPLE_RADIUS = 0.8
EULER_SAMPLE_RADIUS = 0.9


def _series_identity(
    suite: Suite,
    build: Callable[[QContext, float, float], Tuple[HyperSeries, float]],
    dims: int,
    radius: float = EULER_SAMPLE_RADIUS,
) -> List[VerificationReport]:
    reports = []
    box_low, box_high = [-radius] * dims, [radius] * dims
    points = suite.halton(suite.samples(8), box_low, box_high)
    for ctx in _q_grid(suite):
        for point in points:
            params = {"z": point[0]} if dims == 1 else {"a": point[0], "z": point[1]}
            try:
                spec, rhs = build(ctx, *point) if dims == 2 else build(ctx, 0.0, point[0])
                lhs = phi_series(spec, ctx)
            except QSeriesError as e:
                reports.append(suite.failure(params, e, ctx))
                continue
            reports.append(
                suite.report(params, _relative(lhs.value - rhs, rhs), ctx, terms_rhs=lhs.terms)
            )
    return reports


@register("eq1.3", "q-binomial theorem 1phi0(a;-;q,z) = (az;q)_inf/(z;q)_inf",
          "qcore.phi_series", Mode.FLOAT, float_class="float_series")
def run_binomial_theorem(suite: Suite) -> List[VerificationReport]:
    def build(ctx: QContext, a: float, z: float):
        rhs = q_pochhammer_inf(a * z, ctx).value / q_pochhammer_inf(z, ctx).value
        return HyperSeries((a,), (), z), rhs
    return _series_identity(suite, build, 2, radius=BINOMIAL_SAMPLE_RADIUS)


@register("eq1.4a", "sum z^n/(q;q)_n = 1/(z;q)_inf", "qcore.phi_series",
          Mode.FLOAT, float_class="float_series")
def run_euler_first(suite: Suite) -> List[VerificationReport]:
    def build(ctx: QContext, _a: float, z: float):
        return HyperSeries((0.0,), (), z), 1.0 / q_pochhammer_inf(z, ctx).value
    return _series_identity(suite, build, 1)


@register("eq1.4b", "sum (-1)^n q^C(n,2) z^n/(q;q)_n = (z;q)_inf", "qcore.phi_series",
          Mode.FLOAT, float_class="float_series")
def run_euler_second(suite: Suite) -> List[VerificationReport]:
    def build(ctx: QContext, _a: float, z: float):
        return HyperSeries((), (), z), q_pochhammer_inf(z, ctx).value
    return _series_identity(suite, build, 1)


@register("eq2.2", "[n,k](1-q^k) = [n,k-1](1-q^(n-k+1)) and the product form of [n,k]",
          "qcore.q_binomial")
def run_binomial_step(suite: Suite) -> List[VerificationReport]:
    ctx = suite.ctx
    q = ctx.q
    reports = []
    for n in range(1, 31):
        worst = 0.0
        for k in range(1, n + 1):
            left = q_binomial(n, k, ctx) * (1 - q ** k)
            right = q_binomial(n, k - 1, ctx) * (1 - q ** (n - k + 1))
            product = q_binomial_product(n, k, ctx)
            definition = q_binomial(n, k, ctx)
            if ctx.is_exact:
                worst = max(worst, float(abs(left - right)), float(abs(product - definition)))
            else:
                worst = max(worst, _relative(left - right, right), _relative(product - definition, definition))
        reports.append(suite.report({"n": n}, worst))
    return reports


# q-partial differential equations


def _pde_suite(
    suite: Suite,
    family_for: Callable[[Tuple], FamilyParams],
    grid: Sequence[Tuple],
    names: Sequence[str],
) -> List[VerificationReport]:
    reports = []
    for ctx in _q_contexts(suite):
        for values in grid:
            params = dict(zip(names, values))
            params["n_max"] = PDE_MAX_DEGREE
            try:
                family = family_for(values)
                kind = PdeKind.for_family(family)
                worst = 0.0
                for n in range(PDE_MAX_DEGREE + 1):
                    residual, norm = residual_norm(family.basis(n, ctx), kind, ctx)
                    worst = max(worst, residual.max_abs() if ctx.is_exact else norm)
            except DomainError as e:
                logger.info(f"{suite.identity.identity_id}: skipping degenerate {params} at q={ctx.q}: {e}")
                continue
            reports.append(suite.report(params, worst, ctx))
    return reports


@register("pde.laguerre", "q-Laguerre polynomials solve their q-PDE", "qpde.pde_residual")
def run_pde_laguerre(suite: Suite) -> List[VerificationReport]:
    return _pde_suite(suite, lambda v: FamilyParams.laguerre(v[0]), [(0,), (1,), (2,)], ["alpha"])


@register("pde.jacobi", "little q-Jacobi polynomials solve their q-PDE", "qpde.pde_residual")
def run_pde_jacobi(suite: Suite) -> List[VerificationReport]:
    grid = [(a, b) for a in (0, 1, 2) for b in (0, 1, 3)]
    return _pde_suite(suite, lambda v: FamilyParams.jacobi(*v), grid, ["alpha", "beta"])


def _coherence_suite(suite: Suite, special: PdeKind, general: PdeKind, family: FamilyParams) -> List[VerificationReport]:
    """Special-case equation against the general one on random candidates, plus the basis residual."""
    reports = []
    for ctx in _q_contexts(suite):
        worst = 0.0
        try:
            for n in range(COHERENCE_MAX_DEGREE + 1):
                candidate = _random_poly(suite, n, ctx)
                difference = pde_residual(candidate, special, ctx) - pde_residual(candidate, general, ctx)
                worst = max(worst, _poly_metric(difference, candidate.max_abs(), ctx))
                residual, norm = residual_norm(family.basis(n, ctx), special, ctx)
                worst = max(worst, residual.max_abs() if ctx.is_exact else norm)
        except DomainError as e:
            logger.info(f"{suite.identity.identity_id}: skipping q={ctx.q}: {e}")
            continue
        params = {"alpha": special.alpha, "n_max": COHERENCE_MAX_DEGREE}
        reports.append(suite.report({k: v for k, v in params.items() if v is not None}, worst, ctx))
    return reports


@register("pde.legendre", "little q-Legendre equation equals the Jacobi equation at (1, 1)",
          "qpde.pde_residual")
def run_pde_legendre(suite: Suite) -> List[VerificationReport]:
    return _coherence_suite(suite, PdeKind.legendre(), PdeKind.jacobi(1, 1), FamilyParams.legendre())


@register("pde.wall", "little q-Laguerre equation equals the Jacobi equation at (alpha, 0)",
          "qpde.pde_residual")
def run_pde_wall(suite: Suite) -> List[VerificationReport]:
    reports = []
    for alpha in (0, 1, 3):
        reports.extend(
            _coherence_suite(suite, PdeKind.wall(alpha), PdeKind.jacobi(alpha, 0), FamilyParams.wall(alpha))
        )
    return reports


# basis expansion


def _expansion_suite(suite: Suite, family: FamilyParams) -> List[VerificationReport]:
    """
    Admissibility of a grid must agree with the vanishing of the PDE residual
    of each of its homogeneous components, and synthesized grids must expand
    back to their coefficients.
    """
    ctx = suite.ctx
    kind = PdeKind.for_family(family)
    tol = ctx.zero if ctx.is_exact else suite.config.threshold("expansion")
    reports = []
    for i in range(suite.samples(EXPANSION_INSTANCES)):
        degree = 1 + i % EXPANSION_MAX_DEGREE
        style = ("synthesized", "random", "synthesized", "perturbed")[i % 4]
        coeffs = [ctx.scalar(suite.rational()) for _ in range(degree + 1)]
        if style == "random":
            grid = TaylorGrid(tuple(
                tuple(ctx.scalar(suite.rational()) for _ in range(degree + 1)) for _ in range(degree + 1)
            ))
        else:
            grid = synthesize(coeffs, family, degree, degree, ctx)
        if style == "perturbed":
            entries = [list(row) for row in grid.entries]
            entries[1][degree - 1] += 1
            grid = TaylorGrid(tuple(tuple(row) for row in entries))

        result = expand(grid, family, ctx, tol)
        solves = True
        for component in grid.homogeneous_components():
            residual, norm = residual_norm(component, kind, ctx)
            vanishes = residual.is_zero() if ctx.is_exact else norm <= tol
            solves = solves and vanishes
        consistent = result.admissible == solves
        if style == "synthesized":
            roundtrip = all(
                abs(a - b) <= tol * (1 + abs(b)) for a, b in zip(result.coeffs, coeffs)
            )
            consistent = consistent and result.admissible and roundtrip
        params = {
            "degree": degree,
            "grid": style,
            "admissible": result.admissible,
            "solves_pde": solves,
            "max_violation": float(result.max_violation),
            "violation_at": list(result.violation_at) if result.violation_at else None,
        }
        reports.append(suite.report(params, 0.0 if consistent else 1.0, threshold=0.0))
    return reports


@register("expand.laguerre", "grid admissibility iff q-Laguerre PDE, with roundtrip",
          "qexpand.expand", float_class="expansion")
def run_expand_laguerre(suite: Suite) -> List[VerificationReport]:
    return _expansion_suite(suite, FamilyParams.laguerre(1))


@register("expand.jacobi", "grid admissibility iff little q-Jacobi PDE, with roundtrip",
          "qexpand.expand", float_class="expansion")
def run_expand_jacobi(suite: Suite) -> List[VerificationReport]:
    alpha, beta = (Fraction(2, 5), Fraction(3, 10)) if suite.ctx.is_exact else (0.4, 0.3)
    return _expansion_suite(suite, FamilyParams.jacobi(alpha, beta))


# generating functions


def _genfun_report(suite: Suite, kind: GenFunKind, params: GenFunParams, N: int) -> VerificationReport:
    ctx = suite.float_ctx
    record = {"kind": kind.value, **params.as_dict(), "N": N}
    try:
        result = genfun_verify(kind, params, ctx, N)
    except QSeriesError as e:
        return suite.failure(record, e, ctx)
    record.update({
        "lhs": result.lhs,
        "rhs": result.rhs,
        "deviation_half": result.deviation_half,
        "rhs_error": result.rhs_error,
        "lhs_growing": result.lhs_growing,
    })
    return suite.report(record, result.deviation, ctx, N_lhs=N, terms_rhs=result.rhs_terms)


def _laguerre_samples(suite: Suite) -> List[GenFunParams]:
    points = suite.halton(
        suite.samples(4),
        [0.0, -0.5, 0.2, 0.1, -0.5],
        [1.0, 0.5, 0.9, 0.5, 0.9],
    )
    return [GenFunParams(alpha=a, x=x, y=y, t=t, gamma=g) for a, x, y, t, g in points]


def _laguerre_genfun(suite: Suite, kind: GenFunKind) -> List[VerificationReport]:
    params = [GenFunParams()] + _laguerre_samples(suite)
    return [_genfun_report(suite, kind, p, GF_N_LHS) for p in params]


@register("gf.l1", "alternating q-Laguerre generating function", "qgen.genfun_verify",
          Mode.FLOAT, float_class="float_series")
def run_gf_l1(suite: Suite) -> List[VerificationReport]:
    return _laguerre_genfun(suite, GenFunKind.L1)


@register("gf.l2", "q-Laguerre generating function with (gamma;q)_n weights", "qgen.genfun_verify",
          Mode.FLOAT, float_class="float_series")
def run_gf_l2(suite: Suite) -> List[VerificationReport]:
    reports = _laguerre_genfun(suite, GenFunKind.L2)
    # gamma = 0 reproduces gf.l0 term by term
    ctx = suite.float_ctx
    base = GenFunParams(gamma=0.0)
    pairs = zip(lhs_terms(GenFunKind.L2, base, GF_N_LHS, ctx), lhs_terms(GenFunKind.L0, base, GF_N_LHS, ctx))
    worst = max(_relative(a - b, b) for a, b in pairs)
    reports.append(suite.report({"check": "gamma=0 termwise vs gf.l0", **base.as_dict()}, worst, ctx, N_lhs=GF_N_LHS))
    return reports


@register("gf.l3", "q-Laguerre generating function with (q^(a+1);q)_n weights", "qgen.genfun_verify",
          Mode.FLOAT, float_class="float_series")
def run_gf_l3(suite: Suite) -> List[VerificationReport]:
    reports = _laguerre_genfun(suite, GenFunKind.L3)
    # at x = 0 the right member is (q^(a+1) t y;q)_inf / (t y;q)_inf
    ctx = suite.float_ctx
    p = GenFunParams(x=0.0)
    ty = p.t * p.y
    rhs = genfun_rhs(GenFunKind.L3, p, ctx)
    closed = q_pochhammer_inf(ctx.power(p.alpha + 1) * ty, ctx).value / q_pochhammer_inf(ty, ctx).value
    reports.append(suite.report({"check": "x=0 binomial form", **p.as_dict()}, _relative(rhs.value - closed, closed),
                                ctx, terms_rhs=rhs.terms))
    return reports


@register("gf.l0", "simple q-Laguerre generating function", "qgen.genfun_verify",
          Mode.FLOAT, float_class="float_series")
def run_gf_l0(suite: Suite) -> List[VerificationReport]:
    return _laguerre_genfun(suite, GenFunKind.L0)


@register("gf.univariate", "univariate q-Laguerre generating functions", "qgen.genfun_verify",
          Mode.FLOAT, float_class="float_series")
def run_gf_univariate(suite: Suite) -> List[VerificationReport]:
    params = [GenFunParams(y=1.0)] + [
        GenFunParams(alpha=p.alpha, x=p.x, y=1.0, t=p.t, gamma=p.gamma) for p in _laguerre_samples(suite)
    ]
    return [_genfun_report(suite, kind, p, GF_N_LHS) for kind in UNIVARIATE_KINDS for p in params]


@register("gf.jacobi", "little q-Jacobi generating function", "qgen.genfun_verify",
          Mode.FLOAT, float_class="float_series")
def run_gf_jacobi(suite: Suite) -> List[VerificationReport]:
    params = [GenFunParams(alpha=0.25, beta=0.2, x=0.6, y=1.0, t=0.3)]
    for a, b, x, y, t in suite.halton(
        suite.samples(4), [0.1, 0.0, 0.3, 0.2, 0.1], [0.9, 0.8, 1.0, 1.2, 0.5]
    ):
        params.append(GenFunParams(alpha=a, beta=b, x=x, y=y, t=t))
    return [_genfun_report(suite, GenFunKind.JACOBI, p, GF_N_LHS) for p in params]


@register("gf.bailey", "bilinear little q-Jacobi generating function", "qgen.genfun_verify",
          Mode.FLOAT, float_class="bailey")
def run_gf_bailey(suite: Suite) -> List[VerificationReport]:
    acceptance = GenFunParams(alpha=0.25, beta=0.2, x=0.1, y=1.0, u=0.15, v=1.0, t=0.3)
    # alpha = beta = 0, x = u = 0 leaves only the n = 0 term on the left
    reduced = GenFunParams(alpha=0.0, beta=0.0, x=0.0, y=1.0, u=0.0, v=1.0, t=0.3)
    return [_genfun_report(suite, GenFunKind.BAILEY, p, BAILEY_N_LHS) for p in (acceptance, reduced)]


# structure of the little q-Jacobi family


def _integer_pair(ctx: QContext) -> Tuple[int, int]:
    """First integer (alpha, beta) whose family and shifted families are defined up to the test degree."""
    top = STRUCTURE_MAX_DEGREE + 1
    for alpha, beta in INTEGER_JACOBI_PAIRS:
        try:
            jacobi_bivariate(top, alpha, beta, ctx)
            jacobi_bivariate(top, ctx.q * alpha, ctx.q * beta, ctx)
            jacobi_bivariate(top, alpha / ctx.q, beta / ctx.q, ctx)
        except DomainError:
            continue
        return alpha, beta
    raise DomainError(f"no non-degenerate integer Jacobi parameters at q={ctx.q}")


@register("orth.jacobi", "orthogonality of little q-Jacobi polynomials", "qclassic.orthogonality_check",
          exact_class="orthogonality", float_class="orthogonality")
def run_orthogonality(suite: Suite) -> List[VerificationReport]:
    ctx = suite.ctx
    alpha, beta, y = Fraction(2, 5), Fraction(3, 10), Fraction(1)
    params = {"alpha": alpha, "beta": beta, "y": y}
    try:
        records = gram_matrix(ORTHOGONALITY_SIZE, alpha, beta, y, ctx)
    except QSeriesError as e:
        return [suite.failure(params, e)]
    return [
        suite.report(
            {**params, "m": r.m, "n": r.n, "lhs": r.lhs_sum, "rhs": r.rhs_closed_form},
            r.deviation,
            terms_rhs=r.terms,
        )
        for r in records
    ]


def _structure_points(suite: Suite) -> List[Tuple[Any, Any]]:
    if suite.ctx.is_exact:
        return [(suite.ctx.scalar(suite.rational(1, 9)), suite.ctx.scalar(suite.rational(1, 9)))]
    return [(x, y) for x, y in suite.halton(suite.samples(4), [0.1, 0.1], [1.5, 1.5])]


@register("rec.jacobi", "three-term recurrence, printed and standard C_n", "qclassic.recurrence_residual")
def run_recurrence(suite: Suite) -> List[VerificationReport]:
    ctx = suite.ctx
    threshold = suite.threshold(ctx)
    reports = []
    try:
        alpha, beta = _integer_pair(ctx)
    except DomainError as e:
        return [suite.failure({}, e)]
    for x, y in _structure_points(suite):
        results = adjudicate_recurrence(STRUCTURE_MAX_DEGREE, alpha, beta, x, y, ctx)
        standard = results[RecurrenceVariant.STANDARD_KS]
        printed = results[RecurrenceVariant.AS_PRINTED]
        for n, (res_std, res_printed) in enumerate(zip(standard, printed)):
            metric = float(abs(res_std.value)) if ctx.is_exact else res_std.relative
            params = {
                "alpha": alpha, "beta": beta, "x": x, "y": y, "n": n,
                "variant": RecurrenceVariant.STANDARD_KS.value,
                "as_printed_residual": float(abs(res_printed.value)) if ctx.is_exact else res_printed.relative,
            }
            reports.append(suite.report(params, metric))

        if ctx.is_exact:
            winners = [v.value for v in zero_variants(results)]
        else:
            winners = [v.value for v, rs in results.items() if all(r.relative <= threshold for r in rs)]
        verdict = {
            "alpha": alpha, "beta": beta, "x": x, "y": y, "n_max": STRUCTURE_MAX_DEGREE,
            "zero_variants": winners, "note": RECURRENCE_NOTE,
        }
        if winners != [RecurrenceVariant.STANDARD_KS.value]:
            logger.warning(f"rec.jacobi: unexpected adjudication {winners}")
        else:
            logger.info(f"rec.jacobi: {RECURRENCE_NOTE}")
        reports.append(suite.report(verdict, 0.0 if len(winners) == 1 else 1.0, threshold=0.0))
    return reports


ShiftResidual = Callable[..., Any]


def _shift_suite(suite: Suite, residual_fn: ShiftResidual, first_degree: int) -> List[VerificationReport]:
    reports = []
    ctx = suite.ctx
    try:
        alpha, beta = _integer_pair(ctx)
    except DomainError as e:
        return [suite.failure({}, e)]
    for x, y in _structure_points(suite):
        for n in range(first_degree, STRUCTURE_MAX_DEGREE + 1):
            params = {"alpha": alpha, "beta": beta, "x": x, "y": y, "n": n}
            try:
                res = residual_fn(n, alpha, beta, x, y, ctx)
            except QSeriesError as e:
                reports.append(suite.failure(params, e))
                continue
            reports.append(suite.report(params, float(abs(res.value)) if ctx.is_exact else res.relative))

    # seeded float samples at generic parameters
    fctx = suite.float_ctx
    for a, b, x, y, u in suite.halton(suite.samples(50), [0.1, 0.1, 0.1, 0.1, 0.0], [0.9, 0.9, 1.5, 1.5, 1.0]):
        n = first_degree + int(u * (STRUCTURE_MAX_DEGREE + 1 - first_degree))
        params = {"alpha": a, "beta": b, "x": x, "y": y, "n": n}
        try:
            res = residual_fn(n, a, b, x, y, fctx)
        except QSeriesError as e:
            reports.append(suite.failure(params, e, fctx))
            continue
        reports.append(suite.report(params, res.relative, fctx, threshold=suite.config.threshold("float_identity")))
    return reports


@register("shift.qdiff", "q-difference equation of little q-Jacobi polynomials", "qclassic.qdifference_residual")
def run_qdifference(suite: Suite) -> List[VerificationReport]:
    return _shift_suite(suite, qdifference_residual, 0)


@register("shift.fwd", "forward shift relation", "qclassic.forward_shift_residual")
def run_forward_shift(suite: Suite) -> List[VerificationReport]:
    return _shift_suite(suite, forward_shift_residual, 1)


@register("shift.bwd", "backward shift relation", "qclassic.backward_shift_residual")
def run_backward_shift(suite: Suite) -> List[VerificationReport]:
    return _shift_suite(suite, backward_shift_residual, 0)


@register("asym.jacobi", "large-degree asymptotics of little q-Jacobi polynomials",
          "qclassic.asymptotic_ratio", Mode.FLOAT, float_class="asymptotic")
def run_asymptotics(suite: Suite) -> List[VerificationReport]:
    ctx = suite.float_ctx
    alpha, beta, x, y = 0.3, 0.2, 1.0, 0.4
    params: Dict[str, Any] = {"alpha": alpha, "beta": beta, "x": x, "y": y}
    try:
        records = [asymptotic_ratio(n, alpha, beta, x, y, ctx) for n in ASYMPTOTIC_DEGREES]
    except QSeriesError as e:
        return [suite.failure(params, e, ctx)]
    deviations = [r.deviation for r in records]
    monotone = all(
        later <= ASYMPTOTIC_SLACK * earlier or later < ASYMPTOTIC_NOISE_FLOOR
        for earlier, later in zip(deviations, deviations[1:])
    )
    at_40 = deviations[ASYMPTOTIC_DEGREES.index(40)]
    params.update({
        "degrees": list(ASYMPTOTIC_DEGREES),
        "deviations": deviations,
        "limit": records[0].limit,
        "monotone": monotone,
    })
    return [suite.report(params, at_40 + (0.0 if monotone else 1.0), ctx)]


# running


class UnknownIdentity(KeyError):
    """Identity id not in the catalog."""


def select(config: RunConfig, ids: Optional[Sequence[str]] = None) -> List[str]:
    """
    Catalog-ordered ids, restricted to `ids` when given and to the
    config's fnmatch patterns.

    Raises:
        UnknownIdentity: an explicit id is not registered
    """
    if ids:
        for identity_id in ids:
            if identity_id not in IDENTITIES:
                raise UnknownIdentity(identity_id)
        chosen = [i for i in IDENTITIES if i in ids]
    else:
        chosen = list(IDENTITIES)
    if config.only:
        chosen = [i for i in chosen if any(fnmatch.fnmatchcase(i, pattern) for pattern in config.only)]
    return chosen


def run_identity(identity_id: str, config: RunConfig) -> List[VerificationReport]:
    """Run one identity; library errors become a failed report."""
    identity = IDENTITIES[identity_id]
    index = list(IDENTITIES).index(identity_id)
    started = time.perf_counter()
    suite = Suite(identity, config, index)
    logger.info(f"Running {identity_id} ({identity.description})")
    try:
        reports = identity.runner(suite)
    except QSeriesError as e:
        reports = [suite.failure({}, e)]
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    logger.debug(f"{identity_id}: {len(reports)} reports in {elapsed_ms} ms")
    if config.record_timing:
        for report in reports:
            report.wall_time_ms = elapsed_ms
    failed = sum(not r.passed for r in reports)
    if failed:
        level = logging.WARNING if identity_id in config.expected_failures else logging.ERROR
        logger.log(level, f"{identity_id}: {failed}/{len(reports)} checks failed")
    else:
        logger.info(f"{identity_id}: all {len(reports)} checks passed")
    return reports


def run_identities(ids: Sequence[str], config: RunConfig) -> Dict[str, List[VerificationReport]]:
    """Run identities on a thread pool; the result preserves the order of ids."""
    results: Dict[str, List[VerificationReport]] = {}
    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        futures = {pool.submit(run_identity, i, config): i for i in ids}
        progress = tqdm(
            as_completed(futures), total=len(futures), desc="verify",
            disable=not config.progress, file=sys.stderr,
        )
        for future in progress:
            results[futures[future]] = future.result()
    return {i: results[i] for i in ids}


def summarize(results: Dict[str, List[VerificationReport]], config: RunConfig) -> Dict[str, Any]:
    """Aggregate {"total", "passed", "failed", "by_identity", "expected_failures"}."""
    by_identity = {}
    expected = []
    for identity_id, reports in results.items():
        passed = sum(r.passed for r in reports)
        ok = passed == len(reports)
        if not ok and identity_id in config.expected_failures:
            expected.append(identity_id)
        by_identity[identity_id] = {
            "reports": len(reports),
            "passed": passed,
            "failed": len(reports) - passed,
            "status": "passed" if ok else "failed",
        }
    n_passed = sum(v["status"] == "passed" for v in by_identity.values())
    return {
        "total": len(by_identity),
        "passed": n_passed,
        "failed": len(by_identity) - n_passed,
        "by_identity": by_identity,
        "expected_failures": expected,
    }


def unexpected_failures(summary: Dict[str, Any]) -> List[str]:
    return [
        i for i, entry in summary["by_identity"].items()
        if entry["status"] == "failed" and i not in summary["expected_failures"]
    ]
