from fractions import Fraction

import pytest

from qkernel.qcore import DomainError
from qkernel.qgen import GenFunKind, GenFunParams, genfun_rhs
from qkernel.qpde import PdeKind, pde_residual, pde_residual_fn, pde_sides, residual_norm
from qkernel.qpoly import (
    BivariatePolynomial,
    FamilyParams,
    evaluate,
    jacobi_bivariate,
    laguerre_bivariate,
    specialize,
)


@pytest.mark.parametrize("alpha", [0, 1, 2])
def test_laguerre_solves_its_equation(exact_ctx, exact_third, alpha):
    for ctx in (exact_ctx, exact_third):
        for n in range(13):
            assert pde_residual(laguerre_bivariate(n, alpha, ctx), PdeKind.laguerre(alpha), ctx).is_zero()


@pytest.mark.parametrize("alpha,beta", [(0, 0), (1, 1), (1, 3), (Fraction(2, 5), Fraction(3, 10))])
def test_jacobi_solves_its_equation(exact_ctx, alpha, beta):
    for n in range(13):
        p = jacobi_bivariate(n, alpha, beta, exact_ctx)
        assert pde_residual(p, PdeKind.jacobi(alpha, beta), exact_ctx).is_zero()


def test_monomial_x_is_not_a_laguerre_solution(exact_ctx):
    residual = pde_residual(BivariatePolynomial((0, 1)), PdeKind.laguerre(1), exact_ctx)
    assert not residual.is_zero()


def test_residual_is_linear(exact_ctx):
    kind = PdeKind.jacobi(1, 3)
    f = BivariatePolynomial((Fraction(1), Fraction(2), Fraction(-5)))
    g = BivariatePolynomial((Fraction(-3, 4), Fraction(0), Fraction(7)))
    combined = pde_residual(2 * f + g, kind, exact_ctx)
    assert combined == 2 * pde_residual(f, kind, exact_ctx) + pde_residual(g, kind, exact_ctx)


def test_special_equations_match_jacobi(exact_ctx):
    candidate = BivariatePolynomial(tuple(Fraction(k * k - 3, k + 1) for k in range(6)))
    assert pde_residual(candidate, PdeKind.legendre(), exact_ctx) == pde_residual(candidate, PdeKind.jacobi(1, 1), exact_ctx)
    assert pde_residual(candidate, PdeKind.wall(3), exact_ctx) == pde_residual(candidate, PdeKind.jacobi(3, 0), exact_ctx)


def test_for_family(exact_ctx):
    for family in (FamilyParams.legendre(), FamilyParams.wall(3), FamilyParams.laguerre(1)):
        kind = PdeKind.for_family(family)
        for n in range(6):
            assert pde_residual(specialize(family, n, exact_ctx), kind, exact_ctx).is_zero()


def test_sides_have_degree_below(exact_ctx):
    lhs, rhs = pde_sides(laguerre_bivariate(5, 1, exact_ctx), PdeKind.laguerre(1), exact_ctx)
    assert lhs.degree == 4
    assert rhs.degree == 4


def test_float_residual_norm(float_ctx):
    _, norm = residual_norm(jacobi_bivariate(10, 0.4, 0.3, float_ctx), PdeKind.jacobi(0.4, 0.3), float_ctx)
    assert norm < 1e-12


def test_laguerre_rejects_alpha(exact_ctx):
    with pytest.raises(DomainError):
        pde_residual(BivariatePolynomial((1, 1)), PdeKind.laguerre(-1), exact_ctx)


class TestPointwise:
    def test_solution_has_zero_residual(self, float_ctx):
        p = jacobi_bivariate(3, 0.4, 0.3, float_ctx)
        value = pde_residual_fn(lambda s, t: evaluate(p, s, t), PdeKind.jacobi(0.4, 0.3), 0.6, 0.9, float_ctx)
        assert abs(value) < 1e-11

    def test_exact_laguerre_solution(self, exact_ctx):
        p = laguerre_bivariate(4, 2, exact_ctx)
        value = pde_residual_fn(
            lambda s, t: evaluate(p, s, t), PdeKind.laguerre(2), Fraction(1, 3), Fraction(7, 5), exact_ctx
        )
        assert value == 0

    def test_non_solution(self, exact_ctx):
        value = pde_residual_fn(lambda s, t: s * t, PdeKind.legendre(), Fraction(1, 2), Fraction(1, 3), exact_ctx)
        assert value != 0

    def test_axes_must_be_nonzero(self, exact_ctx):
        with pytest.raises(DomainError):
            pde_residual_fn(lambda s, t: s, PdeKind.wall(1), 0, 1, exact_ctx)

    def test_truncated_generating_function_approaches_a_solution(self, float_ctx):
        kind = PdeKind.laguerre(1)

        def residual(N):
            def f(s, t):
                params = GenFunParams(alpha=1.0, gamma=0.6, x=s, y=t, t=0.2)
                return genfun_rhs(GenFunKind.L2, params, float_ctx, n_max=N).value
            return abs(pde_residual_fn(f, kind, 0.3, 0.5, float_ctx))

        residuals = [residual(N) for N in range(4)]
        assert all(later < earlier for earlier, later in zip(residuals, residuals[1:]))
        assert residuals[0] > 1e-3
        assert residual(5) < 1e-12
