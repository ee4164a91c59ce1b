from fractions import Fraction

import pytest

from qkernel.qcore import DomainError, QContext, q_binomial, q_pochhammer
from qkernel.qpoly import (
    BivariatePolynomial,
    Family,
    FamilyParams,
    coefficient_table,
    evaluate,
    jacobi_bivariate,
    jacobi_normalized,
    laguerre_bivariate,
    magnitude,
    specialize,
    univariate_jacobi,
    univariate_laguerre,
)


class TestBivariatePolynomial:
    def test_monomial(self):
        p = BivariatePolynomial.monomial(3, 1, Fraction(2))
        assert p.coeffs == (0, 2, 0, 0)
        assert p.degree == 3

    def test_zero_polynomial(self):
        zero = BivariatePolynomial.zero()
        assert zero.degree == -1
        assert zero.is_zero()
        assert zero.max_abs() == 0.0
        p = BivariatePolynomial((1, 2))
        assert p + zero == p
        assert zero - p == -p

    def test_arithmetic(self):
        p = BivariatePolynomial((Fraction(1), Fraction(2)))
        r = BivariatePolynomial((Fraction(3), Fraction(-1)))
        assert (p + r).coeffs == (4, 1)
        assert (p - r).coeffs == (-2, 3)
        assert (2 * p).coeffs == (2, 4)

    def test_mismatched_degrees(self):
        with pytest.raises(ValueError):
            BivariatePolynomial((1, 2)) + BivariatePolynomial((1, 2, 3))

    def test_evaluate_paths_agree(self):
        p = BivariatePolynomial((Fraction(1), Fraction(-2), Fraction(3)))
        # 1*y^2 - 2*x*y + 3*x^2
        for x, y in [(Fraction(1, 3), Fraction(2)), (Fraction(5), Fraction(1, 7)), (0, Fraction(3))]:
            assert evaluate(p, x, y) == y * y - 2 * x * y + 3 * x * x

    def test_magnitude(self):
        p = BivariatePolynomial((1, -2))
        assert magnitude(p, -1, 1) == 3


class TestFamilies:
    def test_laguerre_degree_one(self, exact_ctx):
        assert laguerre_bivariate(1, 1, exact_ctx).coeffs == (1, Fraction(-1, 3))

    def test_laguerre_constant(self, exact_ctx):
        assert laguerre_bivariate(0, 2, exact_ctx).coeffs == (1,)

    def test_laguerre_closed_form(self, exact_ctx):
        q = exact_ctx.q
        n, alpha = 4, 2
        p = laguerre_bivariate(n, alpha, exact_ctx)
        for k in range(n + 1):
            expected = (-1) ** k * q_binomial(n, k, exact_ctx) * q ** (k * k + k * alpha)
            expected /= q_pochhammer(q ** (alpha + 1), exact_ctx, k)
            assert p.coeffs[k] == expected

    def test_laguerre_at_x_zero(self, exact_ctx):
        p = laguerre_bivariate(5, 1, exact_ctx)
        assert evaluate(p, 0, Fraction(2)) == 32

    def test_laguerre_alpha_bounds(self, exact_ctx, float_ctx):
        with pytest.raises(DomainError):
            laguerre_bivariate(2, -1, exact_ctx)
        with pytest.raises(DomainError):
            laguerre_bivariate(2, Fraction(1, 2), exact_ctx)
        assert laguerre_bivariate(2, 0.5, float_ctx).degree == 2

    def test_jacobi_degree_one(self, exact_ctx):
        assert jacobi_bivariate(1, 3, 5, exact_ctx).coeffs == (1, Fraction(-11, 2))

    def test_jacobi_degenerate_alpha(self, exact_ctx):
        with pytest.raises(DomainError):
            jacobi_bivariate(1, 2, 1, exact_ctx)
        assert jacobi_bivariate(0, 2, 1, exact_ctx).coeffs == (1,)

    def test_legendre_and_wall(self, exact_ctx):
        assert specialize(FamilyParams.legendre(), 1, exact_ctx).coeffs == (1, Fraction(-3, 2))
        assert specialize(FamilyParams.wall(3), 1, exact_ctx).coeffs == (1, 2)

    def test_family_params_validation(self):
        with pytest.raises(DomainError):
            FamilyParams(Family.LITTLE_Q_JACOBI, 1)
        with pytest.raises(DomainError):
            FamilyParams.laguerre(-2)
        assert FamilyParams.legendre().jacobi_parameters() == (1, 1)
        assert FamilyParams.wall(Fraction(1, 2)).jacobi_parameters() == (Fraction(1, 2), 0)

    @pytest.mark.parametrize("n", range(7))
    def test_normalized_coefficients(self, exact_ctx, n):
        alpha, beta = Fraction(2, 5), Fraction(3, 10)
        plain = jacobi_bivariate(n, alpha, beta, exact_ctx)
        scale = exact_ctx.q ** (n * (n - 1) // 2)
        assert jacobi_normalized(n, alpha, beta, exact_ctx).coeffs == tuple(scale * c for c in plain.coeffs)

    def test_homogeneity(self, float_ctx):
        p = jacobi_bivariate(6, 0.4, 0.3, float_ctx)
        x, y, lam = 0.3, 0.8, 1.7
        assert evaluate(p, lam * x, lam * y) == pytest.approx(lam ** 6 * evaluate(p, x, y), rel=1e-12)


class TestUnivariate:
    @pytest.mark.parametrize("n", range(6))
    def test_jacobi_dehomogenizes(self, exact_ctx, n):
        alpha, beta, x = Fraction(2, 5), Fraction(3, 10), Fraction(3, 4)
        p = jacobi_bivariate(n, alpha, beta, exact_ctx)
        assert evaluate(p, x, 1) == univariate_jacobi(n, alpha, beta, x, exact_ctx)

    def test_laguerre_scaling(self, exact_ctx):
        n, x = 3, Fraction(2, 3)
        q = exact_ctx.q
        expected = q_pochhammer(q ** 2, exact_ctx, n) / q_pochhammer(q, exact_ctx, n)
        expected *= evaluate(laguerre_bivariate(n, 1, exact_ctx), x, 1)
        assert univariate_laguerre(n, 1, x, exact_ctx) == expected
        assert univariate_laguerre(0, 1, x, exact_ctx) == 1


def test_coefficient_table():
    ctx = QContext.exact(Fraction(1, 2))
    assert coefficient_table([jacobi_bivariate(1, 3, 5, ctx)]) == [["1", "-11/2"]]
