from fractions import Fraction

import pytest

from qkernel.qcore import DomainError
from qkernel.qexpand import (
    GridFormatError,
    TaylorGrid,
    TaylorTensor,
    expand,
    expand_multivariate,
    jacobi_lambda,
    jacobi_one_step,
    laguerre_lambda,
    laguerre_one_step,
    synthesize,
    synthesize_multivariate,
)
from qkernel.qpde import PdeKind, pde_residual
from qkernel.qpoly import FamilyParams

ALPHA, BETA = Fraction(2, 5), Fraction(3, 10)


@pytest.fixture
def laguerre():
    return FamilyParams.laguerre(1)


@pytest.fixture
def jacobi():
    return FamilyParams.jacobi(ALPHA, BETA)


class TestForcedCoefficients:
    def test_first_row_is_unchanged(self, exact_ctx):
        lam0 = [Fraction(k + 2, 3) for k in range(5)]
        for n in range(5):
            assert laguerre_lambda(0, n, lam0, 1, exact_ctx) == lam0[n]
            assert jacobi_lambda(0, n, lam0, ALPHA, BETA, exact_ctx) == lam0[n]

    def test_first_forced_entries(self, exact_ctx):
        lam0 = [Fraction(1), Fraction(6)]
        assert laguerre_lambda(1, 0, lam0, 1, exact_ctx) == -2
        assert jacobi_lambda(1, 0, lam0, ALPHA, BETA, exact_ctx) == Fraction(-291, 40)

    def test_short_first_row(self, exact_ctx):
        with pytest.raises(IndexError):
            laguerre_lambda(2, 1, [1, 1], 1, exact_ctx)

    def test_laguerre_one_step_ratio(self, exact_ctx):
        ones = [Fraction(1)] * 20
        for m in range(1, 9):
            for n in range(9):
                ratio = laguerre_lambda(m, n, ones, 1, exact_ctx) / laguerre_lambda(m - 1, n + 1, ones, 1, exact_ctx)
                assert ratio == laguerre_one_step(m, n, 1, exact_ctx)

    def test_jacobi_one_step_ratio(self, exact_ctx):
        ones = [Fraction(1)] * 20
        for m in range(1, 9):
            for n in range(9):
                ratio = (
                    jacobi_lambda(m, n, ones, ALPHA, BETA, exact_ctx)
                    / jacobi_lambda(m - 1, n + 1, ones, ALPHA, BETA, exact_ctx)
                )
                assert ratio == jacobi_one_step(m, n, ALPHA, BETA, exact_ctx)

    def test_one_step_needs_positive_m(self, exact_ctx):
        with pytest.raises(DomainError):
            laguerre_one_step(0, 2, 1, exact_ctx)


class TestExpand:
    def test_basis_grid(self, exact_ctx, laguerre):
        grid = synthesize([0, 0, 1], laguerre, 3, 3, exact_ctx)
        assert grid[0, 2] == 1
        assert grid[0, 0] == 0
        assert grid[1, 1] == laguerre.basis(2, exact_ctx).coeffs[1]
        result = expand(grid, laguerre, exact_ctx)
        assert result.admissible
        assert result.coeffs == [0, 0, 1, 0]

    @pytest.mark.parametrize("family_name", ["laguerre", "jacobi"])
    def test_roundtrip(self, exact_ctx, request, family_name):
        family = request.getfixturevalue(family_name)
        coeffs = [Fraction(k * k + 1, k + 3) for k in range(9)]
        result = expand(synthesize(coeffs, family, 8, 8, exact_ctx), family, exact_ctx)
        assert result.admissible
        assert result.max_violation == 0
        assert result.violation_at is None
        assert result.coeffs == coeffs

    def test_perturbed_grid_is_not_admissible(self, exact_ctx, jacobi):
        grid = synthesize([1, 2, 3, 4], jacobi, 3, 3, exact_ctx)
        entries = [list(row) for row in grid.entries]
        entries[1][0] += 1
        result = expand(TaylorGrid(tuple(tuple(r) for r in entries)), jacobi, exact_ctx)
        assert not result.admissible
        assert result.violation_at == (1, 0)
        assert result.coeffs == [1, 2, 3, 4]

    def test_zero_grid(self, exact_ctx, laguerre):
        result = expand(TaylorGrid.zeros(4, 4, exact_ctx), laguerre, exact_ctx)
        assert result.admissible
        assert result.coeffs == [0, 0, 0, 0]

    def test_float_tolerance(self, float_ctx):
        family = FamilyParams.jacobi(0.4, 0.3)
        grid = synthesize([0.5, -1.0, 2.0, 0.25], family, 3, 3, float_ctx)
        assert expand(grid, family, float_ctx).admissible
        entries = [list(row) for row in grid.entries]
        entries[2][1] += 1e-6
        assert not expand(TaylorGrid(tuple(tuple(r) for r in entries)), family, float_ctx).admissible

    def test_homogeneous_components_solve_the_equation(self, exact_ctx, jacobi):
        grid = synthesize([3, 0, -1, 2], jacobi, 3, 3, exact_ctx)
        kind = PdeKind.jacobi(ALPHA, BETA)
        components = grid.homogeneous_components()
        assert [c.degree for c in components] == [0, 1, 2, 3]
        assert all(pde_residual(c, kind, exact_ctx).is_zero() for c in components)

    def test_rows_beyond_columns_are_rejected(self, exact_ctx, laguerre):
        grid = TaylorGrid(((Fraction(1),), (Fraction(7),), (Fraction(-3, 2),)))
        with pytest.raises(GridFormatError):
            expand(grid, laguerre, exact_ctx)

    def test_wide_grid_checks_every_row(self, exact_ctx, laguerre):
        grid = synthesize([1, 2, 3, 4], laguerre, 1, 3, exact_ctx)
        assert grid.rows == 2 and grid.cols == 4
        assert expand(grid, laguerre, exact_ctx).admissible


class TestGridJson:
    def test_parse(self, exact_ctx):
        grid = TaylorGrid.from_json({"rows": 2, "cols": 2, "entries": [["1/2", 0.4], [3, "-1"]]}, exact_ctx)
        assert grid[0, 0] == Fraction(1, 2)
        assert grid[0, 1] == Fraction(2, 5)
        assert grid.rows == 2 and grid.cols == 2

    def test_to_json(self, exact_ctx):
        payload = TaylorGrid(((Fraction(1, 2), Fraction(3)),)).to_json()
        assert payload == {"rows": 1, "cols": 2, "entries": [["1/2", "3"]]}

    @pytest.mark.parametrize("payload", [
        [],
        {"rows": 1, "cols": 1},
        {"rows": 2, "cols": 1, "entries": [[1]]},
        {"rows": 1, "cols": 2, "entries": [[1]]},
        {"rows": 1, "cols": 1, "entries": [["abc"]]},
        {"rows": 0, "cols": 0, "entries": []},
    ])
    def test_malformed(self, exact_ctx, payload):
        with pytest.raises(GridFormatError):
            TaylorGrid.from_json(payload, exact_ctx)

    def test_ragged_rows(self):
        with pytest.raises(GridFormatError):
            TaylorGrid(((1, 2), (3,)))


class TestMultivariate:
    def test_pairwise_roundtrip(self, exact_ctx, laguerre, jacobi):
        families = [laguerre, jacobi]
        coeffs = {(1, 2): Fraction(1), (0, 1): Fraction(2, 3)}
        tensor = synthesize_multivariate(coeffs, families, (4, 4, 4, 4), exact_ctx)
        result = expand_multivariate(tensor, families, exact_ctx)
        assert result.admissible
        assert result.coeffs[(1, 2)] == 1
        assert result.coeffs[(0, 1)] == Fraction(2, 3)
        assert all(v == 0 for k, v in result.coeffs.items() if k not in coeffs)

    def test_perturbation_is_located(self, exact_ctx, laguerre):
        families = [laguerre, laguerre]
        tensor = synthesize_multivariate({(2, 1): 1}, families, (3, 3, 3, 3), exact_ctx)
        tensor.entries[(1, 0, 0, 1)] = tensor.get((1, 0, 0, 1)) + 5
        result = expand_multivariate(tensor, families, exact_ctx)
        assert not result.admissible
        assert result.violation_at == (1, 0, 0, 1)

    def test_family_count_must_match(self, exact_ctx, laguerre):
        tensor = TaylorTensor((2, 2, 2, 2))
        with pytest.raises(DomainError):
            expand_multivariate(tensor, [laguerre], exact_ctx)

    def test_pair_with_more_rows_than_columns(self, exact_ctx, laguerre):
        with pytest.raises(GridFormatError):
            expand_multivariate(TaylorTensor((3, 2, 2, 2)), [laguerre, laguerre], exact_ctx)

    def test_shape_validation(self):
        with pytest.raises(GridFormatError):
            TaylorTensor((2, 2, 2))
        with pytest.raises(GridFormatError):
            TaylorTensor((2, 2), {(2, 0): 1})
