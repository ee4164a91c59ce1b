import pytest

from qkernel.qcore import DomainError, HyperSeries, phi_series, q_pochhammer_inf
from qkernel.qgen import (
    UNIVARIATE_KINDS,
    GenFunKind,
    GenFunParams,
    genfun_lhs,
    genfun_rhs,
    genfun_verify,
    lhs_terms,
)

LAGUERRE_KINDS = [GenFunKind.L1, GenFunKind.L2, GenFunKind.L3, GenFunKind.L0]


@pytest.mark.parametrize("kind", LAGUERRE_KINDS)
def test_laguerre_generating_functions(float_ctx, kind):
    result = genfun_verify(kind, GenFunParams(), float_ctx)
    assert result.deviation <= 1e-10
    assert result.n_lhs == 60
    assert not result.lhs_growing


@pytest.mark.parametrize("kind", UNIVARIATE_KINDS)
def test_univariate_generating_functions(float_ctx, kind):
    assert genfun_verify(kind, GenFunParams(y=1.0), float_ctx).deviation <= 1e-10


def test_jacobi_generating_function(float_ctx):
    params = GenFunParams(alpha=0.25, beta=0.2, x=0.6, y=1.0, t=0.3)
    assert genfun_verify(GenFunKind.JACOBI, params, float_ctx).deviation <= 1e-10


def test_exact_context_is_evaluated_in_float(exact_ctx):
    result = genfun_verify(GenFunKind.L0, GenFunParams(), exact_ctx)
    assert isinstance(result.lhs, float)
    assert result.deviation <= 1e-10


def test_bailey_discrepancy_is_detected(float_ctx):
    params = GenFunParams(alpha=0.25, beta=0.2, x=0.1, y=1.0, u=0.15, v=1.0, t=0.3)
    assert genfun_verify(GenFunKind.BAILEY, params, float_ctx, 40).deviation > 1e-8


def test_bailey_reduced_point(float_ctx):
    params = GenFunParams(alpha=0.0, beta=0.0, x=0.0, y=1.0, u=0.0, v=1.0, t=0.3)
    result = genfun_verify(GenFunKind.BAILEY, params, float_ctx, 40)
    assert result.lhs == 1.0
    assert result.deviation > 1e-3


def test_zero_t(float_ctx):
    params = GenFunParams(t=0.0)
    assert genfun_lhs(GenFunKind.L1, params, 10, float_ctx) == 1.0
    assert genfun_rhs(GenFunKind.L1, params, float_ctx).value == pytest.approx(1.0, abs=1e-15)


def test_single_term_left_member(float_ctx):
    assert genfun_lhs(GenFunKind.L0, GenFunParams(), 0, float_ctx) == 1.0


def test_l2_at_q_power_gamma_matches_l3(float_ctx):
    p = GenFunParams()
    gamma = float_ctx.power(p.alpha + 1)
    l2 = list(lhs_terms(GenFunKind.L2, GenFunParams(gamma=gamma), 30, float_ctx))
    l3 = list(lhs_terms(GenFunKind.L3, p, 30, float_ctx))
    assert l2 == pytest.approx(l3, rel=1e-14)


def test_l2_at_zero_gamma_matches_l0(float_ctx):
    p = GenFunParams(gamma=0.0)
    assert list(lhs_terms(GenFunKind.L2, p, 30, float_ctx)) == list(lhs_terms(GenFunKind.L0, p, 30, float_ctx))


def test_l3_at_zero_x(float_ctx):
    p = GenFunParams(x=0.0)
    ty = p.t * p.y
    closed = q_pochhammer_inf(float_ctx.power(p.alpha + 1) * ty, float_ctx).value
    closed /= q_pochhammer_inf(ty, float_ctx).value
    assert genfun_rhs(GenFunKind.L3, p, float_ctx).value == pytest.approx(closed, rel=1e-13)


def test_jacobi_second_factor_terminates_on_diagonal(float_ctx):
    p = GenFunParams(alpha=0.25, beta=0.2, x=0.6, y=0.6, t=0.3)
    first = phi_series(HyperSeries((), (p.alpha * 0.5,), -p.alpha * 0.5 * p.x * p.t), float_ctx)
    assert genfun_rhs(GenFunKind.JACOBI, p, float_ctx).value == pytest.approx(first.value, rel=1e-14)


def test_convergence_direction(float_ctx):
    result = genfun_verify(GenFunKind.L0, GenFunParams(t=0.9), float_ctx, 20)
    assert result.deviation <= result.deviation_half


class TestDomain:
    def test_ty_outside_unit_disc(self, float_ctx):
        with pytest.raises(DomainError):
            genfun_rhs(GenFunKind.L2, GenFunParams(t=2.0), float_ctx)

    def test_alpha_bound(self, float_ctx):
        with pytest.raises(DomainError):
            genfun_verify(GenFunKind.L0, GenFunParams(alpha=-1.5), float_ctx)

    def test_bailey_guard(self, float_ctx):
        with pytest.raises(DomainError):
            genfun_rhs(GenFunKind.BAILEY, GenFunParams(t=1.5, y=1.0, v=1.0), float_ctx)

    def test_negative_n(self, float_ctx):
        with pytest.raises(DomainError):
            genfun_lhs(GenFunKind.L1, GenFunParams(), -1, float_ctx)
