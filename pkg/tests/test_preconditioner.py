# -*- coding: utf-8 -*-
"""
Testes unitários para o pré-condicionador NKP (src/preconditioner.py).

Testa:
- Objetivo fatorado contra o oráculo denso ‖A − Q₁ ⊗ ... ⊗ Q_N‖_F²
- Caso exato de Kronecker (N=2, A₁ = -E)
- Equilíbrio das linhas e reinícios do ajuste
- Aplicação de L̃, L̃ᵀ e D̃ contra matrizes densas
- Variantes PT* dos solvers e ortogonalidade no sistema pré-condicionado
"""

from functools import reduce

import numpy as np
import pytest

from src.errors import PreconditionerSingularError, ShapeError
from src.gallery import build_example, random_consistent_instance
from src.optimize import OptimizerConfig
from src.preconditioner import (
    SOLVERS,
    NkpParams,
    NkpPreconditioner,
    PreconditionedOperator,
    apply_preconditioned,
    apply_preconditioned_transpose,
    balance_params,
    build_q,
    fit_nkp,
    initial_params,
    nkp_objective,
    precondition_rhs,
    q_norms,
    solve_ptbicor,
    solve_ptcors,
    solve_ptlb,
)
from src.solvers import SolveConfig, SolveStatus, solve_tbicor, solve_tcors, solve_tlb
from src.sylvester import SylvesterOperator, assemble_kronecker
from src.tensor import inner, norm, vectorize


def dense_objective(params, op):
    """Oráculo: monta A e Q₁ ⊗ ... ⊗ Q_N explicitamente."""
    K = reduce(np.kron, build_q(params, op))
    return float(np.sum((assemble_kronecker(op) - K) ** 2))


def dense_preconditioner(pre):
    return reduce(np.kron, [np.linalg.inv(Q) for Q in pre.Q])


@pytest.fixture
def exact_op():
    """N=2 com A₁ = -E: A = (A₂ - E) ⊗ E exatamente."""
    A2 = np.array([[4.0, 1.0, 0.0], [0.5, 5.0, -1.0], [0.0, 1.0, 6.0]])
    return SylvesterOperator.from_factors([-np.eye(2), A2])


@pytest.fixture
def exact_params():
    return NkpParams(np.array([[1.0, -1.0], [0.0, 1.0]]))


@pytest.fixture
def instance():
    return random_consistent_instance((2, 3, 2), seed=5)


# =============================================================================
# PARÂMETROS E OBJETIVO
# =============================================================================

class TestNkpParams:
    """Matriz N × 2 de coeficientes."""

    def test_vetor_ida_e_volta(self):
        params = NkpParams.from_vector([1.0, 2.0, 3.0, 4.0])
        assert params.order == 2
        np.testing.assert_array_equal(params.a, [[1.0, 2.0], [3.0, 4.0]])

    def test_forma_invalida(self):
        with pytest.raises(ShapeError):
            NkpParams(np.ones((2, 3)))

    def test_q_usa_fator_pareado(self, exact_op, exact_params):
        Q1, Q2 = build_q(exact_params, exact_op)
        np.testing.assert_array_equal(Q1, exact_op.factors[1] - np.eye(3))
        np.testing.assert_array_equal(Q2, np.eye(2))

    def test_chute_inicial(self, exact_op):
        params = initial_params(exact_op)
        assert params.a[0, 0] == 1.0
        assert params.a[0, 1] == pytest.approx(0.5 * 5.0)
        assert params.a[1, 1] == pytest.approx(-0.5)


class TestNkpObjective:
    """Objetivo fatorado."""

    def test_caso_exato(self, exact_op, exact_params):
        scale = float(np.sum(assemble_kronecker(exact_op) ** 2))
        assert nkp_objective(exact_params, exact_op) <= 1e-12 * scale

    @pytest.mark.parametrize('seed', range(20))
    def test_oraculo_denso(self, seed):
        rng = np.random.default_rng(seed)
        shape = tuple(rng.integers(2, 4, size=3))
        op = SylvesterOperator.from_factors([rng.standard_normal((I, I)) for I in shape])
        params = NkpParams(rng.standard_normal((3, 2)))
        expected = dense_objective(params, op)
        assert nkp_objective(params, op) == pytest.approx(expected, rel=1e-10)

    def test_parametros_nulos(self, instance):
        params = NkpParams(np.zeros((3, 2)))
        norm_sq = float(np.sum(assemble_kronecker(instance.op) ** 2))
        assert nkp_objective(params, instance.op) == pytest.approx(norm_sq, rel=1e-10)

    def test_ordem_incompativel(self, instance):
        with pytest.raises(ShapeError):
            nkp_objective(NkpParams(np.ones((2, 2))), instance.op)

    def test_invariante_por_escala_entre_linhas(self, instance):
        params = NkpParams(np.random.default_rng(7).standard_normal((3, 2)))
        scaled = NkpParams(params.a * np.array([[1e3], [1.0], [1e-3]]))
        assert nkp_objective(scaled, instance.op) == pytest.approx(nkp_objective(params, instance.op), rel=1e-8)

    def test_normas_dos_q(self, instance):
        params = NkpParams(np.random.default_rng(8).standard_normal((3, 2)))
        expected = [np.linalg.norm(Q) for Q in build_q(params, instance.op)]
        np.testing.assert_allclose(q_norms(params, instance.op), expected, rtol=1e-12)


class TestBalanceParams:
    """Escala ótima e normas iguais."""

    @pytest.mark.parametrize('seed', range(10))
    def test_normas_iguais_e_objetivo_nao_piora(self, seed):
        rng = np.random.default_rng(seed)
        op = SylvesterOperator.from_factors([rng.standard_normal((I, I)) for I in (2, 3, 2)])
        params = NkpParams(rng.standard_normal((3, 2)) * np.array([[1e4], [1.0], [1e-4]]))
        balanced = balance_params(params, op)
        norms = q_norms(balanced, op)
        np.testing.assert_allclose(norms, norms[0], rtol=1e-10)
        before = nkp_objective(params, op)
        assert nkp_objective(balanced, op) <= before * (1 + 1e-12) + 1e-12

    def test_escala_global_otima(self, instance):
        params = initial_params(instance.op)
        A = assemble_kronecker(instance.op)
        K = reduce(np.kron, build_q(params, instance.op))
        best = float(np.sum((A - (np.sum(A * K) / np.sum(K * K)) * K) ** 2))
        assert nkp_objective(balance_params(params, instance.op), instance.op) == pytest.approx(best, rel=1e-9)

    def test_mesmo_produto_a_menos_de_escala(self, instance):
        params = NkpParams(np.random.default_rng(9).standard_normal((3, 2)))
        K = reduce(np.kron, build_q(params, instance.op)).ravel()
        Kb = reduce(np.kron, build_q(balance_params(params, instance.op), instance.op)).ravel()
        cosine = abs(K @ Kb) / (np.linalg.norm(K) * np.linalg.norm(Kb))
        assert cosine == pytest.approx(1.0, abs=1e-12)

    def test_parametros_nulos_inalterados(self, instance):
        params = NkpParams(np.zeros((3, 2)))
        np.testing.assert_array_equal(balance_params(params, instance.op).a, params.a)


# =============================================================================
# AJUSTE
# =============================================================================

class TestFitNkp:
    """Ajuste por Nelder-Mead."""

    def test_caso_exato_a_partir_de_uns(self, exact_op):
        start = NkpParams(np.array([[1.0, 0.0], [1.0, 0.0]]))
        pre = fit_nkp(exact_op, initial=start)
        scale = float(np.sum(assemble_kronecker(exact_op) ** 2))
        assert pre.objective_value <= 1e-12 * scale
        X = np.random.default_rng(0).standard_normal(exact_op.shape)
        pop = PreconditionedOperator(exact_op, pre)
        np.testing.assert_allclose(pop.apply(X), X, rtol=1e-4, atol=1e-4)

    def test_chute_mal_escalado(self, exact_op):
        start = NkpParams(np.array([[1e6, 0.0], [1e-6, 0.0]]))
        pre = fit_nkp(exact_op, initial=start)
        scale = float(np.sum(assemble_kronecker(exact_op) ** 2))
        assert pre.objective_value <= 1e-12 * scale

    def test_linhas_ajustadas_equilibradas(self):
        op = build_example(2, v=0.1, c=(1.0, 1.0, 1.0)).op
        pre = fit_nkp(op)
        norms = q_norms(pre.params, op)
        np.testing.assert_allclose(norms, norms[0], rtol=1e-6)
        assert pre.objective_value < 1e-3 * pre.initial_objective

    def test_ordem_1_exata(self):
        op = SylvesterOperator.from_factors([np.array([[3.0, 1.0], [0.0, 2.0]])])
        pre = fit_nkp(op)
        assert pre.objective_value <= 1e-12
        np.testing.assert_allclose(pre.params.a, [[1.0, 0.0]], atol=1e-5)

    def test_poisson_melhora_o_chute(self):
        op = build_example(1, d=3, p=4).op
        pre = fit_nkp(op)
        assert pre.objective_value < pre.initial_objective
        assert pre.evaluations > 0

    def test_orcamento_curto_sinaliza(self, instance):
        pre = fit_nkp(instance.op, OptimizerConfig(max_evals=8))
        assert pre.optimizer_converged is False
        assert pre.objective_value <= pre.initial_objective

    def test_q_singular(self):
        op = SylvesterOperator.from_factors([np.eye(2), np.eye(2)])
        with pytest.raises(PreconditionerSingularError):
            NkpPreconditioner.from_params(op, NkpParams(np.array([[1.0, -1.0], [0.0, 1.0]])))


# =============================================================================
# OPERADOR PRÉ-CONDICIONADO
# =============================================================================

class TestPreconditionedOperator:
    """L̃, L̃ᵀ e D̃."""

    def test_identidade(self, instance):
        pre = NkpPreconditioner.identity(instance.op)
        pop = PreconditionedOperator(instance.op, pre)
        X = np.random.default_rng(1).standard_normal(instance.shape)
        np.testing.assert_allclose(apply_preconditioned(pop, X), instance.op.apply(X), rtol=1e-14)
        np.testing.assert_allclose(precondition_rhs(instance.rhs, pre), instance.rhs, rtol=1e-14)

    def test_identidade_simetrica(self):
        op = build_example(1, d=3, p=3).op
        pop = PreconditionedOperator(op, NkpPreconditioner.identity(op))
        X = np.random.default_rng(2).standard_normal(op.shape)
        np.testing.assert_allclose(apply_preconditioned_transpose(pop, X), apply_preconditioned(pop, X),
                                   rtol=1e-12, atol=1e-12)

    def test_oraculo_denso(self, instance):
        pre = fit_nkp(instance.op)
        pop = PreconditionedOperator(instance.op, pre)
        M = dense_preconditioner(pre)
        A = assemble_kronecker(instance.op)
        X = np.random.default_rng(3).standard_normal(instance.shape)
        np.testing.assert_allclose(vectorize(pop.apply(X)), M @ A @ vectorize(X), rtol=1e-10, atol=1e-10)
        np.testing.assert_allclose(vectorize(pop.apply_transpose(X)), (M @ A).T @ vectorize(X),
                                   rtol=1e-10, atol=1e-10)
        np.testing.assert_allclose(vectorize(precondition_rhs(instance.rhs, pre)),
                                   M @ vectorize(instance.rhs), rtol=1e-11, atol=1e-11)

    def test_adjunto(self, instance):
        pre = fit_nkp(instance.op)
        pop = PreconditionedOperator(instance.op, pre)
        rng = np.random.default_rng(4)
        X = rng.standard_normal(instance.shape)
        Y = rng.standard_normal(instance.shape)
        lhs = inner(pop.apply(X), Y)
        rhs = inner(X, pop.apply_transpose(Y))
        assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))

    def test_formas_incompativeis(self, instance):
        other = random_consistent_instance((3, 2, 2), seed=1)
        with pytest.raises(ShapeError):
            PreconditionedOperator(instance.op, NkpPreconditioner.identity(other.op))


# =============================================================================
# SOLVERS PRÉ-CONDICIONADOS
# =============================================================================

class TestPreconditionedSolvers:
    """PTLB, PTBiCOR e PTCORS."""

    @pytest.mark.parametrize('plain, preconditioned', [
        (solve_tlb, solve_ptlb),
        (solve_tbicor, solve_ptbicor),
        (solve_tcors, solve_ptcors),
    ])
    def test_identidade_reproduz_sem_precondicionador(self, instance, plain, preconditioned):
        cfg = SolveConfig(exact=instance.exact)
        base = plain(instance.op, instance.rhs, cfg=cfg)
        pre = NkpPreconditioner.identity(instance.op)
        report = preconditioned(instance.op, instance.rhs, cfg=cfg, preconditioner=pre)
        assert report.iterations == base.iterations
        np.testing.assert_allclose([e.rel_error for e in report.history],
                                   [e.rel_error for e in base.history], rtol=1e-10, atol=1e-14)
        assert report.preconditioner is pre

    def test_ptbicor_caso_exato(self, exact_op, exact_params):
        pre = NkpPreconditioner.from_params(exact_op, exact_params)
        exact = np.ones(exact_op.shape)
        report = solve_ptbicor(exact_op, exact_op.apply(exact), cfg=SolveConfig(exact=exact),
                               preconditioner=pre)
        assert report.status is SolveStatus.CONVERGED
        assert report.iterations <= 2

    @pytest.mark.parametrize('name', ['ptlb', 'ptbicor', 'ptcors'])
    def test_ajuste_automatico_converge(self, instance, name):
        report = SOLVERS[name](instance.op, instance.rhs, cfg=SolveConfig(exact=instance.exact))
        assert report.converged
        assert report.solver == name
        assert report.preconditioner is not None

    def test_registro_completo(self):
        assert sorted(SOLVERS) == sorted(['tlb', 'tbicor', 'tcors', 'ptlb', 'ptbicor', 'ptcors'])


# =============================================================================
# ORTOGONALIDADE NO SISTEMA PRÉ-CONDICIONADO
# =============================================================================

class TestPreconditionedOrthogonality:
    """PTBiCOR: ⟨L̃(R_i), R_j*⟩ ≈ 0 e ⟨L̃(P_i), L̃ᵀ(P_j*)⟩ ≈ 0 para i ≠ j."""

    @staticmethod
    def assert_pairwise_orthogonal(left, right):
        for i, X in enumerate(left):
            for j, Y in enumerate(right):
                if i != j:
                    assert abs(inner(X, Y)) / (norm(X) * norm(Y)) <= 1e-7, (i, j)

    @pytest.mark.parametrize('shape, seed', [((2, 2, 2), s) for s in range(5)] + [((3, 3, 3), s) for s in range(5)])
    def test_ptbicor(self, shape, seed):
        ex = random_consistent_instance(shape, seed=seed)
        pre = fit_nkp(ex.op)
        pop = PreconditionedOperator(ex.op, pre)
        states = []
        solve_ptbicor(ex.op, ex.rhs, cfg=SolveConfig(exact=ex.exact), preconditioner=pre,
                      callback=lambda k, s: states.append(s))
        d_norm = norm(precondition_rhs(ex.rhs, pre))
        active = [s for s in states if norm(s.R) > 1e-6 * d_norm]
        assert len(active) >= 2

        self.assert_pairwise_orthogonal([pop.apply(s.R) for s in active], [s.R_star for s in active])
        directions = [s for s in active if s.P is not None]
        self.assert_pairwise_orthogonal([pop.apply(s.P) for s in directions],
                                        [pop.apply_transpose(s.P_star) for s in directions])
