# -*- coding: utf-8 -*-
"""
Testes unitários para o processo de Lanczos (src/lanczos.py).

Testa:
- Biortogonalidade ⟨W_i, L(V_j)⟩ = δ_ij e W̃ ⊠ L(H̃) = T em 50 instâncias
- Equivalência com o processo escalar sobre a matriz de Kronecker
- Relações de três termos, sementes e quebra
- LU e resolução tridiagonal
"""

import numpy as np
import pytest

from src.errors import ConfigurationError, DegenerateSeedError, LanczosBreakdown, SeriousBreakdown, ShapeError
from src.gallery import random_consistent_instance
from src.lanczos import (
    LanczosProcess,
    TridiagonalMatrix,
    extended_relation_check,
    lanczos_procedure,
    lu_tridiagonal,
    seed_pair,
    tridiagonal_solve,
)
from src.sylvester import SylvesterOperator, assemble_kronecker
from src.tensor import boxtimes, inner, norm, stack_last, vectorize

CORPUS = [((2, 2, 2), seed) for seed in range(25)] + [((3, 3, 3), seed) for seed in range(25)]


def scalar_lanczos(A, v1, w1, m):
    """Mesmo processo sobre vetores: devolve (alpha, beta, delta)."""
    V, W = [v1], [w1]
    alpha, beta, delta = [], [], []
    for j in range(m):
        h = A @ V[j]
        a = (A @ h) @ W[j]
        v_bar = h - a * V[j]
        w_bar = A.T @ W[j] - a * W[j]
        if j > 0:
            v_bar -= beta[-1] * V[j - 1]
            w_bar -= delta[-1] * W[j - 1]
        omega = w_bar @ (A @ v_bar)
        d = np.sqrt(abs(omega))
        b = omega / d
        alpha.append(a)
        delta.append(d)
        beta.append(b)
        V.append(v_bar / d)
        W.append(w_bar / b)
    return np.array(alpha), np.array(beta[:-1]), np.array(delta[:-1])


def corpus_state(shape, seed, m=6):
    """m passos sobre uma instância bem posta; após quebra, o estado parcial."""
    inst = random_consistent_instance(shape, seed=seed)
    V1, W1 = seed_pair(inst.op, inst.rhs)
    try:
        state = lanczos_procedure(inst.op, V1, W1, m)
    except LanczosBreakdown as exc:
        state = exc.state
    return inst.op, state


@pytest.fixture
def instance():
    return random_consistent_instance((2, 2, 2), seed=11)


@pytest.fixture
def seeded(instance):
    V1, W1 = seed_pair(instance.op, instance.rhs)
    return instance.op, V1, W1


# =============================================================================
# SEMENTES
# =============================================================================

class TestSeedPair:
    """Escolha de V₁ e W₁."""

    def test_identidade(self):
        op = SylvesterOperator.from_factors([np.eye(2), np.zeros((2, 2))])
        V1, W1 = seed_pair(op, 2.0 * np.ones((2, 2)))
        np.testing.assert_allclose(V1, 0.5 * np.ones((2, 2)))
        np.testing.assert_allclose(W1, V1)
        assert inner(op.apply(V1), W1) == pytest.approx(1.0, rel=1e-14)

    def test_pareamento_unitario(self, seeded):
        op, V1, W1 = seeded
        assert norm(V1) == pytest.approx(1.0, rel=1e-14)
        assert abs(inner(op.apply(V1), W1) - 1.0) <= 1e-12

    def test_residuo_nulo(self, instance):
        with pytest.raises(ValueError):
            seed_pair(instance.op, np.zeros(instance.shape))

    def test_semente_degenerada(self):
        op = SylvesterOperator.from_factors([np.zeros((3, 3))])
        with pytest.raises(DegenerateSeedError):
            seed_pair(op, np.ones(3))


# =============================================================================
# PROCESSO DE LANCZOS
# =============================================================================

class TestLanczosProcedure:
    """Processo de L-biortogonalização."""

    def test_identidade_quebra_no_passo_1(self):
        op = SylvesterOperator.from_factors([np.eye(3)])
        V1, W1 = seed_pair(op, np.array([1.0, 2.0, 2.0]))
        with pytest.raises(LanczosBreakdown) as exc:
            lanczos_procedure(op, V1, W1, 3)
        assert exc.value.step == 1
        assert exc.value.state.m == 1
        assert exc.value.state.T.alpha[0] == pytest.approx(1.0, rel=1e-14)
        assert len(exc.value.state.V) == 1

    def test_tridiagonal_igual_ao_oraculo_escalar(self, seeded):
        op, V1, W1 = seeded
        state = lanczos_procedure(op, V1, W1, 3)
        alpha, beta, delta = scalar_lanczos(assemble_kronecker(op), vectorize(V1), vectorize(W1), 3)
        np.testing.assert_allclose(state.T.alpha, alpha, rtol=1e-9, atol=1e-10)
        np.testing.assert_allclose(state.T.beta, beta, rtol=1e-9, atol=1e-10)
        np.testing.assert_allclose(state.T.delta, delta, rtol=1e-9, atol=1e-10)

    @pytest.mark.parametrize('shape, seed', CORPUS)
    def test_biortogonalidade(self, shape, seed):
        op, state = corpus_state(shape, seed)
        m = state.m
        gram = np.array([[inner(state.W[i], op.apply(state.V[j])) for j in range(m)] for i in range(m)])
        assert np.max(np.abs(gram - np.eye(m))) <= 1e-8

    @pytest.mark.parametrize('shape, seed', CORPUS[::5])
    def test_matriz_projetada(self, shape, seed):
        op, state = corpus_state(shape, seed)
        m = state.m
        W = stack_last(state.W[:m])
        H = [op.apply(V) for V in state.V[:m]]
        # W̃ ⊠ H̃ = E e W̃ ⊠ L(H̃) = T, com H_j = L(V_j)
        np.testing.assert_allclose(boxtimes(W, stack_last(H)), np.eye(m), atol=1e-8)
        T = state.T.to_dense()
        projected = boxtimes(W, stack_last([op.apply(Hj) for Hj in H]))
        np.testing.assert_allclose(projected, T, atol=1e-8 * (1.0 + np.max(np.abs(T))))

    def test_sementes_invalidas(self, seeded):
        op, V1, _ = seeded
        with pytest.raises(ConfigurationError):
            lanczos_procedure(op, V1, V1 * 3.0, 2)

    def test_m_invalido(self, seeded):
        op, V1, W1 = seeded
        with pytest.raises(ConfigurationError):
            lanczos_procedure(op, V1, W1, 0)

    def test_incremental_igual_ao_procedimento(self, seeded):
        op, V1, W1 = seeded
        process = LanczosProcess(op, V1, W1)
        for _ in range(3):
            process.step()
        state = lanczos_procedure(op, V1, W1, 3)
        np.testing.assert_array_equal(process.tridiagonal().to_dense(), state.T.to_dense())
        assert len(state.V) == 4


class TestExtendedRelation:
    """Relações de três termos de V e W."""

    def test_operador_aleatorio(self, seeded):
        op, V1, W1 = seeded
        state = lanczos_procedure(op, V1, W1, 4)
        assert extended_relation_check(state, op) <= 1e-10

    def test_fatores_simetricos(self):
        rng = np.random.default_rng(3)
        factors = []
        for I in (2, 3, 2):
            B = rng.standard_normal((I, I))
            factors.append(B + B.T + 4.0 * np.eye(I))
        op = SylvesterOperator.from_factors(factors)
        V1, W1 = seed_pair(op, rng.standard_normal(op.shape))
        state = lanczos_procedure(op, V1, W1, 3)
        assert extended_relation_check(state, op) <= 1e-10

    def test_estado_parcial_apos_quebra(self):
        op = SylvesterOperator.from_factors([np.eye(3)])
        V1, W1 = seed_pair(op, np.ones(3))
        with pytest.raises(LanczosBreakdown) as exc:
            lanczos_procedure(op, V1, W1, 1)
        assert extended_relation_check(exc.value.state, op) == pytest.approx(0.0, abs=1e-15)


# =============================================================================
# MATRIZ TRIDIAGONAL
# =============================================================================

class TestTridiagonal:
    """LU sem pivoteamento e resolução de T y = rhs."""

    def test_lu_dois_por_dois(self):
        lu = lu_tridiagonal(TridiagonalMatrix.from_dense(np.array([[2.0, 1.0], [1.0, 2.0]])))
        np.testing.assert_allclose(lu.lower_dense(), [[1.0, 0.0], [0.5, 1.0]])
        np.testing.assert_allclose(lu.upper_dense(), [[2.0, 1.0], [0.0, 1.5]])

    def test_lu_diagonal(self):
        T = TridiagonalMatrix.from_dense(np.diag([1.0, 3.0, 5.0]))
        lu = lu_tridiagonal(T)
        np.testing.assert_array_equal(lu.lower_dense(), np.eye(3))
        np.testing.assert_array_equal(lu.upper_dense(), T.to_dense())

    def test_lu_reconstroi(self):
        rng = np.random.default_rng(5)
        T = TridiagonalMatrix(rng.uniform(3, 4, 6), rng.uniform(-1, 1, 5), rng.uniform(-1, 1, 5))
        lu = lu_tridiagonal(T)
        dense = T.to_dense()
        error = np.linalg.norm(lu.lower_dense() @ lu.upper_dense() - dense) / np.linalg.norm(dense)
        assert error <= 1e-13

    def test_pivo_nulo(self):
        T = TridiagonalMatrix.from_dense(np.array([[1.0, 1.0], [1.0, 1.0]]))
        with pytest.raises(SeriousBreakdown) as exc:
            lu_tridiagonal(T)
        assert exc.value.pivot_index == 2

    def test_solve_dois_por_dois(self):
        T = TridiagonalMatrix.from_dense(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(tridiagonal_solve(T, [3.0, 0.0]), [2.0, -1.0], rtol=1e-14)

    def test_solve_identidade(self):
        T = TridiagonalMatrix.from_dense(np.eye(4))
        rhs = np.array([1.0, -2.0, 3.0, 0.5])
        np.testing.assert_array_equal(tridiagonal_solve(T, rhs), rhs)

    def test_solve_oraculo_denso(self):
        rng = np.random.default_rng(9)
        T = TridiagonalMatrix(rng.uniform(4, 5, 8), rng.uniform(-1, 1, 7), rng.uniform(-1, 1, 7))
        rhs = rng.standard_normal(8)
        y = tridiagonal_solve(T, rhs)
        assert np.linalg.norm(T.to_dense() @ y - rhs) <= 1e-12 * np.linalg.norm(rhs)

    def test_solve_tamanho_errado(self):
        with pytest.raises(ShapeError):
            tridiagonal_solve(TridiagonalMatrix.from_dense(np.eye(2)), [1.0, 2.0, 3.0])

    def test_tamanhos_inconsistentes(self):
        with pytest.raises(ShapeError):
            TridiagonalMatrix([1.0, 2.0], [1.0, 2.0], [1.0])

    def test_matriz_estendida(self):
        T = TridiagonalMatrix([1.0, 2.0], [3.0], [4.0], next_delta=5.0)
        np.testing.assert_array_equal(T.extended(), [[1.0, 3.0], [4.0, 2.0], [0.0, 5.0]])
