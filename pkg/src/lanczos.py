# -*- coding: utf-8 -*-
"""
Processo de Lanczos de L-biortogonalização em forma tensorial.

Gera bases V₁, V₂, ... e W₁, W₂, ... com ⟨W_i, L(V_j)⟩ = δ_ij e a matriz
tridiagonal T_m dos coeficientes α, β, δ. Inclui a LU sem pivoteamento de
T_m e a resolução tridiagonal usada pelo TLB.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .constants import BREAKDOWN_TOL, PIVOT_TOL
from .errors import (
    ConfigurationError,
    DegenerateSeedError,
    LanczosBreakdown,
    SeriousBreakdown,
    ShapeError,
)
from .sylvester import OperatorHandle
from .tensor import inner, norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TridiagonalMatrix:
    """
    T_m com diagonal α₁..α_m, superdiagonal β₂..β_m e subdiagonal δ₂..δ_m.

    Attributes:
        alpha: m coeficientes diagonais
        beta: m-1 coeficientes da superdiagonal
        delta: m-1 coeficientes da subdiagonal
        next_delta: δ_{m+1}, linha extra da matriz estendida
        next_beta: β_{m+1}, usado pela relação dual de W
    """
    alpha: np.ndarray
    beta: np.ndarray
    delta: np.ndarray
    next_delta: float = 0.0
    next_beta: float = 0.0

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=np.float64).reshape(-1)
        beta = np.array(self.beta, dtype=np.float64).reshape(-1)
        delta = np.array(self.delta, dtype=np.float64).reshape(-1)
        m = alpha.shape[0]
        if m < 1:
            raise ShapeError("T_m precisa de ao menos um coeficiente diagonal")
        if beta.shape[0] != m - 1 or delta.shape[0] != m - 1:
            raise ShapeError(
                f"Tamanhos inconsistentes: alpha={m}, beta={beta.shape[0]}, delta={delta.shape[0]}"
            )
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(beta)) and np.all(np.isfinite(delta))):
            raise ValueError("T_m contém valores não finitos")
        for arr in (alpha, beta, delta):
            arr.flags.writeable = False
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'beta', beta)
        object.__setattr__(self, 'delta', delta)
        object.__setattr__(self, 'next_delta', float(self.next_delta))
        object.__setattr__(self, 'next_beta', float(self.next_beta))

    @classmethod
    def from_dense(cls, T: np.ndarray) -> 'TridiagonalMatrix':
        """Extrai as três diagonais de uma matriz quadrada."""
        T = np.asarray(T, dtype=np.float64)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise ShapeError(f"Matriz quadrada esperada, recebida {T.shape}")
        return cls(np.diag(T).copy(), np.diag(T, 1).copy(), np.diag(T, -1).copy())

    @property
    def size(self) -> int:
        return self.alpha.shape[0]

    def to_dense(self) -> np.ndarray:
        return np.diag(self.alpha) + np.diag(self.beta, 1) + np.diag(self.delta, -1)

    def extended(self) -> np.ndarray:
        """Matriz (m+1) × m com δ_{m+1} na última linha."""
        m = self.size
        ext = np.zeros((m + 1, m))
        ext[:m, :] = self.to_dense()
        ext[m, m - 1] = self.next_delta
        return ext

    def max_abs(self) -> float:
        values = [np.max(np.abs(self.alpha))]
        if self.size > 1:
            values += [np.max(np.abs(self.beta)), np.max(np.abs(self.delta))]
        return float(max(values))


@dataclass(frozen=True)
class BidiagonalPair:
    """
    Fatores L_m (unitário bidiagonal inferior) e U_m (bidiagonal superior).

    Attributes:
        lower: Multiplicadores l₂..l_m abaixo da diagonal de L_m
        upper_diag: Pivôs u₁..u_m
        upper_super: Superdiagonal de U_m (igual a β₂..β_m)
    """
    lower: np.ndarray
    upper_diag: np.ndarray
    upper_super: np.ndarray

    def lower_dense(self) -> np.ndarray:
        m = self.upper_diag.shape[0]
        return np.eye(m) + np.diag(self.lower, -1)

    def upper_dense(self) -> np.ndarray:
        return np.diag(self.upper_diag) + np.diag(self.upper_super, 1)


@dataclass(frozen=True)
class LanczosState:
    """
    Bases e coeficientes após m passos.

    V e W têm m+1 tensores; após uma quebra no passo m, apenas m.
    """
    V: Tuple[np.ndarray, ...]
    W: Tuple[np.ndarray, ...]
    T: TridiagonalMatrix
    m: int
    broke_down: bool = False


def lu_tridiagonal(T: TridiagonalMatrix, pivot_tol: float = PIVOT_TOL) -> BidiagonalPair:
    """
    LU sem pivoteamento: T_m = L_m U_m.

    Args:
        T: Matriz tridiagonal
        pivot_tol: Pivô mínimo relativo ao maior coeficiente de T

    Returns:
        BidiagonalPair com L_m unitário

    Raises:
        SeriousBreakdown: Se algum pivô |u_k| <= pivot_tol · max|T|
    """
    m = T.size
    threshold = pivot_tol * T.max_abs()
    upper = np.empty(m)
    lower = np.empty(m - 1)

    upper[0] = T.alpha[0]
    if abs(upper[0]) <= threshold:
        raise SeriousBreakdown(f"Pivô nulo na posição 1: {upper[0]:.3e}", pivot_index=1)
    for k in range(1, m):
        lower[k - 1] = T.delta[k - 1] / upper[k - 1]
        upper[k] = T.alpha[k] - lower[k - 1] * T.beta[k - 1]
        if abs(upper[k]) <= threshold:
            raise SeriousBreakdown(
                f"Pivô nulo na posição {k + 1}: {upper[k]:.3e}", pivot_index=k + 1
            )
    return BidiagonalPair(lower=lower, upper_diag=upper, upper_super=T.beta.copy())


def tridiagonal_solve(T: TridiagonalMatrix, rhs: np.ndarray,
                      pivot_tol: float = PIVOT_TOL) -> np.ndarray:
    """
    Resolve T y = rhs por substituição progressiva e regressiva (Thomas).

    Raises:
        ShapeError: Se len(rhs) != m
        SeriousBreakdown: Pivô quase nulo
    """
    rhs = np.asarray(rhs, dtype=np.float64).reshape(-1)
    m = T.size
    if rhs.shape[0] != m:
        raise ShapeError(f"Lado direito de tamanho {rhs.shape[0]} para T de ordem {m}")

    lu = lu_tridiagonal(T, pivot_tol)
    z = np.empty(m)
    z[0] = rhs[0]
    for k in range(1, m):
        z[k] = rhs[k] - lu.lower[k - 1] * z[k - 1]

    y = np.empty(m)
    y[m - 1] = z[m - 1] / lu.upper_diag[m - 1]
    for k in range(m - 2, -1, -1):
        y[k] = (z[k] - lu.upper_super[k] * y[k + 1]) / lu.upper_diag[k]
    return y


def seed_pair(op: OperatorHandle, R0: np.ndarray,
              breakdown_tol: float = BREAKDOWN_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sementes V₁ = R₀/‖R₀‖ e W₁ = L(V₁)/⟨L(V₁), L(V₁)⟩.

    Garante ⟨L(V₁), W₁⟩ = 1.

    Raises:
        ValueError: Se R₀ for nulo
        DegenerateSeedError: Se ⟨L(V₁), L(V₁)⟩ < breakdown_tol
    """
    r_norm = norm(R0)
    if r_norm == 0.0:
        raise ValueError("Resíduo inicial nulo: não há direção para semear o processo")
    V1 = R0 / r_norm
    H = op.apply(V1)
    hh = inner(H, H)
    if hh < breakdown_tol:
        raise DegenerateSeedError(f"L anula a direção do resíduo (⟨L(V₁),L(V₁)⟩={hh:.3e})")
    return V1, H / hh


class LanczosProcess:
    """
    Forma incremental do processo: cada step() executa uma passada do laço.

    Example:
        >>> process = LanczosProcess(op, V1, W1)
        >>> process.step()
        >>> process.tridiagonal().alpha
    """

    def __init__(self, op: OperatorHandle, V1: np.ndarray, W1: np.ndarray,
                 breakdown_tol: float = BREAKDOWN_TOL):
        self.op = op
        self.breakdown_tol = breakdown_tol
        self.V: List[np.ndarray] = [V1]
        self.W: List[np.ndarray] = [W1]
        self.alpha: List[float] = []
        # beta[k], delta[k] guardam β_{k+2}, δ_{k+2}
        self.beta: List[float] = []
        self.delta: List[float] = []
        self.broke_down = False
        self._breakdown_pair: Tuple[float, float] = (0.0, 0.0)
        self._LV = op.apply(V1)

    @property
    def m(self) -> int:
        return len(self.alpha)

    def step(self):
        """
        Avança um passo j = m+1.

        Raises:
            LanczosBreakdown: Se |⟨W̄_{j+1}, L(V̄_{j+1})⟩| é desprezível; o
                estado parcial (com α_j) fica em exc.state
        """
        if self.broke_down:
            raise LanczosBreakdown("Processo já interrompido", step=self.m, state=self.state())

        j = self.m + 1
        Vj, Wj, H = self.V[-1], self.W[-1], self._LV

        alpha = inner(self.op.apply(H), Wj)
        V_bar = H - alpha * Vj
        W_bar = self.op.apply_transpose(Wj) - alpha * Wj
        if j > 1:
            V_bar -= self.beta[-1] * self.V[-2]
            W_bar -= self.delta[-1] * self.W[-2]

        LV_bar = self.op.apply(V_bar)
        omega = inner(W_bar, LV_bar)
        self.alpha.append(alpha)

        scale = 1.0 + norm(LV_bar) * norm(W_bar)
        if abs(omega) < self.breakdown_tol * scale:
            self.broke_down = True
            delta = math.sqrt(abs(omega))
            self._breakdown_pair = (delta, omega / delta if delta > 0 else 0.0)
            logger.debug("Quebra de Lanczos no passo %d (ω=%.3e)", j, omega)
            raise LanczosBreakdown(
                f"⟨W̄, L(V̄)⟩ desprezível no passo {j} ({omega:.3e})", step=j, state=self.state()
            )

        delta = math.sqrt(abs(omega))
        beta = omega / delta
        self.delta.append(delta)
        self.beta.append(beta)
        self.V.append(V_bar / delta)
        self.W.append(W_bar / beta)
        self._LV = LV_bar / delta

    def tridiagonal(self) -> TridiagonalMatrix:
        if self.m < 1:
            raise ConfigurationError("Nenhum passo executado")
        if self.broke_down:
            next_delta, next_beta = self._breakdown_pair
            return TridiagonalMatrix(self.alpha, self.beta, self.delta, next_delta, next_beta)
        return TridiagonalMatrix(
            self.alpha, self.beta[:-1], self.delta[:-1], self.delta[-1], self.beta[-1]
        )

    def state(self) -> LanczosState:
        return LanczosState(
            V=tuple(self.V), W=tuple(self.W), T=self.tridiagonal(),
            m=self.m, broke_down=self.broke_down,
        )


def lanczos_procedure(op: OperatorHandle, V1: np.ndarray, W1: np.ndarray, m: int,
                      breakdown_tol: float = BREAKDOWN_TOL) -> LanczosState:
    """
    Executa m passos do processo de L-biortogonalização.

    Args:
        op: Operador (simples ou pré-condicionado)
        V1: Semente primal
        W1: Semente dual, com ⟨W₁, L(V₁)⟩ = 1
        m: Número máximo de passos
        breakdown_tol: Tolerância de quebra

    Returns:
        LanczosState com m passos

    Raises:
        ConfigurationError: Se m < 1 ou ⟨W₁, L(V₁)⟩ != 1
        LanczosBreakdown: Quebra no passo j, com o estado parcial anexado
    """
    if m < 1:
        raise ConfigurationError(f"m deve ser >= 1, recebido {m}")
    pairing = inner(W1, op.apply(V1))
    if abs(pairing - 1.0) > 1e-10:
        raise ConfigurationError(f"Sementes inválidas: ⟨W₁, L(V₁)⟩ = {pairing!r}")

    process = LanczosProcess(op, V1, W1, breakdown_tol)
    for _ in range(m):
        process.step()
    return process.state()


def extended_relation_check(state: LanczosState, op: OperatorHandle) -> float:
    """
    Maior desvio das relações de três termos.

    Verifica L(V_j) = β_j V_{j-1} + α_j V_j + δ_{j+1} V_{j+1} e
    Lᵀ(W_j) = δ_j W_{j-1} + α_j W_j + β_{j+1} W_{j+1}, cada desvio
    normalizado por 1 + ‖lado esquerdo‖.
    """
    m = state.m
    primal = state.T.extended()
    dual = np.zeros((m + 1, m))
    dual[:m, :] = state.T.to_dense().T
    dual[m, m - 1] = state.T.next_beta

    worst = 0.0
    for basis, coeffs, action in ((state.V, primal, op.apply), (state.W, dual, op.apply_transpose)):
        available = len(basis)
        for j in range(m):
            lhs = action(basis[j])
            recon = np.zeros_like(lhs)
            for i in range(max(0, j - 1), min(j + 2, available)):
                recon += coeffs[i, j] * basis[i]
            worst = max(worst, norm(lhs - recon) / (1.0 + norm(lhs)))
    return worst
