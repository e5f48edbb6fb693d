# -*- coding: utf-8 -*-
"""
Solvers de Krylov para a equação de Sylvester tensorial L(X) = D.

- TLB: projeção oblíqua na base de Lanczos, T_m y = ‖R₀‖e₁
- TBiCOR: resíduo L-ortogonal biconjugado
- TCORS: variante quadrática (polinômios de resíduo ao quadrado)

Os três corpos recebem qualquer OperatorHandle; as versões
pré-condicionadas reutilizam os mesmos corpos com L̃ e D̃.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd

from .constants import BREAKDOWN_TOL, DEFAULT_TOL, HISTORY_COLUMNS, MAX_ITERS_FACTOR, PIVOT_TOL
from .errors import ConfigurationError, DegenerateSeedError, LanczosBreakdown, SeriousBreakdown, ShapeError
from .lanczos import LanczosProcess, seed_pair, tridiagonal_solve
from .sylvester import OperatorHandle
from .tensor import inner, mode_n_vector_product, norm, stack_last
from .utils import near_zero

logger = logging.getLogger(__name__)


class StoppingRule(Enum):
    """Critério de parada."""
    REL_ERROR = 'rel_error'          # ‖X_k − X*‖ / ‖X*‖
    REL_RESIDUAL = 'rel_residual'    # ‖R_k‖ / ‖D‖


class SolveStatus(Enum):
    """Situação final de uma resolução."""
    CONVERGED = 'converged'
    MAX_ITERS = 'max_iters'
    BREAKDOWN = 'breakdown'


class BreakdownKind(Enum):
    """Qual produto interno se anulou."""
    SEED = 'semente'
    LANCZOS = 'lanczos'
    PIVOT = 'pivo'
    RHO = 'rho'
    SIGMA = 'sigma'


@dataclass(frozen=True)
class BreakdownInfo:
    kind: BreakdownKind
    step: int
    message: str


@dataclass
class SolveConfig:
    """
    Configuração de uma resolução.

    Attributes:
        tol: Limiar relativo de parada
        max_iters: Limite de iterações (None = 10·M)
        stopping_rule: None escolhe REL_ERROR quando `exact` é dado,
            senão REL_RESIDUAL
        exact: Solução exata X*, quando conhecida
        breakdown_tol: Tolerância relativa de quebra
        pivot_tol: Pivô mínimo da LU de T_m (TLB)
        record_history: Se False, o histórico guarda só a primeira e a
            última iteração
    """
    tol: float = DEFAULT_TOL
    max_iters: Optional[int] = None
    stopping_rule: Optional[StoppingRule] = None
    exact: Optional[np.ndarray] = None
    breakdown_tol: float = BREAKDOWN_TOL
    pivot_tol: float = PIVOT_TOL
    record_history: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigurationError(f"tol deve ser > 0, recebido {self.tol}")
        if self.max_iters is not None and self.max_iters < 1:
            raise ConfigurationError(f"max_iters deve ser >= 1, recebido {self.max_iters}")
        if self.breakdown_tol < 0 or self.pivot_tol < 0:
            raise ConfigurationError("Tolerâncias de quebra não podem ser negativas")
        if self.exact is not None:
            self.exact = np.asarray(self.exact, dtype=np.float64)
        if self.stopping_rule is None:
            self.stopping_rule = (
                StoppingRule.REL_ERROR if self.exact is not None else StoppingRule.REL_RESIDUAL
            )
        if self.stopping_rule is StoppingRule.REL_ERROR and self.exact is None:
            raise ConfigurationError("REL_ERROR exige a solução exata (exact)")

    def iteration_limit(self, size: int) -> int:
        return self.max_iters if self.max_iters is not None else MAX_ITERS_FACTOR * size


class HistoryEntry(NamedTuple):
    iteration: int
    rel_error: float       # NaN sem X*
    rel_residual: float
    elapsed_ms: float


@dataclass(frozen=True)
class SolveReport:
    """
    Resultado de uma resolução.

    Attributes:
        solution: Último iterado X_k
        iterations: Passadas completas do laço
        status: CONVERGED, MAX_ITERS ou BREAKDOWN
        history: Entradas das iterações 0..iterations
        stopping_rule: Critério usado
        solver: Nome do solver
        breakdown: Detalhes da quebra, se houve
        preconditioner: NkpPreconditioner usado pelas variantes PT*
    """
    solution: np.ndarray
    iterations: int
    status: SolveStatus
    history: Tuple[HistoryEntry, ...]
    stopping_rule: StoppingRule
    solver: str = ''
    breakdown: Optional[BreakdownInfo] = None
    preconditioner: Any = None

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED

    @property
    def final_metric(self) -> float:
        last = self.history[-1]
        if self.stopping_rule is StoppingRule.REL_ERROR:
            return last.rel_error
        return last.rel_residual

    @property
    def final_rel_error(self) -> float:
        return self.history[-1].rel_error

    def history_frame(self) -> pd.DataFrame:
        """Histórico como DataFrame (iter, rel_error, rel_residual, elapsed_ms)."""
        return pd.DataFrame(list(self.history), columns=list(HISTORY_COLUMNS))


@dataclass(frozen=True)
class TlbState:
    X: np.ndarray
    R: np.ndarray
    y: np.ndarray
    next_basis: Optional[np.ndarray] = None   # V_{m+1}


@dataclass(frozen=True)
class BicorState:
    """Snapshot de uma passada do TBiCOR; P e S são os da passada."""
    X: np.ndarray
    R: np.ndarray
    R_star: np.ndarray
    P: Optional[np.ndarray] = None
    P_star: Optional[np.ndarray] = None
    S: Optional[np.ndarray] = None
    S_star: Optional[np.ndarray] = None
    T: Optional[np.ndarray] = None
    alpha: float = 0.0
    beta: float = 0.0


@dataclass(frozen=True)
class TcorsState:
    """Snapshot de uma passada do TCORS (tensores da passada n)."""
    X: np.ndarray
    U: np.ndarray
    Z: Optional[np.ndarray] = None
    Z_hat: Optional[np.ndarray] = None
    T_hat: Optional[np.ndarray] = None
    D_cap: Optional[np.ndarray] = None
    C: Optional[np.ndarray] = None
    Q: Optional[np.ndarray] = None
    Q_hat: Optional[np.ndarray] = None
    H: Optional[np.ndarray] = None
    V_cap: Optional[np.ndarray] = None
    F: Optional[np.ndarray] = None
    rho_prev: float = 0.0
    rho: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0


Callback = Optional[Callable[[int, Any], None]]


def stopping_metric(cfg: SolveConfig, X_k: np.ndarray, R_k: np.ndarray, D: np.ndarray) -> float:
    """
    Valor do critério de parada no iterado k.

    Raises:
        ConfigurationError: ‖X*‖ = 0 (REL_ERROR) ou ‖D‖ = 0 (REL_RESIDUAL)
    """
    if cfg.stopping_rule is StoppingRule.REL_ERROR:
        exact_norm = norm(cfg.exact)
        if exact_norm == 0.0:
            raise ConfigurationError("Erro relativo indefinido: ‖X*‖ = 0")
        return norm(X_k - cfg.exact) / exact_norm
    d_norm = norm(D)
    if d_norm == 0.0:
        raise ConfigurationError("Resíduo relativo indefinido: ‖D‖ = 0")
    return norm(R_k) / d_norm


class _ConvergenceMonitor:
    """Registra o histórico e decide a parada."""

    def __init__(self, cfg: SolveConfig, D: np.ndarray, solver: str):
        self.cfg = cfg
        self.D = D
        self.solver = solver
        self.d_norm = norm(D)
        self.exact_norm = norm(cfg.exact) if cfg.exact is not None else 0.0
        if cfg.exact is not None and cfg.exact.shape != D.shape:
            raise ShapeError(f"X* {cfg.exact.shape} incompatível com D {D.shape}")
        self.history: List[HistoryEntry] = []
        self._last: Optional[HistoryEntry] = None
        self._start = time.perf_counter()

    def record(self, k: int, X: np.ndarray, R: np.ndarray) -> bool:
        metric = stopping_metric(self.cfg, X, R, self.D)
        rel_error = (
            norm(X - self.cfg.exact) / self.exact_norm if self.exact_norm > 0 else float('nan')
        )
        rel_residual = norm(R) / self.d_norm if self.d_norm > 0 else norm(R)
        elapsed = 1000.0 * (time.perf_counter() - self._start)
        entry = HistoryEntry(k, rel_error, rel_residual, elapsed)
        if self.cfg.record_history or not self.history:
            self.history.append(entry)
        else:
            self._last = entry
        logger.debug("%s it=%d metrica=%.3e", self.solver, k, metric)
        return metric < self.cfg.tol

    def finish(self, X: np.ndarray, iterations: int, status: SolveStatus,
               breakdown: Optional[BreakdownInfo] = None) -> SolveReport:
        history = list(self.history)
        if not self.cfg.record_history and self._last is not None:
            history.append(self._last)
        if breakdown is not None:
            logger.warning("%s: quebra (%s) no passo %d: %s",
                           self.solver, breakdown.kind.value, breakdown.step, breakdown.message)
        logger.info("%s: %s em %d iterações", self.solver, status.value, iterations)
        return SolveReport(
            solution=X, iterations=iterations, status=status, history=tuple(history),
            stopping_rule=self.cfg.stopping_rule, solver=self.solver, breakdown=breakdown,
        )


def _prepare(op: OperatorHandle, D, X0) -> Tuple[np.ndarray, np.ndarray]:
    D = np.asarray(D, dtype=np.float64)
    if D.shape != tuple(op.shape):
        raise ShapeError(f"D {D.shape} incompatível com o operador {tuple(op.shape)}")
    if X0 is None:
        X0 = np.zeros(D.shape)
    X0 = np.asarray(X0, dtype=np.float64)
    if X0.shape != D.shape:
        raise ShapeError(f"X0 {X0.shape} incompatível com D {D.shape}")
    return D, X0


def _notify(callback: Callback, k: int, state):
    if callback is not None:
        callback(k, state)


def _is_zero_pairing(value: float, A: np.ndarray, B: np.ndarray, tol: float) -> bool:
    return near_zero(value, norm(A) * norm(B), tol)


def solve_tlb(op: OperatorHandle, D: np.ndarray, X0: Optional[np.ndarray] = None,
              cfg: Optional[SolveConfig] = None, callback: Callback = None,
              name: str = 'tlb') -> SolveReport:
    """
    TLB: a cada passo estende a base, resolve T_m y = ‖R₀‖e₁ e forma
    X_m = X₀ + Σ y_j V_j.

    Uma quebra de Lanczos com X_m já convergido é tratada como término
    feliz; caso contrário vira status BREAKDOWN.

    Args:
        op: Operador (L ou L̃)
        D: Lado direito
        X0: Chute inicial (padrão: tensor nulo)
        cfg: Configuração
        callback: Chamado com (m, TlbState)
        name: Nome registrado no relatório

    Returns:
        SolveReport
    """
    cfg = cfg or SolveConfig()
    D, X0 = _prepare(op, D, X0)
    monitor = _ConvergenceMonitor(cfg, D, name)
    limit = cfg.iteration_limit(D.size)

    R0 = D - op.apply(X0)
    converged = monitor.record(0, X0, R0)
    _notify(callback, 0, TlbState(X=X0, R=R0, y=np.empty(0)))
    r0_norm = norm(R0)
    if converged or r0_norm == 0.0:
        return monitor.finish(X0, 0, SolveStatus.CONVERGED)

    try:
        V1, W1 = seed_pair(op, R0, cfg.breakdown_tol)
    except DegenerateSeedError as exc:
        return monitor.finish(X0, 0, SolveStatus.BREAKDOWN,
                              BreakdownInfo(BreakdownKind.SEED, 0, str(exc)))

    process = LanczosProcess(op, V1, W1, cfg.breakdown_tol)
    X = X0
    for m in range(1, limit + 1):
        lucky = None
        try:
            process.step()
        except LanczosBreakdown as exc:
            lucky = exc

        rhs = np.zeros(m)
        rhs[0] = r0_norm
        try:
            y = tridiagonal_solve(process.tridiagonal(), rhs, cfg.pivot_tol)
        except SeriousBreakdown as exc:
            return monitor.finish(X, m - 1, SolveStatus.BREAKDOWN,
                                  BreakdownInfo(BreakdownKind.PIVOT, m, str(exc)))

        basis = stack_last(process.V[:m])
        X = X0 + mode_n_vector_product(basis, y, basis.ndim)
        R = D - op.apply(X)
        converged = monitor.record(m, X, R)
        next_basis = process.V[m] if len(process.V) > m else None
        _notify(callback, m, TlbState(X=X, R=R, y=y, next_basis=next_basis))

        if converged:
            return monitor.finish(X, m, SolveStatus.CONVERGED)
        if lucky is not None:
            return monitor.finish(X, m, SolveStatus.BREAKDOWN,
                                  BreakdownInfo(BreakdownKind.LANCZOS, m, str(lucky)))

    return monitor.finish(X, limit, SolveStatus.MAX_ITERS)


def solve_tbicor(op: OperatorHandle, D: np.ndarray, X0: Optional[np.ndarray] = None,
                 cfg: Optional[SolveConfig] = None, callback: Callback = None,
                 name: str = 'tbicor') -> SolveReport:
    """
    TBiCOR com R₀* = L(R₀).

    α_n = ⟨R_n*, T_n⟩ / ⟨S_n*, S_n⟩ e β_n = ⟨R_{n+1}*, T_{n+1}⟩ / ⟨R_n*, T_n⟩,
    com S = L(P), S* = Lᵀ(P*), T = L(R).
    """
    cfg = cfg or SolveConfig()
    D, X = _prepare(op, D, X0)
    monitor = _ConvergenceMonitor(cfg, D, name)
    limit = cfg.iteration_limit(D.size)

    R = D - op.apply(X)
    R_star = op.apply(R)
    T = R_star.copy()   # T₀ = L(R₀) = R₀*
    P = np.zeros_like(R)
    P_star = np.zeros_like(R)
    beta = 0.0
    rho = inner(R_star, T)

    converged = monitor.record(0, X, R)
    _notify(callback, 0, BicorState(X=X, R=R, R_star=R_star, T=T))
    if converged or norm(R) == 0.0:
        return monitor.finish(X, 0, SolveStatus.CONVERGED)

    for n in range(limit):
        if _is_zero_pairing(rho, R_star, T, cfg.breakdown_tol):
            return monitor.finish(X, n, SolveStatus.BREAKDOWN, BreakdownInfo(
                BreakdownKind.RHO, n, f"⟨R*, L(R)⟩ = {rho:.3e}"))

        P = R + beta * P
        P_star = R_star + beta * P_star
        S = op.apply(P)
        S_star = op.apply_transpose(P_star)
        sigma = inner(S_star, S)
        if _is_zero_pairing(sigma, S_star, S, cfg.breakdown_tol):
            return monitor.finish(X, n, SolveStatus.BREAKDOWN, BreakdownInfo(
                BreakdownKind.SIGMA, n, f"⟨S*, S⟩ = {sigma:.3e}"))

        alpha = rho / sigma
        X = X + alpha * P
        R = R - alpha * S
        R_star = R_star - alpha * S_star
        T = op.apply(R)
        rho_next = inner(R_star, T)
        beta = rho_next / rho
        rho = rho_next

        converged = monitor.record(n + 1, X, R)
        _notify(callback, n + 1, BicorState(
            X=X, R=R, R_star=R_star, P=P, P_star=P_star, S=S, S_star=S_star,
            T=T, alpha=alpha, beta=beta,
        ))
        if converged:
            return monitor.finish(X, n + 1, SolveStatus.CONVERGED)

    return monitor.finish(X, limit, SolveStatus.MAX_ITERS)


def solve_tcors(op: OperatorHandle, D: np.ndarray, X0: Optional[np.ndarray] = None,
                cfg: Optional[SolveConfig] = None, callback: Callback = None,
                name: str = 'tcors') -> SolveReport:
    """
    TCORS: U_n faz o papel do resíduo φ_n²(L)R₀.

    ρ_{n-1} = 0 interrompe com a indicação de reiniciar X₀; a escolha do
    novo X₀ fica com quem chama.
    """
    cfg = cfg or SolveConfig()
    D, X = _prepare(op, D, X0)
    monitor = _ConvergenceMonitor(cfg, D, name)
    limit = cfg.iteration_limit(D.size)

    U = D - op.apply(X)
    R0_star = op.apply(U)

    converged = monitor.record(0, X, U)
    _notify(callback, 0, TcorsState(X=X, U=U))
    if converged or norm(U) == 0.0:
        return monitor.finish(X, 0, SolveStatus.CONVERGED)

    rho_prev = 0.0
    H = V_cap = F = Q = None
    for n in range(1, limit + 1):
        Z_hat = op.apply(U)
        rho = inner(R0_star, Z_hat)
        if _is_zero_pairing(rho, R0_star, Z_hat, cfg.breakdown_tol):
            return monitor.finish(X, n - 1, SolveStatus.BREAKDOWN, BreakdownInfo(
                BreakdownKind.RHO, n,
                f"ρ = {rho:.3e}: interrompa e reinicie com outro X₀"))
        Z = U

        if n == 1:
            beta = 0.0
            T_hat = U
            D_cap = T_hat
            C = Z_hat
            Q = Z_hat
        else:
            beta = rho / rho_prev
            T_hat = U + beta * H
            D_cap = Z + beta * V_cap
            C = Z_hat + beta * F
            Q = C + beta * (F + beta * Q)

        Q_hat = op.apply(Q)
        sigma = inner(R0_star, Q_hat)
        if _is_zero_pairing(sigma, R0_star, Q_hat, cfg.breakdown_tol):
            return monitor.finish(X, n - 1, SolveStatus.BREAKDOWN, BreakdownInfo(
                BreakdownKind.SIGMA, n, f"⟨R₀*, L(Q)⟩ = {sigma:.3e}"))

        alpha = rho / sigma
        # H acompanha T_hat como na recorrência; não entra em X nem em U
        H = T_hat - alpha * Q
        V_cap = D_cap - alpha * Q
        F = C - alpha * Q_hat
        X = X + alpha * (2.0 * D_cap - alpha * Q)
        U = U - alpha * (2.0 * C - alpha * Q_hat)

        converged = monitor.record(n, X, U)
        _notify(callback, n, TcorsState(
            X=X, U=U, Z=Z, Z_hat=Z_hat, T_hat=T_hat, D_cap=D_cap, C=C, Q=Q, Q_hat=Q_hat,
            H=H, V_cap=V_cap, F=F, rho_prev=rho_prev, rho=rho, alpha=alpha, beta=beta,
        ))
        rho_prev = rho
        if converged:
            return monitor.finish(X, n, SolveStatus.CONVERGED)

    return monitor.finish(X, limit, SolveStatus.MAX_ITERS)
