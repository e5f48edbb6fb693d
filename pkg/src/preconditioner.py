# -*- coding: utf-8 -*-
"""
Pré-condicionador pelo produto de Kronecker mais próximo (NKP).

A matriz A = Σ E ⊗ ... ⊗ A_n ⊗ ... ⊗ E é aproximada por Q₁ ⊗ ... ⊗ Q_N com
Q_i = a_{i1} A_{N+1-i} + a_{i2} E, e A⁻¹ por Q₁⁻¹ ⊗ ... ⊗ Q_N⁻¹. Os 2N
parâmetros minimizam ‖A − Q₁ ⊗ ... ⊗ Q_N‖_F² via Nelder-Mead, com o
objetivo avaliado sem montar A.

O sistema pré-condicionado (à esquerda) é L̃(X) = D̃, com
L̃(X) = L(X) ×₁ Q_N⁻¹ ×₂ ... ×_N Q₁⁻¹ e D̃ = D ×₁ Q_N⁻¹ ×₂ ... ×_N Q₁⁻¹.
"""

import dataclasses
import logging
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .constants import NKP_EXACT_RTOL, NM_MAX_RESTARTS, NM_RESTART_RTOL, SINGULAR_TOL
from .errors import PreconditionerSingularError, ShapeError
from .optimize import OptimizerConfig, nelder_mead
from .solvers import SolveConfig, SolveReport, solve_tbicor, solve_tcors, solve_tlb
from .sylvester import SylvesterOperator
from .tensor import Shape, fold, unfold

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NkpParams:
    """
    Coeficientes a_{i1}, a_{i2} (matriz N × 2).

    A linha i (1..N) define Q_i = a_{i1} A_{N+1-i} + a_{i2} E.
    """
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=np.float64)
        if a.ndim != 2 or a.shape[1] != 2 or a.shape[0] < 1:
            raise ShapeError(f"Parâmetros devem ser N × 2, recebido {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("Parâmetros NKP não finitos")
        a.flags.writeable = False
        object.__setattr__(self, 'a', a)

    @classmethod
    def from_vector(cls, values) -> 'NkpParams':
        """(a₁₁, a₁₂, a₂₁, a₂₂, ...) -> NkpParams."""
        return cls(np.reshape(np.asarray(values, dtype=np.float64), (-1, 2)))

    def to_vector(self) -> np.ndarray:
        return self.a.reshape(-1).copy()

    @property
    def order(self) -> int:
        return self.a.shape[0]


def _check_order(params: NkpParams, op: SylvesterOperator):
    if params.order != op.order:
        raise ShapeError(f"{params.order} linhas de parâmetros para operador de ordem {op.order}")


def paired_factor(op: SylvesterOperator, i: int) -> np.ndarray:
    """A_{N+1-i}, o fator usado por Q_i (i de 1 a N)."""
    return op.factors[op.order - i]


def build_q(params: NkpParams, op: SylvesterOperator) -> Tuple[np.ndarray, ...]:
    """Q_i = a_{i1} A_{N+1-i} + a_{i2} E, i = 1..N."""
    _check_order(params, op)
    result = []
    for i in range(1, op.order + 1):
        A = paired_factor(op, i)
        a1, a2 = params.a[i - 1]
        result.append(a1 * A + a2 * np.eye(A.shape[0]))
    return tuple(result)


def _objective_terms(params: NkpParams, op: SylvesterOperator) -> Tuple[float, float, float]:
    """(‖A‖_F², ⟨A, K⟩, ‖K‖_F²) com K = Q₁ ⊗ ... ⊗ Q_N."""
    _check_order(params, op)
    N = op.order
    sizes = np.array(op.shape, dtype=np.float64)
    a_sq = np.array([np.sum(A * A) for A in op.factors])
    a_tr = np.array([np.trace(A) for A in op.factors])
    # Q do modo k é Q_{N+1-k}: linha N-k de a
    coeffs = params.a[::-1]
    c1, c2 = coeffs[:, 0], coeffs[:, 1]

    q_sq = c1 * c1 * a_sq + 2.0 * c1 * c2 * a_tr + c2 * c2 * sizes
    q_tr = c1 * a_tr + c2 * sizes
    aq = c1 * a_sq + c2 * a_tr

    def prod_except(values: np.ndarray, *skip: int) -> float:
        mask = np.ones(N, dtype=bool)
        mask[list(skip)] = False
        return float(np.prod(values[mask]))

    k_sq = float(np.prod(q_sq))
    a_k = sum(aq[n] * prod_except(q_tr, n) for n in range(N))
    a_norm_sq = sum(a_sq[n] * prod_except(sizes, n) for n in range(N))
    for n in range(N):
        for m in range(N):
            if n != m:
                a_norm_sq += a_tr[n] * a_tr[m] * prod_except(sizes, n, m)
    return float(a_norm_sq), float(a_k), k_sq


def nkp_objective(params: NkpParams, op: SylvesterOperator) -> float:
    """
    ‖A − Q₁ ⊗ ... ⊗ Q_N‖_F² pelas identidades fatoradas.

    Usa ⟨B₁ ⊗ ... ⊗ B_N, C₁ ⊗ ... ⊗ C_N⟩ = Π ⟨B_k, C_k⟩ em todos os termos
    cruzados; o custo não depende de M.
    """
    a_norm_sq, a_k, k_sq = _objective_terms(params, op)
    return max(a_norm_sq - 2.0 * a_k + k_sq, 0.0)


def q_norms(params: NkpParams, op: SylvesterOperator) -> np.ndarray:
    """‖Q_i‖_F, i = 1..N, sem montar os Q_i."""
    _check_order(params, op)
    result = np.empty(op.order)
    for i in range(1, op.order + 1):
        A = paired_factor(op, i)
        a1, a2 = params.a[i - 1]
        sq = a1 * a1 * np.sum(A * A) + 2.0 * a1 * a2 * np.trace(A) + a2 * a2 * A.shape[0]
        result[i - 1] = np.sqrt(max(float(sq), 0.0))
    return result


def balance_params(params: NkpParams, op: SylvesterOperator) -> NkpParams:
    """
    Representante equilibrado e com escala ótima dos mesmos Q_i.

    O objetivo não muda quando Q_i é multiplicado por s e Q_j por 1/s. Aqui
    Q₁ recebe o fator c = ⟨A, K⟩/‖K‖_F², que minimiza ‖A − cK‖_F², e depois
    cada linha é reescalada para que todos os ‖Q_i‖_F sejam iguais à média
    geométrica (o produto dos fatores é 1). O objetivo nunca aumenta.
    """
    _, a_k, k_sq = _objective_terms(params, op)
    a = params.a.copy()
    if k_sq > 0.0 and a_k != 0.0:
        a[0] *= a_k / k_sq
    norms = q_norms(NkpParams(a), op)
    if np.all(norms > 0.0) and np.all(np.isfinite(norms)):
        target = float(np.exp(np.mean(np.log(norms))))
        a *= (target / norms)[:, None]
    return NkpParams(a)


def initial_params(op: SylvesterOperator) -> NkpParams:
    """a_{i1} = 1 e a_{i2} = (N-1)/N · média da diagonal do fator pareado."""
    N = op.order
    rows = []
    for i in range(1, N + 1):
        shift = (N - 1) / N * float(np.mean(np.diag(paired_factor(op, i))))
        rows.append((1.0, shift))
    return NkpParams(np.array(rows))


def _factorize(Q: np.ndarray, index: int):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', LinAlgWarning)
        lu, piv = lu_factor(Q)
    pivot = float(np.min(np.abs(np.diag(lu))))
    if pivot <= SINGULAR_TOL * float(np.max(np.abs(Q))):
        raise PreconditionerSingularError(index, pivot)
    return lu, piv


@dataclass(frozen=True)
class NkpPreconditioner:
    """
    Q₁..Q_N ajustados e suas fatorações LU (com pivoteamento parcial).

    Attributes:
        params: Coeficientes a_ij
        Q: Matrizes Q_i
        factorizations: (lu, piv) de cada Q_i
        objective_value: Objetivo no ponto aceito
        initial_objective: Objetivo no chute inicial
        optimizer_converged: False se o Nelder-Mead parou pelo orçamento
        evaluations: Avaliações do objetivo gastas no ajuste
    """
    params: NkpParams
    Q: Tuple[np.ndarray, ...]
    factorizations: Tuple[tuple, ...]
    objective_value: float
    initial_objective: float
    optimizer_converged: bool = True
    evaluations: int = 0

    @classmethod
    def from_params(cls, op: SylvesterOperator, params: NkpParams, **kwargs) -> 'NkpPreconditioner':
        """
        Monta e fatora os Q_i sem ajuste.

        Raises:
            PreconditionerSingularError: Se algum Q_i for singular
        """
        Q = build_q(params, op)
        factorizations = tuple(_factorize(Qi, i) for i, Qi in enumerate(Q, 1))
        objective = nkp_objective(params, op)
        kwargs.setdefault('objective_value', objective)
        kwargs.setdefault('initial_objective', objective)
        return cls(params=params, Q=Q, factorizations=factorizations, **kwargs)

    @classmethod
    def identity(cls, op: SylvesterOperator) -> 'NkpPreconditioner':
        """Q_i = E (L̃ = L)."""
        return cls.from_params(op, NkpParams(np.tile([0.0, 1.0], (op.order, 1))))

    @property
    def order(self) -> int:
        return len(self.Q)

    @property
    def shape(self) -> Shape:
        """Forma do tensor: o modo n usa Q_{N+1-n}."""
        return tuple(Qi.shape[0] for Qi in reversed(self.Q))

    def solve_mode(self, X: np.ndarray, n: int, transpose: bool = False) -> np.ndarray:
        """X ×_n Q_{N+1-n}⁻¹ (ou Q⁻ᵀ) por substituição triangular."""
        factor = self.factorizations[self.order - n]
        solved = lu_solve(factor, unfold(X, n), trans=1 if transpose else 0)
        return fold(solved, n, X.shape)

    def apply_inverse(self, X: np.ndarray, transpose: bool = False) -> np.ndarray:
        """X ×₁ Q_N⁻¹ ×₂ ... ×_N Q₁⁻¹ (ou com Q⁻ᵀ)."""
        if X.shape != self.shape:
            raise ShapeError(f"Tensor {X.shape} incompatível com o pré-condicionador {self.shape}")
        for n in range(1, self.order + 1):
            X = self.solve_mode(X, n, transpose)
        return X


@dataclass(frozen=True)
class PreconditionedOperator:
    """L̃ = M·L com M = Q₁⁻¹ ⊗ ... ⊗ Q_N⁻¹; satisfaz OperatorHandle."""
    base: SylvesterOperator
    pre: NkpPreconditioner

    def __post_init__(self):
        if self.pre.shape != self.base.shape:
            raise ShapeError(
                f"Pré-condicionador {self.pre.shape} incompatível com o operador {self.base.shape}"
            )

    @property
    def shape(self) -> Shape:
        return self.base.shape

    def apply(self, X: np.ndarray) -> np.ndarray:
        return self.pre.apply_inverse(self.base.apply(X))

    def apply_transpose(self, X: np.ndarray) -> np.ndarray:
        return self.base.apply_transpose(self.pre.apply_inverse(X, transpose=True))


def apply_preconditioned(pop: PreconditionedOperator, X: np.ndarray) -> np.ndarray:
    return pop.apply(X)


def apply_preconditioned_transpose(pop: PreconditionedOperator, X: np.ndarray) -> np.ndarray:
    return pop.apply_transpose(X)


def precondition_rhs(D: np.ndarray, pre: NkpPreconditioner) -> np.ndarray:
    """D̃ = D ×₁ Q_N⁻¹ ×₂ ... ×_N Q₁⁻¹."""
    return pre.apply_inverse(np.asarray(D, dtype=np.float64))


def _parameter_scale(params: NkpParams) -> np.ndarray:
    """Escala diagonal do Nelder-Mead: maior |a_ij| de cada linha (1 para linha nula)."""
    rows = np.max(np.abs(params.a), axis=1)
    rows[rows == 0.0] = 1.0
    return np.repeat(rows, 2)


def fit_nkp(op: SylvesterOperator, optcfg: Optional[OptimizerConfig] = None,
            initial: Optional[NkpParams] = None) -> NkpPreconditioner:
    """
    Ajusta os a_ij por Nelder-Mead e fatora os Q_i.

    O chute inicial é equilibrado por balance_params. Cada execução do
    Nelder-Mead trabalha em coordenadas relativas ao ponto de partida; o
    melhor ponto é reequilibrado e serve de partida para a próxima, até que
    uma execução não melhore o objetivo (no máximo NM_MAX_RESTARTS).

    Args:
        op: Operador de Sylvester
        optcfg: Configuração do otimizador
        initial: Chute inicial (padrão: initial_params)

    Returns:
        NkpPreconditioner; optimizer_converged=False sinaliza que a última
        execução parou pelo orçamento

    Raises:
        PreconditionerSingularError: Se algum Q_i ajustado for singular
    """
    start = initial if initial is not None else initial_params(op)
    _check_order(start, op)
    f0 = nkp_objective(start, op)
    a_norm_sq = _objective_terms(start, op)[0]

    params, value = start, f0
    balanced = balance_params(start, op)
    balanced_value = nkp_objective(balanced, op)
    if balanced_value <= value:
        params, value = balanced, balanced_value

    evals, converged = 0, True
    for run in range(1, NM_MAX_RESTARTS + 1):
        if value <= NKP_EXACT_RTOL * a_norm_sq:
            break
        scale = _parameter_scale(params)
        result = nelder_mead(lambda y: nkp_objective(NkpParams.from_vector(y * scale), op),
                             params.to_vector() / scale, optcfg)
        evals += result.evals
        converged = result.converged
        if not result.fun < value:
            break

        # reequilibrar só altera o objetivo por arredondamento
        candidate = balance_params(NkpParams.from_vector(result.x * scale), op)
        improvement = value - result.fun
        params, value = candidate, nkp_objective(candidate, op)
        logger.debug("NKP execução %d: objetivo %.6e (%d avaliações)", run, value, result.evals)
        if improvement <= NM_RESTART_RTOL * value:
            break

    pre = NkpPreconditioner.from_params(
        op, params, objective_value=value, initial_objective=f0,
        optimizer_converged=converged, evaluations=evals,
    )
    logger.info("NKP ajustado: objetivo %.6e -> %.6e (%d avaliações)", f0, value, evals)
    return pre


def _solve_preconditioned(body: Callable[..., SolveReport], name: str, op: SylvesterOperator,
                          D: np.ndarray, X0, cfg, optcfg, preconditioner, callback) -> SolveReport:
    pre = preconditioner if preconditioner is not None else fit_nkp(op, optcfg)
    pop = PreconditionedOperator(op, pre)
    D_tilde = precondition_rhs(D, pre)
    report = body(pop, D_tilde, X0, cfg, callback=callback, name=name)
    return dataclasses.replace(report, preconditioner=pre)


def solve_ptlb(op: SylvesterOperator, D: np.ndarray, X0: Optional[np.ndarray] = None,
               cfg: Optional[SolveConfig] = None, optcfg: Optional[OptimizerConfig] = None,
               preconditioner: Optional[NkpPreconditioner] = None, callback=None) -> SolveReport:
    """TLB sobre (L̃, D̃); ajusta o NKP quando nenhum é fornecido."""
    return _solve_preconditioned(solve_tlb, 'ptlb', op, D, X0, cfg, optcfg, preconditioner, callback)


def solve_ptbicor(op: SylvesterOperator, D: np.ndarray, X0: Optional[np.ndarray] = None,
                  cfg: Optional[SolveConfig] = None, optcfg: Optional[OptimizerConfig] = None,
                  preconditioner: Optional[NkpPreconditioner] = None, callback=None) -> SolveReport:
    """TBiCOR sobre (L̃, D̃)."""
    return _solve_preconditioned(solve_tbicor, 'ptbicor', op, D, X0, cfg, optcfg, preconditioner, callback)


def solve_ptcors(op: SylvesterOperator, D: np.ndarray, X0: Optional[np.ndarray] = None,
                 cfg: Optional[SolveConfig] = None, optcfg: Optional[OptimizerConfig] = None,
                 preconditioner: Optional[NkpPreconditioner] = None, callback=None) -> SolveReport:
    """TCORS sobre (L̃, D̃)."""
    return _solve_preconditioned(solve_tcors, 'ptcors', op, D, X0, cfg, optcfg, preconditioner, callback)


SOLVERS = {
    'tlb': solve_tlb,
    'tbicor': solve_tbicor,
    'tcors': solve_tcors,
    'ptlb': solve_ptlb,
    'ptbicor': solve_ptbicor,
    'ptcors': solve_ptcors,
}

PRECONDITIONED_SOLVERS = frozenset({'ptlb', 'ptbicor', 'ptcors'})
