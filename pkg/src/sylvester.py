# -*- coding: utf-8 -*-
"""
Operador de Sylvester L(X) = X ×₁ A₁ + ... + X ×_N A_N e seu dual.

O operador nunca materializa a matriz de Kronecker; a montagem densa
existe apenas como oráculo para instâncias pequenas.
"""

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Protocol, Sequence, Tuple, runtime_checkable

import numpy as np

from .constants import KRONECKER_MAX_SIZE
from .errors import ShapeError, SizeGuardError
from .tensor import Shape, mode_n_matrix_product

logger = logging.getLogger(__name__)


@runtime_checkable
class OperatorHandle(Protocol):
    """Par (apply, apply_transpose) aceito por todos os solvers."""

    @property
    def shape(self) -> Shape: ...

    def apply(self, X: np.ndarray) -> np.ndarray: ...

    def apply_transpose(self, X: np.ndarray) -> np.ndarray: ...


def _frozen_matrix(A, index: int) -> np.ndarray:
    matrix = np.array(A, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"Fator A_{index} deve ser quadrado, recebido {matrix.shape}", mode=index)
    if matrix.shape[0] < 1:
        raise ShapeError(f"Fator A_{index} vazio", mode=index)
    if not np.all(np.isfinite(matrix)):
        raise ValueError(f"Fator A_{index} contém valores não finitos")
    matrix.flags.writeable = False
    return matrix


@dataclass(frozen=True)
class SylvesterOperator:
    """
    Operador definido pelos fatores A₁, ..., A_N (A_n de ordem I_n).

    Attributes:
        factors: Matrizes quadradas, somente leitura
    """
    factors: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.factors) < 1:
            raise ShapeError("O operador precisa de ao menos um fator")
        frozen = tuple(_frozen_matrix(A, n) for n, A in enumerate(self.factors, 1))
        object.__setattr__(self, 'factors', frozen)

    @classmethod
    def from_factors(cls, factors: Sequence) -> 'SylvesterOperator':
        return cls(tuple(factors))

    @property
    def shape(self) -> Shape:
        return tuple(A.shape[0] for A in self.factors)

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def size(self) -> int:
        """M = I₁ · ... · I_N."""
        return int(np.prod(self.shape))

    def _check(self, X: np.ndarray):
        if X.shape != self.shape:
            raise ShapeError(f"Tensor {X.shape} incompatível com o operador {self.shape}")

    def apply(self, X: np.ndarray) -> np.ndarray:
        """L(X) = Σ_n X ×_n A_n."""
        self._check(X)
        result = np.zeros(self.shape)
        for n, A in enumerate(self.factors, 1):
            result += mode_n_matrix_product(X, A, n)
        return result

    def apply_transpose(self, X: np.ndarray) -> np.ndarray:
        """Lᵀ(X) = Σ_n X ×_n A_nᵀ."""
        self._check(X)
        result = np.zeros(self.shape)
        for n, A in enumerate(self.factors, 1):
            result += mode_n_matrix_product(X, A.T, n)
        return result

    def dual(self) -> 'SylvesterOperator':
        """Operador com fatores transpostos."""
        return SylvesterOperator(tuple(A.T for A in self.factors))


def apply(op: OperatorHandle, X: np.ndarray) -> np.ndarray:
    return op.apply(X)


def apply_transpose(op: OperatorHandle, X: np.ndarray) -> np.ndarray:
    return op.apply_transpose(X)


def assemble_kronecker(op: SylvesterOperator, max_size: int = KRONECKER_MAX_SIZE) -> np.ndarray:
    """
    Monta A = Σ_n E ⊗ ... ⊗ A_n ⊗ ... ⊗ E (A_n na posição N+1-n a partir da esquerda).

    vec(L(X)) = A · vec(X) com vec coluna-maior.

    Args:
        op: Operador de Sylvester
        max_size: Maior M aceito

    Returns:
        Matriz densa M × M

    Raises:
        SizeGuardError: Se M > max_size
    """
    M = op.size
    if M > max_size:
        raise SizeGuardError(f"Montagem densa recusada: M={M} > {max_size}")

    identities = [np.eye(I) for I in op.shape]
    total = np.zeros((M, M))
    for n, A in enumerate(op.factors):
        terms = list(identities)
        terms[n] = A
        # ordem de Kronecker: modo N à esquerda, modo 1 à direita
        total += reduce(np.kron, reversed(terms))
    logger.debug("Matriz de Kronecker montada: %d x %d", M, M)
    return total
