# -*- coding: utf-8 -*-
"""
Álgebra de tensores densos.

Tensores são numpy.ndarray float64 de ordem N >= 1. A vetorização segue a
ordem coluna-maior (primeiro índice varia mais rápido), coerente com a
ordenação de Kronecker E ⊗ ... ⊗ A₁ usada pelo operador de Sylvester.

Os modos são numerados de 1 a N, como na notação matemática.
"""

from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import ShapeError

Shape = Tuple[int, ...]


def check_shape(shape: Iterable[int]) -> Shape:
    """
    Valida uma forma (I₁, ..., I_N).

    Raises:
        ShapeError: Se N < 1 ou alguma dimensão < 1
    """
    dims = tuple(int(d) for d in shape)
    if not dims:
        raise ShapeError("Forma vazia: o tensor precisa de ao menos um modo")
    for n, d in enumerate(dims, 1):
        if d < 1:
            raise ShapeError(f"Dimensão inválida {d}", mode=n)
    return dims


def as_tensor(data) -> np.ndarray:
    """Converte para ndarray float64 e rejeita NaN/Inf."""
    array = np.asarray(data, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise ValueError("Tensor contém valores não finitos")
    return array


def _check_mode(X: np.ndarray, n: int) -> int:
    if not 1 <= n <= X.ndim:
        raise ShapeError(f"Modo fora do intervalo 1..{X.ndim}", mode=n)
    return n - 1


def _check_same_shape(X: np.ndarray, Y: np.ndarray):
    if X.shape != Y.shape:
        raise ShapeError(f"Formas diferentes: {X.shape} e {Y.shape}")


def unfold(X: np.ndarray, n: int) -> np.ndarray:
    """Matricização no modo n: matriz I_n × (M / I_n)."""
    axis = _check_mode(X, n)
    return np.reshape(np.moveaxis(X, axis, 0), (X.shape[axis], -1))


def fold(unfolded: np.ndarray, n: int, shape: Sequence[int]) -> np.ndarray:
    """Inversa de unfold para a forma final `shape`."""
    axis = n - 1
    full_shape = list(shape)
    mode_dim = full_shape.pop(axis)
    full_shape.insert(0, mode_dim)
    return np.moveaxis(np.reshape(unfolded, full_shape), 0, axis)


def mode_n_matrix_product(X: np.ndarray, A: np.ndarray, n: int) -> np.ndarray:
    """
    Produto modo-n X ×_n A.

    (X ×_n A)_{i₁…j…i_N} = Σ_{i_n} x_{i₁…i_N} a_{j i_n}

    Args:
        X: Tensor de ordem N
        A: Matriz J × I_n
        n: Modo (1..N)

    Returns:
        Tensor com a dimensão n trocada por J

    Raises:
        ShapeError: Se A.shape[1] != I_n
    """
    axis = _check_mode(X, n)
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[1] != X.shape[axis]:
        raise ShapeError(
            f"Matriz {A.shape} incompatível com dimensão {X.shape[axis]}", mode=n
        )
    new_shape = list(X.shape)
    new_shape[axis] = A.shape[0]
    return fold(A @ unfold(X, n), n, new_shape)


def mode_n_vector_product(X: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    """
    Produto modo-n com vetor: contrai o modo n, resultado de ordem N-1.

    Para N=1 devolve um ndarray de ordem 0.
    """
    axis = _check_mode(X, n)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != X.shape[axis]:
        raise ShapeError(
            f"Vetor de tamanho {v.shape} incompatível com dimensão {X.shape[axis]}", mode=n
        )
    return np.asarray(np.tensordot(X, v, axes=([axis], [0])))


def inner(X: np.ndarray, Y: np.ndarray) -> float:
    """Produto interno ⟨X, Y⟩ = Σ x·y sobre todos os multi-índices."""
    _check_same_shape(X, Y)
    return float(np.vdot(X, Y))


def norm(X: np.ndarray) -> float:
    """Norma de Frobenius sqrt(⟨X, X⟩)."""
    return float(np.sqrt(max(inner(X, X), 0.0)))


def boxtimes(X: np.ndarray, Y: np.ndarray, level: int = None) -> np.ndarray:
    """
    Produto ⊠ entre fatias frontais (último modo).

    [X ⊠ Y]_{ij} = ⟨X(..., i), Y(..., j)⟩

    Args:
        X: Tensor de ordem N
        Y: Tensor de ordem N com os mesmos N-1 primeiros modos de X
        level: N (padrão) ou N+1; com N+1 os tensores ganham um modo final
            unitário e o resultado é a matriz 1×1 [⟨X, Y⟩]

    Returns:
        Matriz I_N × J_N

    Raises:
        ShapeError: Se os modos iniciais divergirem
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if level is None:
        level = X.ndim
    if X.ndim != Y.ndim or level not in (X.ndim, X.ndim + 1):
        raise ShapeError(f"Ordens incompatíveis para ⊠^({level}): {X.shape}, {Y.shape}")

    if level == X.ndim + 1:
        return np.array([[inner(X, Y)]])
    if X.ndim == 1:
        # fatias de ordem 0: reduz a Xᵀ Y
        if X.shape != Y.shape:
            raise ShapeError(f"Vetores de tamanhos diferentes: {X.shape}, {Y.shape}")
        return np.array([[float(X @ Y)]])
    if X.shape[:-1] != Y.shape[:-1]:
        raise ShapeError(f"Modos iniciais diferentes: {X.shape[:-1]} e {Y.shape[:-1]}")

    lead = int(np.prod(X.shape[:-1]))
    return np.reshape(X, (lead, X.shape[-1]), order='F').T @ np.reshape(
        Y, (lead, Y.shape[-1]), order='F'
    )


def lincomb(alpha: float, X: np.ndarray, beta: float, Y: np.ndarray) -> np.ndarray:
    """αX + βY, entrada a entrada."""
    _check_same_shape(X, Y)
    return alpha * X + beta * Y


def vectorize(X: np.ndarray) -> np.ndarray:
    """vec(X) coluna-maior."""
    return np.reshape(X, -1, order='F')


def unvectorize(x: np.ndarray, shape: Sequence[int]) -> np.ndarray:
    """Inversa de vectorize."""
    shape = check_shape(shape)
    x = np.asarray(x, dtype=np.float64)
    if x.size != int(np.prod(shape)):
        raise ShapeError(f"Vetor de tamanho {x.size} incompatível com forma {shape}")
    return np.reshape(x, shape, order='F')


def stack_last(tensors: Sequence[np.ndarray]) -> np.ndarray:
    """Empilha tensores de ordem N num tensor de ordem N+1 (último modo)."""
    return np.stack(list(tensors), axis=-1)
