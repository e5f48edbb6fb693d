# -*- coding: utf-8 -*-
"""
Geradores de problemas de teste.

- Poisson 3D: A_n = (1/h²) tridiag(-1, 2, -1)
- Convecção-difusão: difusão (v/h²) tridiag(-1, 2, -1) mais convecção de
  segunda ordem (c/(4h)) com o estêncil (1, 3, -5, 1)
- FDM 2D: diferenças centradas de 5 pontos de
  -Δu + fx·u_x + fy·u_y + g·u no quadrado unitário, Dirichlet homogêneo
- Instâncias aleatórias consistentes para testes

Em todas as instâncias D = L(X*) com X* conhecido.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Callable, Sequence

import numpy as np
from scipy.sparse import diags

from .constants import CONVDIFF_SIZE, RANDOM_MAX_SIZE
from .errors import ConfigurationError
from .sylvester import SylvesterOperator
from .tensor import Shape, check_shape

logger = logging.getLogger(__name__)

Coefficient = Callable[[float, float], float]


class ExampleId(IntEnum):
    POISSON = 1
    CONVDIFF = 2
    FDM2D = 3


class Conditioning(Enum):
    WELL_POSED = 'well_posed'   # fatores estritamente diagonal-dominantes
    RAW = 'raw'                 # fatores aleatórios sem deslocamento


@dataclass(frozen=True)
class ProblemInstance:
    """
    Problema L(X) = D com solução exata conhecida.

    Attributes:
        op: Operador de Sylvester
        rhs: D = L(X*)
        exact: X*
        label: Identificador usado nos arquivos do benchmark
    """
    op: SylvesterOperator
    rhs: np.ndarray
    exact: np.ndarray
    label: str

    @property
    def shape(self) -> Shape:
        return self.op.shape

    def initial(self) -> np.ndarray:
        """X₀ = tensor nulo."""
        return np.zeros(self.op.shape)


def _instance(factors: Sequence[np.ndarray], exact: np.ndarray, label: str) -> ProblemInstance:
    op = SylvesterOperator(tuple(factors))
    return ProblemInstance(op=op, rhs=op.apply(exact), exact=exact, label=label)


def poisson_matrix(p: int, h: float) -> np.ndarray:
    """(1/h²) tridiag(-1, 2, -1) de ordem p."""
    if p < 1 or not h > 0:
        raise ConfigurationError(f"Exige p >= 1 e h > 0 (p={p}, h={h})")
    if p == 1:
        return (1.0 / h ** 2) * np.array([[2.0]])
    return (1.0 / h ** 2) * diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(p, p)).toarray()


def convection_diffusion_matrix(p: int, v: float, c: float) -> np.ndarray:
    """
    (v/h²) tridiag(-1, 2, -1) + (c/(4h)) estêncil, h = 1/(p+1).

    O estêncil de convecção tem subdiagonal 1, diagonal 3, superdiagonal -5
    e segunda superdiagonal 1.
    """
    if p < 4:
        raise ConfigurationError(f"Convecção-difusão exige p >= 4, recebido {p}")
    if not (math.isfinite(v) and math.isfinite(c)):
        raise ConfigurationError(f"Coeficientes não finitos: v={v}, c={c}")
    h = 1.0 / (p + 1)
    diffusion = diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(p, p)).toarray()
    convection = diags([1.0, 3.0, -5.0, 1.0], [-1, 0, 1, 2], shape=(p, p)).toarray()
    return (v / h ** 2) * diffusion + (c / (4.0 * h)) * convection


def _exp_xy(x: float, y: float) -> float:
    return math.exp(x * y)


def _minus_sin_xy(x: float, y: float) -> float:
    return -math.sin(x * y)


def _reaction(x: float, y: float) -> float:
    return y * y - x * x


def fdm2d_matrix(n0: int, fx: Coefficient = _exp_xy, fy: Coefficient = _minus_sin_xy,
                 g: Coefficient = _reaction) -> np.ndarray:
    """
    Discretização de -Δu + fx·u_x + fy·u_y + g·u em malha n0 × n0.

    Nós interiores x_i = i·h, y_j = j·h com h = 1/(n0+1); o índice do nó
    (i, j) é (i-1) + (j-1)·n0 (x varia mais rápido). Os coeficientes são
    avaliados no próprio nó.

    Args:
        n0: Pontos interiores por lado
        fx: Coeficiente de u_x (padrão e^{xy})
        fy: Coeficiente de u_y (padrão -sin(xy))
        g: Coeficiente de reação (padrão y² - x²)

    Returns:
        Matriz n0² × n0²
    """
    if n0 < 1:
        raise ConfigurationError(f"n0 deve ser >= 1, recebido {n0}")
    h = 1.0 / (n0 + 1)
    size = n0 * n0
    A = np.zeros((size, size))
    inv_h2 = 1.0 / h ** 2
    inv_2h = 1.0 / (2.0 * h)

    for j in range(1, n0 + 1):
        for i in range(1, n0 + 1):
            x, y = i * h, j * h
            k = (i - 1) + (j - 1) * n0
            A[k, k] = 4.0 * inv_h2 + g(x, y)
            cx, cy = fx(x, y) * inv_2h, fy(x, y) * inv_2h
            if i > 1:
                A[k, k - 1] = -inv_h2 - cx
            if i < n0:
                A[k, k + 1] = -inv_h2 + cx
            if j > 1:
                A[k, k - n0] = -inv_h2 - cy
            if j < n0:
                A[k, k + n0] = -inv_h2 + cy
    return A


def convdiff_label(v: float, c: Sequence[float]) -> str:
    return f"convdiff_v{v:g}_c{'-'.join(f'{ci:g}' for ci in c)}"


def convdiff_instance(p: int = CONVDIFF_SIZE, v: float = 1.0,
                      c: Sequence[float] = (1.0, 1.0, 1.0)) -> ProblemInstance:
    """Convecção-difusão com A_n = convection_diffusion_matrix(p, v, c_n) e X* = uns."""
    c = tuple(float(ci) for ci in c)
    if not c:
        raise ConfigurationError("Informe ao menos um coeficiente de convecção")
    factors = [convection_diffusion_matrix(p, v, ci) for ci in c]
    return _instance(factors, np.ones((p,) * len(c)), convdiff_label(v, c))


def build_example(example_id: int, **params) -> ProblemInstance:
    """
    Monta um dos três experimentos.

    Args:
        example_id: 1 (Poisson: d=3, p=10, h=1/11), 2 (convecção-difusão:
            p=10, v, c) ou 3 (FDM 2D com fatores 4, 9, 16)
        **params: Substituem os valores padrão da família

    Returns:
        ProblemInstance com X* = tensor de uns

    Raises:
        ValueError: Identificador ou parâmetros inválidos
    """
    example = ExampleId(example_id)

    if example is ExampleId.POISSON:
        unknown = set(params) - {'d', 'p', 'h'}
        if unknown:
            raise ConfigurationError(f"Parâmetros desconhecidos para Poisson: {sorted(unknown)}")
        d = params.get('d', 3)
        p = params.get('p', 10)
        h = params.get('h', 1.0 / (p + 1))
        if d < 1:
            raise ConfigurationError(f"d deve ser >= 1, recebido {d}")
        A = poisson_matrix(p, h)
        return _instance([A] * d, np.ones((p,) * d), 'poisson3d' if d == 3 else f'poisson{d}d')

    if example is ExampleId.CONVDIFF:
        unknown = set(params) - {'p', 'v', 'c'}
        if unknown:
            raise ConfigurationError(f"Parâmetros desconhecidos para convecção-difusão: {sorted(unknown)}")
        return convdiff_instance(params.get('p', CONVDIFF_SIZE), params.get('v', 1.0),
                                 params.get('c', (1.0, 1.0, 1.0)))

    if params:
        raise ConfigurationError("O experimento FDM 2D não aceita parâmetros")
    factors = [fdm2d_matrix(1 + i) for i in (1, 2, 3)]
    shape = tuple(A.shape[0] for A in factors)
    return _instance(factors, np.ones(shape), 'fdm2d')


def random_consistent_instance(shape: Sequence[int], seed: int,
                               conditioning: Conditioning = Conditioning.WELL_POSED) -> ProblemInstance:
    """
    Instância aleatória reprodutível.

    WELL_POSED torna cada A_n estritamente diagonal-dominante com diagonal
    positiva, logo a soma de Kronecker também é.

    Raises:
        ConfigurationError: Se M > RANDOM_MAX_SIZE
    """
    shape = check_shape(shape)
    size = int(np.prod(shape))
    if size > RANDOM_MAX_SIZE:
        raise ConfigurationError(f"Instância aleatória grande demais: M={size} > {RANDOM_MAX_SIZE}")

    rng = np.random.default_rng(seed)
    factors = []
    for I in shape:
        A = rng.uniform(-1.0, 1.0, (I, I))
        if conditioning is Conditioning.WELL_POSED:
            off = np.sum(np.abs(A), axis=1) - np.abs(np.diag(A))
            np.fill_diagonal(A, off + 1.0 + rng.uniform(0.0, 1.0, I))
        factors.append(A)
    exact = rng.standard_normal(shape)
    label = f"random_{'x'.join(str(d) for d in shape)}_s{seed}"
    return _instance(factors, exact, label)
