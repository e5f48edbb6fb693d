# -*- coding: utf-8 -*-
"""
Minimizador simplex de Nelder-Mead (sem derivadas).

Segue o esquema do fminsearch: simplex inicial com passos de 5% (0,025%
para componentes nulas), reflexão, expansão, contração externa/interna e
encolhimento.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .constants import (
    NM_CONTRACTION,
    NM_EVALS_PER_PARAM,
    NM_EXPANSION,
    NM_FTOL,
    NM_NONZERO_STEP,
    NM_REFLECTION,
    NM_SHRINK,
    NM_XTOL,
    NM_ZERO_STEP,
)
from .errors import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass
class OptimizerConfig:
    """
    Parâmetros do Nelder-Mead.

    Attributes:
        reflection: Coeficiente de reflexão (ρ)
        expansion: Coeficiente de expansão (χ)
        contraction: Coeficiente de contração (γ)
        shrink: Coeficiente de encolhimento (σ)
        xtol: Diâmetro máximo do simplex na parada
        ftol: Espalhamento máximo dos valores, relativo a 1 + |f_melhor|
        max_evals: Orçamento de avaliações (None = 2000 · dimensão)
    """
    reflection: float = NM_REFLECTION
    expansion: float = NM_EXPANSION
    contraction: float = NM_CONTRACTION
    shrink: float = NM_SHRINK
    xtol: float = NM_XTOL
    ftol: float = NM_FTOL
    max_evals: Optional[int] = None

    def __post_init__(self):
        if not (self.reflection > 0 and self.expansion > 1 and self.expansion > self.reflection):
            raise ConfigurationError("Exige reflexão > 0 e expansão > max(1, reflexão)")
        if not (0 < self.contraction < 1 and 0 < self.shrink < 1):
            raise ConfigurationError("Contração e encolhimento devem estar em (0, 1)")
        if self.xtol < 0 or self.ftol < 0:
            raise ConfigurationError("Tolerâncias não podem ser negativas")
        if self.max_evals is not None and self.max_evals < 1:
            raise ConfigurationError(f"max_evals deve ser >= 1, recebido {self.max_evals}")

    def budget(self, dim: int) -> int:
        return self.max_evals if self.max_evals is not None else NM_EVALS_PER_PARAM * dim


@dataclass(frozen=True)
class OptimizeResult:
    x: np.ndarray
    fun: float
    evals: int
    iterations: int
    converged: bool


def _initial_simplex(x0: np.ndarray) -> np.ndarray:
    dim = x0.shape[0]
    simplex = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        if x0[i] != 0.0:
            simplex[i + 1, i] = (1.0 + NM_NONZERO_STEP) * x0[i]
        else:
            simplex[i + 1, i] = NM_ZERO_STEP
    return simplex


def nelder_mead(f: Callable[[np.ndarray], float], x0, optcfg: Optional[OptimizerConfig] = None) -> OptimizeResult:
    """
    Minimiza f a partir de x0.

    Para quando o diâmetro do simplex <= xtol e o espalhamento dos valores
    <= ftol·(1 + |f_melhor|), ou quando o orçamento acaba (converged=False).

    Args:
        f: Função escalar de k variáveis
        x0: Ponto inicial
        optcfg: Configuração

    Returns:
        OptimizeResult com o melhor ponto encontrado
    """
    cfg = optcfg or OptimizerConfig()
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    dim = x0.shape[0]
    if dim < 1:
        raise ConfigurationError("Ponto inicial vazio")
    budget = cfg.budget(dim)

    simplex = _initial_simplex(x0)
    values = np.array([f(x) for x in simplex], dtype=np.float64)
    evals = dim + 1
    iterations = 0
    converged = False

    while True:
        order = np.argsort(values, kind='stable')
        simplex, values = simplex[order], values[order]

        diameter = np.max(np.abs(simplex[1:] - simplex[0]))
        spread = np.max(np.abs(values[1:] - values[0]))
        if diameter <= cfg.xtol and spread <= cfg.ftol * (1.0 + abs(values[0])):
            converged = True
            break
        if evals >= budget:
            break
        iterations += 1

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + cfg.reflection * (centroid - worst)
        fr = f(xr)
        evals += 1

        if fr < values[0]:
            xe = centroid + cfg.reflection * cfg.expansion * (centroid - worst)
            fe = f(xe)
            evals += 1
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
            continue

        if fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue

        if fr < values[-1]:
            # contração externa
            xc = centroid + cfg.contraction * cfg.reflection * (centroid - worst)
            fc = f(xc)
            evals += 1
            if fc <= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            # contração interna
            xc = centroid - cfg.contraction * (centroid - worst)
            fc = f(xc)
            evals += 1
            if fc < values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue

        best = simplex[0]
        for i in range(1, dim + 1):
            simplex[i] = best + cfg.shrink * (simplex[i] - best)
            values[i] = f(simplex[i])
        evals += dim

    best_index = int(np.argmin(values))
    if not converged:
        logger.warning("Nelder-Mead parou sem convergir após %d avaliações (f=%.3e)",
                       evals, values[best_index])
    else:
        logger.debug("Nelder-Mead convergiu: %d avaliações, f=%.3e", evals, values[best_index])
    return OptimizeResult(
        x=simplex[best_index].copy(), fun=float(values[best_index]),
        evals=evals, iterations=iterations, converged=converged,
    )
