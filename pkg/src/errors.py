# -*- coding: utf-8 -*-
"""
Exceções do SYLTEN.

Erros de entrada herdam de ValueError para que o CLI os trate como os
demais erros de uso.
"""

from typing import Optional


class SyltenError(Exception):
    """Base de todas as exceções do projeto."""


class ShapeError(SyltenError, ValueError):
    """Dimensões incompatíveis entre tensores, matrizes ou operadores."""

    def __init__(self, message: str, mode: Optional[int] = None):
        if mode is not None:
            message = f"{message} (modo {mode})"
        super().__init__(message)
        self.mode = mode


class ConfigurationError(SyltenError, ValueError):
    """Configuração inválida (tolerâncias, critério de parada, parâmetros)."""


class SizeGuardError(SyltenError, ValueError):
    """Montagem densa recusada: M acima do limite configurado."""


class BreakdownError(SyltenError):
    """Anulação de um produto interno que sustenta uma recorrência."""

    def __init__(self, message: str, step: int = 0):
        super().__init__(message)
        self.step = step


class DegenerateSeedError(BreakdownError):
    """L anula a direção do resíduo: ⟨L(V₁), L(V₁)⟩ ≈ 0."""


class LanczosBreakdown(BreakdownError):
    """
    ⟨W̄_{j+1}, L(V̄_{j+1})⟩ ≈ 0 no passo j.

    Attributes:
        step: Passo j em que ocorreu
        state: LanczosState parcial (T_j completo, sem V_{j+1})
    """

    def __init__(self, message: str, step: int, state=None):
        super().__init__(message, step)
        self.state = state


class SeriousBreakdown(BreakdownError):
    """Pivô quase nulo na LU sem pivoteamento de T_m."""

    def __init__(self, message: str, pivot_index: int):
        super().__init__(message, pivot_index)
        self.pivot_index = pivot_index


class PreconditionerSingularError(SyltenError):
    """Algum Q_i ajustado é numericamente singular."""

    def __init__(self, index: int, pivot: float):
        super().__init__(f"Q_{index} numericamente singular (pivô {pivot:.3e})")
        self.index = index
        self.pivot = pivot
