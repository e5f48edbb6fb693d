# -*- coding: utf-8 -*-
"""
Utilidades compartilhadas entre módulos do SYLTEN.

Funções pequenas usadas pelos solvers, pelo benchmark e pelos scripts.
"""

import logging
import os
from typing import Optional, Tuple

from .constants import THREADS_ENV_VAR

logger = logging.getLogger(__name__)


def near_zero(value: float, scale: float, tol: float) -> bool:
    """
    Teste de nulidade relativo à escala dos fatores do produto interno.

    Args:
        value: Produto interno calculado
        scale: Produto das normas dos dois fatores
        tol: Tolerância relativa

    Returns:
        True se |value| <= tol * scale (ou value == 0 com escala nula)
    """
    return abs(value) <= tol * scale


def parse_float_list(text: str) -> Tuple[float, ...]:
    """
    Converte '1,2,3' em (1.0, 2.0, 3.0).

    Raises:
        ValueError: Se algum item não for numérico ou a lista for vazia
    """
    items = [item.strip() for item in text.split(',') if item.strip()]
    if not items:
        raise ValueError(f"Lista vazia: '{text}'")
    try:
        return tuple(float(item) for item in items)
    except ValueError:
        raise ValueError(f"Lista numérica inválida: '{text}'") from None


def parse_int_list(text: str) -> Tuple[int, ...]:
    """Converte '2,3,4' em (2, 3, 4); rejeita valores não inteiros."""
    values = parse_float_list(text)
    if any(v != int(v) for v in values):
        raise ValueError(f"Esperados inteiros: '{text}'")
    return tuple(int(v) for v in values)


def thread_cap(override: Optional[int] = None) -> int:
    """
    Número de workers do benchmark.

    Usa o override quando dado; senão lê SYLTEN_THREADS. Valores inválidos
    caem para 1 com aviso.
    """
    if override is not None:
        if override < 1:
            raise ValueError(f"Número de threads deve ser >= 1: {override}")
        return override

    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or not raw.strip():
        return 1
    try:
        value = int(raw)
    except ValueError:
        logger.warning("%s inválido (%r), usando 1", THREADS_ENV_VAR, raw)
        return 1
    if value < 1:
        logger.warning("%s deve ser >= 1 (%d), usando 1", THREADS_ENV_VAR, value)
        return 1
    return value
