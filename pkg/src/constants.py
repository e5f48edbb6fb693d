# -*- coding: utf-8 -*-
"""
Constantes centralizadas do projeto SYLTEN.

Reúne tolerâncias, limites e valores padrão usados pelos solvers, pelo
pré-condicionador e pelo benchmark.
"""

# Critério de parada relativo (erro relativo ou resíduo relativo)
DEFAULT_TOL = 1e-10

# Limiar relativo para considerar nulo um produto interno das recorrências
BREAKDOWN_TOL = 1e-13

# Pivô mínimo da fatoração LU sem pivoteamento de T_m
PIVOT_TOL = 1e-14

# Pivô mínimo (relativo) aceito na fatoração de cada Q_i
SINGULAR_TOL = 1e-14

# Fator do limite padrão de iterações: max_iters = 10 * M
MAX_ITERS_FACTOR = 10

# Maior M aceito na montagem densa da matriz de Kronecker (só oráculo)
KRONECKER_MAX_SIZE = 10_000

# Maior M aceito para instâncias aleatórias
RANDOM_MAX_SIZE = 4096

# Nelder-Mead (coeficientes compatíveis com fminsearch)
NM_REFLECTION = 1.0
NM_EXPANSION = 2.0
NM_CONTRACTION = 0.5
NM_SHRINK = 0.5
NM_XTOL = 1e-10
NM_FTOL = 1e-10
NM_EVALS_PER_PARAM = 2000
NM_NONZERO_STEP = 0.05
NM_ZERO_STEP = 0.00025

# Reinícios do ajuste NKP: no máximo NM_MAX_RESTARTS execuções do Nelder-Mead;
# para quando a melhora relativa de uma execução fica abaixo de NM_RESTART_RTOL
# ou o objetivo cai abaixo de NKP_EXACT_RTOL · ‖A‖_F²
NM_MAX_RESTARTS = 8
NM_RESTART_RTOL = 1e-9
NKP_EXACT_RTOL = 1e-14

# Variável de ambiente que limita o paralelismo do benchmark
THREADS_ENV_VAR = 'SYLTEN_THREADS'

# Solvers na ordem canônica (também é a ordem de emissão dos resultados)
SOLVER_NAMES = ('tlb', 'tbicor', 'tcors', 'ptlb', 'ptbicor', 'ptcors')

# Problemas aceitos pelo benchmark
PROBLEM_NAMES = ('poisson3d', 'convdiff', 'fdm2d', 'random')

# Colunas dos arquivos emitidos (formato fixo)
SUMMARY_COLUMNS = ('problem', 'solver', 'status', 'iterations', 'final_rel_error', 'wall_ms')
HISTORY_COLUMNS = ('iter', 'rel_error', 'rel_residual', 'elapsed_ms')

# Experimento de convecção-difusão: p=10 e os seis conjuntos (v, c)
CONVDIFF_SIZE = 10
CONVDIFF_PARAMETER_SETS = (
    (1.0, (1.0, 1.0, 1.0)),
    (0.1, (1.0, 1.0, 1.0)),
    (0.01, (1.0, 1.0, 1.0)),
    (1.0, (1.0, 2.0, 3.0)),
    (0.1, (1.0, 2.0, 3.0)),
    (0.01, (1.0, 2.0, 3.0)),
)

# Número de iterações de referência do experimento de convecção-difusão,
# indexado por (v, c) e depois por solver
REFERENCE_ITERATIONS = {
    (1.0, (1.0, 1.0, 1.0)): {'tlb': 48, 'tbicor': 48, 'tcors': 32, 'ptlb': 25, 'ptbicor': 24, 'ptcors': 15},
    (0.1, (1.0, 1.0, 1.0)): {'tlb': 57, 'tbicor': 51, 'tcors': 30, 'ptlb': 24, 'ptbicor': 22, 'ptcors': 13},
    (0.01, (1.0, 1.0, 1.0)): {'tlb': 53, 'tbicor': 49, 'tcors': 29, 'ptlb': 24, 'ptbicor': 22, 'ptcors': 14},
    (1.0, (1.0, 2.0, 3.0)): {'tlb': 60, 'tbicor': 59, 'tcors': 33, 'ptlb': 25, 'ptbicor': 25, 'ptcors': 15},
    (0.1, (1.0, 2.0, 3.0)): {'tlb': 53, 'tbicor': 48, 'tcors': 28, 'ptlb': 22, 'ptbicor': 20, 'ptcors': 12},
    (0.01, (1.0, 2.0, 3.0)): {'tlb': 55, 'tbicor': 54, 'tcors': 30, 'ptlb': 29, 'ptbicor': 28, 'ptcors': 16},
}

# Tolerância (em iterações) aceita em torno da referência
REFERENCE_BANDS = {'tlb': 10, 'tbicor': 10, 'tcors': 8, 'ptlb': 8, 'ptbicor': 8, 'ptcors': 6}
