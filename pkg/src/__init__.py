# -*- coding: utf-8 -*-
"""
SYLTEN: solvers de Krylov para equações tensoriais de Sylvester.

X ×₁ A₁ + ... + X ×_N A_N = D resolvido por TLB, TBiCOR e TCORS, com
pré-condicionamento por produto de Kronecker mais próximo.
"""

from .errors import (
    BreakdownError,
    ConfigurationError,
    DegenerateSeedError,
    LanczosBreakdown,
    PreconditionerSingularError,
    SeriousBreakdown,
    ShapeError,
    SizeGuardError,
    SyltenError,
)
from .tensor import (
    boxtimes,
    fold,
    inner,
    lincomb,
    mode_n_matrix_product,
    mode_n_vector_product,
    norm,
    unfold,
    unvectorize,
    vectorize,
)
from .sylvester import OperatorHandle, SylvesterOperator, apply, apply_transpose, assemble_kronecker
from .lanczos import LanczosProcess, TridiagonalMatrix, lanczos_procedure, lu_tridiagonal
from .solvers import (
    SolveConfig,
    SolveReport,
    SolveStatus,
    StoppingRule,
    solve_tbicor,
    solve_tcors,
    solve_tlb,
)
from .optimize import OptimizerConfig, nelder_mead
from .preconditioner import (
    SOLVERS,
    NkpParams,
    NkpPreconditioner,
    PreconditionedOperator,
    balance_params,
    fit_nkp,
    nkp_objective,
    solve_ptbicor,
    solve_ptcors,
    solve_ptlb,
)
from .gallery import ProblemInstance, build_example, convdiff_instance, random_consistent_instance
from .bench import BenchConfig, BenchRecord, emit_summary, run_benchmark

__all__ = [
    # Tensores
    'boxtimes',
    'fold',
    'inner',
    'lincomb',
    'mode_n_matrix_product',
    'mode_n_vector_product',
    'norm',
    'unfold',
    'unvectorize',
    'vectorize',
    # Operador
    'OperatorHandle',
    'SylvesterOperator',
    'apply',
    'apply_transpose',
    'assemble_kronecker',
    # Lanczos
    'LanczosProcess',
    'TridiagonalMatrix',
    'lanczos_procedure',
    'lu_tridiagonal',
    # Solvers
    'SOLVERS',
    'SolveConfig',
    'SolveReport',
    'SolveStatus',
    'StoppingRule',
    'solve_tlb',
    'solve_tbicor',
    'solve_tcors',
    'solve_ptlb',
    'solve_ptbicor',
    'solve_ptcors',
    # Pré-condicionador
    'OptimizerConfig',
    'nelder_mead',
    'NkpParams',
    'NkpPreconditioner',
    'PreconditionedOperator',
    'balance_params',
    'fit_nkp',
    'nkp_objective',
    # Problemas e benchmark
    'ProblemInstance',
    'build_example',
    'convdiff_instance',
    'random_consistent_instance',
    'BenchConfig',
    'BenchRecord',
    'emit_summary',
    'run_benchmark',
    # Erros
    'SyltenError',
    'ShapeError',
    'ConfigurationError',
    'SizeGuardError',
    'BreakdownError',
    'DegenerateSeedError',
    'LanczosBreakdown',
    'SeriousBreakdown',
    'PreconditionerSingularError',
]
