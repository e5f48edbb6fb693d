# -*- coding: utf-8 -*-
"""
Testes automatizados do SYLTEN.

Módulos:
    test_tensor / test_sylvester: Produtos n-modo e operador de Sylvester
    test_lanczos / test_solvers: Processo de Lanczos e solvers de Krylov
    test_optimize / test_preconditioner: Nelder-Mead e pré-condicionador NKP
    test_gallery / test_bench: Problemas de teste, benchmark e CLI
    test_integration: Os três experimentos de ponta a ponta
"""
