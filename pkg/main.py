#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
SYLTEN — Solvers de Krylov para Equações Tensoriais de Sylvester

Resolve X ×₁ A₁ + X ×₂ A₂ + ... + X ×_N A_N = D com os métodos TLB, TBiCOR
e TCORS e suas versões pré-condicionadas por produto de Kronecker mais
próximo (PTLB, PTBiCOR, PTCORS), registrando o histórico de convergência.

Problemas disponíveis:
- poisson3d: Poisson 3D, p=10, h=1/11
- convdiff: convecção-difusão 10×10×10 com parâmetros (v, c)
- fdm2d: fatores FDM 2D de tamanhos 4, 9 e 16
- random: instância aleatória consistente (forma e semente)

Uso:
    python main.py --problem poisson3d --out resultados
    python main.py --problem convdiff --v 0.1 --c 1,2,3 --solvers tcors,ptcors
"""

import argparse
import logging
import sys
import traceback

from src.bench import BenchConfig, run_benchmark
from src.constants import DEFAULT_TOL, PROBLEM_NAMES, SOLVER_NAMES
from src.errors import SyltenError
from src.utils import parse_float_list, parse_int_list


def setup_logging(verbose: bool = False):
    """
    Configura o sistema de logging.

    Args:
        verbose: Se True, mostra logs de DEBUG (métricas por iteração)
    """
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%H:%M:%S'
    )


def parse_solvers(text: str) -> tuple:
    """Converte 'tlb,ptcors' em ('tlb', 'ptcors'), validando cada nome."""
    names = tuple(item.strip().lower() for item in text.split(',') if item.strip())
    unknown = [name for name in names if name not in SOLVER_NAMES]
    if not names or unknown:
        raise argparse.ArgumentTypeError(
            f"Solvers inválidos: '{text}'. Use: {', '.join(SOLVER_NAMES)}"
        )
    return names


def _list_type(parser_fn):
    def convert(text: str):
        try:
            return parser_fn(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))
    return convert


def build_parser() -> argparse.ArgumentParser:
    """Monta o parser de argumentos da linha de comando."""
    parser = argparse.ArgumentParser(
        description='SYLTEN — Solvers de Krylov para Equações Tensoriais de Sylvester',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemplos:
  python main.py --problem poisson3d --out resultados
  python main.py --problem convdiff --v 1 --c 1,1,1 --solvers tlb,tbicor,tcors
  python main.py --problem convdiff --grid --format json --out tabela
  python main.py --problem fdm2d --gnuplot-script
  python main.py --problem random --shape 2,2,2 --seed 7 --threads 4

Arquivos gerados:
  <out>/summary.csv (ou .json)     problem,solver,status,iterations,final_rel_error,wall_ms
  <out>/history/<problema>__<solver>.csv   iter,rel_error,rel_residual,elapsed_ms
  <out>/plot.gp                     com --gnuplot-script

Código de saída:
  0 quando todas as execuções convergem; 1 caso contrário.
  Com --strict, um ajuste NKP que não convergiu também resulta em 1.

Ambiente:
  SYLTEN_THREADS limita o número de execuções em paralelo (padrão 1).
        """
    )

    parser.add_argument(
        '--problem', '-p',
        choices=PROBLEM_NAMES,
        default='poisson3d',
        help='Problema de teste (padrão: poisson3d)'
    )

    parser.add_argument(
        '--solvers', '-s',
        type=parse_solvers,
        default=SOLVER_NAMES,
        help=f'Lista separada por vírgula (padrão: {",".join(SOLVER_NAMES)})'
    )

    parser.add_argument(
        '--tol',
        type=float,
        default=DEFAULT_TOL,
        help=f'Limiar do erro relativo (padrão: {DEFAULT_TOL:g})'
    )

    parser.add_argument(
        '--max-iters',
        type=int,
        default=None,
        help='Limite de iterações (padrão: 10·M)'
    )

    parser.add_argument(
        '--v',
        type=float,
        default=1.0,
        help='Coeficiente de difusão do convdiff (padrão: 1)'
    )

    parser.add_argument(
        '--c',
        type=_list_type(parse_float_list),
        default=(1.0, 1.0, 1.0),
        help='Coeficientes de convecção do convdiff, ex.: 1,2,3 (padrão: 1,1,1)'
    )

    parser.add_argument(
        '--grid',
        action='store_true',
        help='convdiff: roda os seis conjuntos (v, c) de referência'
    )

    parser.add_argument(
        '--shape',
        type=_list_type(parse_int_list),
        default=(2, 2, 2),
        help='Forma da instância aleatória, ex.: 3,3,3 (padrão: 2,2,2)'
    )

    parser.add_argument(
        '--seed',
        type=int,
        default=0,
        help='Semente da instância aleatória (padrão: 0)'
    )

    parser.add_argument(
        '--x0',
        choices=['zeros', 'ones'],
        default='zeros',
        help='Tensor inicial (padrão: zeros)'
    )

    parser.add_argument(
        '--out', '-o',
        default='resultados',
        help='Diretório de saída (padrão: resultados)'
    )

    parser.add_argument(
        '--format', '-f',
        dest='output_format',
        choices=['csv', 'json'],
        default='csv',
        help='Formato do resumo (padrão: csv)'
    )

    parser.add_argument(
        '--strict',
        action='store_true',
        help='Falha também quando o ajuste do pré-condicionador não converge'
    )

    parser.add_argument(
        '--gnuplot-script',
        action='store_true',
        help='Grava <out>/plot.gp com as curvas de convergência'
    )

    parser.add_argument(
        '--threads',
        type=int,
        default=None,
        help='Execuções em paralelo (sobrepõe SYLTEN_THREADS)'
    )

    parser.add_argument(
        '--verbose', '-v',
        action='store_true',
        help='Mostra logs detalhados'
    )

    return parser


def config_from_args(args: argparse.Namespace) -> BenchConfig:
    """Converte os argumentos em BenchConfig (valida no __post_init__)."""
    return BenchConfig(
        problem=args.problem,
        solvers=args.solvers,
        tol=args.tol,
        max_iters=args.max_iters,
        v=args.v,
        c=args.c,
        grid=args.grid,
        shape=args.shape,
        seed=args.seed,
        x0=args.x0,
        out_dir=args.out,
        output_format=args.output_format,
        strict=args.strict,
        gnuplot_script=args.gnuplot_script,
        threads=args.threads,
    )


def print_summary(result, cfg: BenchConfig):
    """Imprime a tabela final do benchmark."""
    print(f"\n{'='*60}")
    print("RESUMO DO BENCHMARK")
    print(f"{'='*60}")
    print(f"{'Problema':<28} {'Solver':<8} {'Status':<10} {'TIN':>5} {'Erro':>10}")
    print(f"{'-'*60}")
    for r in result.records:
        print(f"{r.problem:<28} {r.solver:<8} {r.status:<10} {r.iterations:>5} {r.final_rel_error:>10.2e}")
    print(f"{'-'*60}")
    converged = sum(1 for r in result.records if r.converged)
    print(f"Convergiram:         {converged}/{len(result.records)}")
    print(f"Diretório de saída:  {cfg.out_dir}")
    print(f"{'='*60}")


def main(argv=None):
    """
    Função principal do script.

    Processa argumentos de linha de comando e executa o benchmark.

    Returns:
        Código de saída (0 = todas as execuções convergiram)
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    # Configurar logging
    setup_logging(args.verbose)

    try:
        cfg = config_from_args(args)
        result = run_benchmark(cfg)
        print_summary(result, cfg)

        code = result.exit_code(strict=cfg.strict)
        if code != 0:
            logging.warning("Benchmark terminou com falhas (código %d)", code)
        return code

    except FileNotFoundError as e:
        logging.error(str(e))
        return 1
    except (ValueError, SyltenError) as e:
        logging.error(str(e))
        return 1
    except OSError as e:
        logging.error("Falha ao gravar resultados: %s", e)
        return 1
    except Exception as e:
        logging.error("Erro inesperado: %s", e)
        if args.verbose:
            traceback.print_exc()
        return 1


if __name__ == '__main__':
    sys.exit(main())
