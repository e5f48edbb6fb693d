# -*- coding: utf-8 -*-
"""
Benchmark de solvers × problemas.

Executa cada solver pedido sobre cada instância, grava um histórico por
par (problema, solver) e uma tabela-resumo em CSV ou JSON.
"""

import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .constants import (
    CONVDIFF_PARAMETER_SETS,
    CONVDIFF_SIZE,
    DEFAULT_TOL,
    HISTORY_COLUMNS,
    PROBLEM_NAMES,
    SOLVER_NAMES,
    SUMMARY_COLUMNS,
)
from .errors import ConfigurationError, PreconditionerSingularError
from .gallery import ExampleId, ProblemInstance, build_example, convdiff_instance, random_consistent_instance
from .optimize import OptimizerConfig
from .preconditioner import PRECONDITIONED_SOLVERS, SOLVERS
from .solvers import HistoryEntry, SolveConfig
from .utils import thread_cap

logger = logging.getLogger(__name__)

INITIAL_GUESSES = ('zeros', 'ones')


@dataclass
class BenchConfig:
    """
    Configuração do benchmark.

    Attributes:
        problem: poisson3d, convdiff, fdm2d ou random
        solvers: Nomes dos solvers (ordem canônica na saída)
        tol: Limiar do erro relativo
        max_iters: Limite de iterações (None = 10·M)
        v: Difusão (convdiff)
        c: Convecção por modo (convdiff)
        grid: Roda os seis conjuntos (v, c) do experimento de convecção-difusão
        shape: Forma da instância aleatória
        seed: Semente da instância aleatória
        x0: 'zeros' (padrão dos experimentos) ou 'ones'
        out_dir: Diretório de saída
        output_format: 'csv' ou 'json' para o resumo
        strict: Falha também quando o ajuste NKP não converge
        gnuplot_script: Grava scripts de gráfico junto aos históricos
        threads: Workers (None = SYLTEN_THREADS ou 1)
        optimizer: Configuração do Nelder-Mead
    """
    problem: str = 'poisson3d'
    solvers: Tuple[str, ...] = SOLVER_NAMES
    tol: float = DEFAULT_TOL
    max_iters: Optional[int] = None
    v: float = 1.0
    c: Tuple[float, ...] = (1.0, 1.0, 1.0)
    grid: bool = False
    shape: Tuple[int, ...] = (2, 2, 2)
    seed: int = 0
    x0: str = 'zeros'
    out_dir: Path = Path('resultados')
    output_format: str = 'csv'
    strict: bool = False
    gnuplot_script: bool = False
    threads: Optional[int] = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        if self.problem not in PROBLEM_NAMES:
            raise ConfigurationError(
                f"Problema desconhecido: '{self.problem}'. Use: {', '.join(PROBLEM_NAMES)}"
            )
        self.solvers = tuple(self.solvers)
        if not self.solvers:
            raise ConfigurationError("Informe ao menos um solver")
        unknown = [s for s in self.solvers if s not in SOLVERS]
        if unknown:
            raise ConfigurationError(
                f"Solvers desconhecidos: {', '.join(unknown)}. Use: {', '.join(SOLVER_NAMES)}"
            )
        if len(set(self.solvers)) != len(self.solvers):
            raise ConfigurationError("Solvers repetidos")
        if not self.tol > 0:
            raise ConfigurationError(f"tol deve ser > 0, recebido {self.tol}")
        if self.max_iters is not None and self.max_iters < 1:
            raise ConfigurationError(f"max-iters deve ser >= 1, recebido {self.max_iters}")
        if self.output_format not in ('csv', 'json'):
            raise ConfigurationError(f"Formato inválido: '{self.output_format}'")
        if self.x0 not in INITIAL_GUESSES:
            raise ConfigurationError(f"x0 inválido: '{self.x0}'")
        if self.grid and self.problem != 'convdiff':
            raise ConfigurationError("--grid só se aplica a convdiff")
        self.out_dir = Path(self.out_dir)


@dataclass(frozen=True)
class BenchRecord:
    """Uma linha do resumo mais o histórico completo."""
    problem: str
    solver: str
    status: str
    iterations: int
    final_rel_error: float
    wall_ms: float
    history: Tuple[HistoryEntry, ...]
    optimizer_converged: Optional[bool] = None

    @property
    def converged(self) -> bool:
        return self.status == 'converged'

    def summary_row(self) -> Dict:
        return {
            'problem': self.problem,
            'solver': self.solver,
            'status': self.status,
            'iterations': self.iterations,
            'final_rel_error': self.final_rel_error,
            'wall_ms': self.wall_ms,
        }

    def history_frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.history), columns=list(HISTORY_COLUMNS))


@dataclass(frozen=True)
class BenchResult:
    records: Tuple[BenchRecord, ...]
    files: Tuple[Path, ...]

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.records)

    def exit_code(self, strict: bool = False) -> int:
        """0 se tudo convergiu; com strict, exige também ajustes NKP convergidos."""
        if not self.all_converged:
            return 1
        if strict and any(r.optimizer_converged is False for r in self.records):
            return 1
        return 0


def build_instances(cfg: BenchConfig) -> List[ProblemInstance]:
    """Instâncias pedidas pela configuração."""
    if cfg.problem == 'poisson3d':
        return [build_example(ExampleId.POISSON)]
    if cfg.problem == 'fdm2d':
        return [build_example(ExampleId.FDM2D)]
    if cfg.problem == 'random':
        return [random_consistent_instance(cfg.shape, cfg.seed)]
    if cfg.grid:
        return [convdiff_instance(CONVDIFF_SIZE, v, c) for v, c in CONVDIFF_PARAMETER_SETS]
    return [convdiff_instance(CONVDIFF_SIZE, cfg.v, cfg.c)]


def _singular_record(instance: ProblemInstance, solver: str, X0: np.ndarray,
                     exc: PreconditionerSingularError, wall_ms: float) -> BenchRecord:
    """Registro de quebra quando o ajuste NKP produz Q_i singular; só a iteração 0."""
    rel_error = float(np.linalg.norm(X0 - instance.exact) / np.linalg.norm(instance.exact))
    residual = instance.rhs - instance.op.apply(X0)
    rel_residual = float(np.linalg.norm(residual) / np.linalg.norm(instance.rhs))
    logger.warning("%s / %s: %s", instance.label, solver, exc)
    return BenchRecord(
        problem=instance.label,
        solver=solver,
        status='breakdown',
        iterations=0,
        final_rel_error=rel_error,
        wall_ms=wall_ms,
        history=(HistoryEntry(0, rel_error, rel_residual, 0.0),),
        optimizer_converged=None,
    )


def run_single(instance: ProblemInstance, solver: str, cfg: BenchConfig) -> BenchRecord:
    """Roda um solver sobre uma instância e monta o registro."""
    solve_cfg = SolveConfig(tol=cfg.tol, max_iters=cfg.max_iters, exact=instance.exact)
    X0 = instance.initial() if cfg.x0 == 'zeros' else np.ones(instance.shape)
    function = SOLVERS[solver]

    start = time.perf_counter()
    try:
        if solver in PRECONDITIONED_SOLVERS:
            report = function(instance.op, instance.rhs, X0, solve_cfg, optcfg=cfg.optimizer)
        else:
            report = function(instance.op, instance.rhs, X0, solve_cfg)
    except PreconditionerSingularError as exc:
        return _singular_record(instance, solver, X0, exc, 1000.0 * (time.perf_counter() - start))
    wall_ms = 1000.0 * (time.perf_counter() - start)

    optimizer_converged = None
    if report.preconditioner is not None:
        optimizer_converged = report.preconditioner.optimizer_converged

    logger.info("%s / %s: %s, %d iterações, erro %.3e",
                instance.label, solver, report.status.value, report.iterations, report.final_rel_error)
    return BenchRecord(
        problem=instance.label,
        solver=solver,
        status=report.status.value,
        iterations=report.iterations,
        final_rel_error=report.final_rel_error,
        wall_ms=wall_ms,
        history=report.history,
        optimizer_converged=optimizer_converged,
    )


def sort_records(records: Sequence[BenchRecord]) -> List[BenchRecord]:
    """Ordena por (problema, posição canônica do solver)."""
    return sorted(records, key=lambda r: (r.problem, SOLVER_NAMES.index(r.solver)))


def history_path(out_dir: Path, record: BenchRecord) -> Path:
    return Path(out_dir) / 'history' / f'{record.problem}__{record.solver}.csv'


def write_history(record: BenchRecord, path: Path) -> Path:
    """Grava iter, rel_error, rel_residual, elapsed_ms."""
    path.parent.mkdir(parents=True, exist_ok=True)
    record.history_frame().to_csv(path, index=False, encoding='utf-8')
    return path


def _json_number(value: float):
    return None if isinstance(value, float) and math.isnan(value) else value


def emit_summary(records: Sequence[BenchRecord], path, output_format: str = 'csv') -> Path:
    """
    Grava o resumo.

    Args:
        records: Registros (uma lista vazia gera CSV só com cabeçalho)
        path: Arquivo de saída
        output_format: 'csv' ou 'json'

    Returns:
        Caminho gravado
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [r.summary_row() for r in records]

    if output_format == 'json':
        payload = {
            'resultados': [{k: _json_number(v) for k, v in row.items()} for row in rows],
        }
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, ensure_ascii=False, indent=2)
    elif output_format == 'csv':
        pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS)).to_csv(path, index=False, encoding='utf-8')
    else:
        raise ConfigurationError(f"Formato inválido: '{output_format}'")

    logger.info("Resumo salvo em %s: %s", output_format.upper(), path)
    return path


def write_gnuplot_script(records: Sequence[BenchRecord], out_dir: Path) -> Path:
    """
    Grava <out>/plot.gp com as curvas de erro relativo.

    Um bloco plot por problema, separados por pause, com caminhos relativos
    ao diretório de saída.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set logscale y",
        "set format y '%.0e'",
        "set xlabel 'iteração'",
        "set ylabel 'erro relativo'",
    ]
    problems = sorted({r.problem for r in records})
    for i, problem in enumerate(problems):
        curves = ", \\\n     ".join(
            f"'{history_path(Path('.'), r).as_posix()}' using 1:2 with linespoints title '{r.solver}'"
            for r in records if r.problem == problem
        )
        if i:
            lines.append("pause -1")
        lines.append(f"set title '{problem}'")
        lines.append(f"plot {curves}")
    lines.append("")

    path = out_dir / 'plot.gp'
    path.write_text("\n".join(lines), encoding='utf-8')
    logger.info("Script gnuplot salvo: %s", path)
    return path


def run_benchmark(cfg: BenchConfig) -> BenchResult:
    """
    Executa o benchmark e grava históricos, resumo e (opcional) scripts.

    Execuções independentes rodam em até thread_cap(cfg.threads) workers;
    as gravações acontecem depois, em ordem determinística.
    """
    instances = build_instances(cfg)
    jobs = [(instance, solver) for instance in instances for solver in cfg.solvers]
    workers = min(thread_cap(cfg.threads), len(jobs))
    logger.info("Benchmark: %d execuções em %d worker(s)", len(jobs), workers)

    if workers <= 1:
        records = [run_single(instance, solver, cfg) for instance, solver in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(lambda job: run_single(job[0], job[1], cfg), jobs))
    records = sort_records(records)

    files = []
    for record in records:
        files.append(write_history(record, history_path(cfg.out_dir, record)))
    files.append(emit_summary(records, cfg.out_dir / f'summary.{cfg.output_format}', cfg.output_format))
    if cfg.gnuplot_script and records:
        files.append(write_gnuplot_script(records, cfg.out_dir))

    return BenchResult(records=tuple(records), files=tuple(files))
