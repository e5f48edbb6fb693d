#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Compara um resumo do benchmark com as iterações de referência.

Cruza as linhas convdiff_* de summary.csv com as contagens de iterações
de referência do experimento de convecção-difusão e verifica se cada
execução cai dentro da faixa aceita para o seu solver:
- ±10 para TLB e TBiCOR
- ±8 para TCORS, PTLB e PTBiCOR
- ±6 para PTCORS

Uso:
    python main.py --problem convdiff --grid --out tabela
    python scripts/compare_reference.py --summary tabela/summary.csv
"""

import argparse
import sys
from pathlib import Path

import pandas as pd

# Permitir importar src/ quando executado como script
sys.path.insert(0, str(Path(__file__).parent.parent))
from src.constants import REFERENCE_BANDS, REFERENCE_ITERATIONS, SOLVER_NAMES
from src.gallery import convdiff_label


def load_csv(filepath: str) -> pd.DataFrame:
    """
    Carrega o resumo do benchmark.

    Raises:
        FileNotFoundError: Se o arquivo não existir
        ValueError: Se o arquivo não puder ser lido ou faltar coluna
    """
    path = Path(filepath)
    if not path.exists():
        raise FileNotFoundError(f"Arquivo não encontrado: {filepath}")

    try:
        df = pd.read_csv(filepath)
    except Exception as e:
        raise ValueError(f"Erro ao ler {filepath}: {e}")

    missing = {'problem', 'solver', 'status', 'iterations'} - set(df.columns)
    if missing:
        raise ValueError(f"Colunas ausentes em {filepath}: {', '.join(sorted(missing))}")
    return df


def reference_table() -> pd.DataFrame:
    """Tabela (problem, solver, reference, band) indexada pelos rótulos do benchmark."""
    rows = []
    for (v, c), counts in REFERENCE_ITERATIONS.items():
        label = convdiff_label(v, c)
        for solver in SOLVER_NAMES:
            rows.append({
                'problem': label,
                'solver': solver,
                'reference': counts[solver],
                'band': REFERENCE_BANDS[solver],
            })
    return pd.DataFrame(rows)


def compare_with_reference(df: pd.DataFrame) -> pd.DataFrame:
    """
    Junta o resumo com a referência.

    Args:
        df: Resumo com problem, solver, status, iterations

    Returns:
        DataFrame com delta = iterations - reference e within_band; linhas
        sem referência são descartadas
    """
    merged = df[['problem', 'solver', 'status', 'iterations']].merge(
        reference_table(), on=['problem', 'solver'], how='inner'
    )
    merged['delta'] = merged['iterations'] - merged['reference']
    merged['within_band'] = (merged['status'] == 'converged') & (merged['delta'].abs() <= merged['band'])
    return merged


def print_report(comparison: pd.DataFrame):
    """
    Imprime o relatório de faixas.

    Args:
        comparison: Saída de compare_with_reference
    """
    print("\n" + "=" * 60)
    print("COMPARAÇÃO COM AS ITERAÇÕES DE REFERÊNCIA")
    print("=" * 60)
    print(f"{'Problema':<26} {'Solver':<8} {'TIN':>4} {'Ref':>4} {'Δ':>4} {'Faixa':>6}  OK")
    print("-" * 60)
    for _, row in comparison.iterrows():
        mark = 'sim' if row['within_band'] else 'NÃO'
        print(f"{row['problem']:<26} {row['solver']:<8} {row['iterations']:>4} "
              f"{row['reference']:>4} {row['delta']:>+4} {'±' + str(row['band']):>6}  {mark}")
    print("-" * 60)
    inside = int(comparison['within_band'].sum())
    print(f"Dentro da faixa: {inside}/{len(comparison)}")
    print("=" * 60 + "\n")


def main(argv=None):
    """Função principal."""
    parser = argparse.ArgumentParser(
        description='Compara o resumo do benchmark com as iterações de referência',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemplo:
    python scripts/compare_reference.py --summary resultados/summary.csv
        """
    )

    parser.add_argument(
        '--summary', '-s',
        required=True,
        help='Arquivo summary.csv gerado por main.py'
    )

    args = parser.parse_args(argv)

    try:
        df = load_csv(args.summary)
        comparison = compare_with_reference(df)

        if len(comparison) == 0:
            raise ValueError("Nenhuma linha convdiff com referência encontrada no resumo")

        print_report(comparison)
        return 0 if comparison['within_band'].all() else 1

    except FileNotFoundError as e:
        print(f"Erro: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"Erro: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"Erro inesperado: {e}", file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
