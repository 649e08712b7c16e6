"""
Benchmark de los algoritmos de grilla: tiempo de reloj por ensayo, pico de
qubits vivos y pendiente log-log por algoritmo.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd
from scipy import stats

from config import settings
from src.models.planar import GridSpec
from src.services.grid_service import GRID_ALGORITHMS, run_grid

logger = logging.getLogger(__name__)

COLUMNS = ['algo', 'side', 'trial', 'seconds', 'peak_live_qubits']


def parse_sides(text):
    """'2:512:*2' (geométrica), '4:20:+4' (aritmética) o '2,4,8'."""
    text = text.strip()
    if ':' not in text:
        return [int(s) for s in text.split(',') if s.strip()]
    try:
        start, stop, step = text.split(':')
        start, stop = int(start), int(stop)
        op, k = step[0], int(step[1:])
    except (ValueError, IndexError):
        raise ValueError(f"Rango de lados inválido: '{text}' (ej: 2:512:*2)")
    if op not in '*+' or k < (2 if op == '*' else 1) or start < 1:
        raise ValueError(f"Paso inválido en '{text}'")
    sides, side = [], start
    while side <= stop:
        sides.append(side)
        side = side * k if op == '*' else side + k
    return sides


def parse_algos(text):
    if text.strip().lower() == 'all':
        return list(GRID_ALGORITHMS)
    algos = [a.strip().lower() for a in text.split(',') if a.strip()]
    unknown = [a for a in algos if a not in GRID_ALGORITHMS]
    if unknown:
        raise ValueError(f"Algoritmos desconocidos: {', '.join(unknown)}")
    return algos


def _run_trial(algo, side, trial, bases_seq, run_seq):
    bases_rng, run_rng = np.random.default_rng(bases_seq), np.random.default_rng(run_seq)
    spec = GridSpec.random_xy(side, bases_rng)
    run = run_grid(algo, spec, run_rng)
    return {'algo': algo, 'side': side, 'trial': trial, 'seconds': run.seconds, 'peak_live_qubits': run.peak_live}


def bench_grid(sides, algos, trials=None, seed=None, workers=1):
    """Un renglón por (algoritmo, lado, ensayo); cada ensayo con su propia semilla."""
    trials = settings.BENCH_TRIALS if trials is None else int(trials)
    root = np.random.SeedSequence(seed if seed is not None else settings.DEFAULT_SEED)
    jobs = []
    for side, side_seq in zip(sides, root.spawn(len(sides))):
        for trial, trial_seq in enumerate(side_seq.spawn(trials)):
            # mismas bases para todos los algoritmos del mismo (lado, ensayo)
            bases_seq, run_seq = trial_seq.spawn(2)
            for algo in algos:
                jobs.append((algo, side, trial, bases_seq, run_seq))

    logger.info(f"🚀 Benchmark: {len(jobs)} ensayos ({', '.join(algos)}; lados {sides[0]}..{sides[-1]})")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda job: _run_trial(*job), jobs))
    else:
        rows = [_run_trial(*job) for job in jobs]

    df = pd.DataFrame(rows, columns=COLUMNS)
    df = df.sort_values(['algo', 'side', 'trial'], kind='stable').reset_index(drop=True)
    logger.info(f"✅ Benchmark terminado en {df['seconds'].sum():.2f}s acumulados")
    return df


def fit_slopes(df):
    """Pendiente de log(segundos medios) contra log(n = lado²) por algoritmo."""
    slopes = {}
    for algo, group in df.groupby('algo'):
        means = group.groupby('side')['seconds'].mean()
        means = means[means > 0]
        if len(means) < 2:
            continue
        fit = stats.linregress(np.log(means.index.values.astype(float) ** 2), np.log(means.values))
        slopes[algo] = float(fit.slope)
    return slopes


def write_csv(df, path):
    df.to_csv(path, index=False, columns=COLUMNS)
    logger.info(f"✅ CSV escrito en {path}")
