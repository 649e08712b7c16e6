"""
Pruebas estadísticas para comparar muestras con una distribución de
referencia (o dos muestras entre sí).
"""
import logging
from collections import Counter

import numpy as np
from scipy import stats

logger = logging.getLogger(__name__)

MIN_EXPECTED = 5


def _key(sample):
    return sample if isinstance(sample, str) else str(sample)


def counts(samples):
    """Conteos por resultado; acepta cadenas '0101' o BitVector."""
    if isinstance(samples, dict):
        return Counter({_key(k): int(v) for k, v in samples.items()})
    return Counter(_key(s) for s in samples)


def empirical(samples):
    c = counts(samples)
    total = sum(c.values())
    return {k: v / total for k, v in c.items()} if total else {}


def tv_distance(p, q):
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def _pool(observed, expected):
    """Junta en una sola celda las de conteo esperado menor que MIN_EXPECTED."""
    small = expected < MIN_EXPECTED
    if not small.any():
        return observed, expected
    obs = np.append(observed[~small], observed[small].sum())
    exp = np.append(expected[~small], expected[small].sum())
    return obs, exp


def stat_tests(samples, reference):
    """{tv_distance, chi2_p} de las muestras contra la distribución `reference`."""
    total_ref = sum(reference.values())
    if not np.isclose(total_ref, 1.0, atol=1e-6):
        raise ValueError(f"La referencia suma {total_ref}, no 1")
    c = counts(samples)
    n = sum(c.values())
    if n == 0:
        raise ValueError("No hay muestras")
    tv = tv_distance(empirical(c), reference)

    # Resultados imposibles para la referencia
    if any(k not in reference or reference[k] <= 0 for k in c):
        return {"tv_distance": tv, "chi2_p": 0.0}

    keys = sorted(k for k, p in reference.items() if p > 0)
    observed = np.array([c.get(k, 0) for k in keys], dtype=float)
    expected = np.array([reference[k] for k in keys], dtype=float) * n
    observed, expected = _pool(observed, expected)
    if len(observed) < 2:
        return {"tv_distance": tv, "chi2_p": 1.0}
    # renormaliza para que ambas sumas coincidan exactamente
    expected *= observed.sum() / expected.sum()
    p_value = float(stats.chisquare(observed, expected).pvalue)
    return {"tv_distance": tv, "chi2_p": p_value}


def two_sample_test(samples_a, samples_b):
    """Chi-cuadrado de homogeneidad entre dos muestras; celdas raras agrupadas."""
    ca, cb = counts(samples_a), counts(samples_b)
    keys = sorted(set(ca) | set(cb))
    table = np.array([[ca.get(k, 0) for k in keys], [cb.get(k, 0) for k in keys]], dtype=float)
    tv = tv_distance(empirical(ca), empirical(cb))

    totals = table.sum(axis=0)
    expected_min = totals * min(table.sum(axis=1)) / table.sum()
    small = expected_min < MIN_EXPECTED
    if small.any():
        table = np.column_stack([table[:, ~small], table[:, small].sum(axis=1)])
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return {"tv_distance": tv, "chi2_p": 1.0}
    p_value = float(stats.chi2_contingency(table, correction=False)[1])
    return {"tv_distance": tv, "chi2_p": p_value}


def uniform_reference(outcomes):
    outcomes = list(outcomes)
    return {k: 1.0 / len(outcomes) for k in outcomes}
