"""
Tres algoritmos para medir el estado de grafo de la grilla ℓ x ℓ: tableau
completo, barrido por columnas y divide-y-vencerás sobre el perímetro.
"""
import logging
import time

import numpy as np

from config import settings
from src.models.bits import BitVector
from src.models.graph import Graph
from src.models.pauli import Gate, GateKind
from src.models.planar import GridRun
from src.models.tableau import Sample, Tableau
from src.services.tableau_service import (apply_basis_changes, apply_gate, graph_state, measure_bases,
                                          measure_z_subset, tensor)

logger = logging.getLogger(__name__)


def _measure_cells(t, labels, cells, spec, outcomes, rng):
    """Cambia de base y mide `cells`; devuelve (tableau, etiquetas restantes)."""
    if not cells:
        return t, labels
    pos = {q: i for i, q in enumerate(labels)}
    targets = [pos[q] for q in cells]
    apply_basis_changes(t, [spec.bases[q] for q in cells], targets)
    result = measure_z_subset(t, targets, Sample(rng))
    outcomes[list(cells)] = result.outcomes.to_array()
    gone = set(cells)
    return result.remaining, [q for q in labels if q not in gone]


# ==========================================
# 1. INGENUO
# ==========================================
def grid_naive(spec, rng):
    g = Graph.grid_graph(spec.side)
    t = graph_state(g)
    result = measure_bases(t, spec.bases, Sample(rng))
    return GridRun(result.outcomes, spec.n, 'naive')


# ==========================================
# 2. BARRIDO POR COLUMNAS
# ==========================================
def grid_sweep(spec, rng):
    side = spec.side
    outcomes = np.zeros(spec.n, dtype=np.uint8)
    t, labels = Tableau.identity(0), []
    peak = 0
    previous = []
    for c in range(side):
        column = [r * side + c for r in range(side)]
        t = tensor(t, Tableau.plus_state(side))
        labels = labels + column
        pos = {q: i for i, q in enumerate(labels)}
        for r in range(side - 1):
            apply_gate(t, Gate(GateKind.CZ, (pos[column[r]], pos[column[r + 1]])))
        for left, right in zip(previous, column):
            apply_gate(t, Gate(GateKind.CZ, (pos[left], pos[right])))
        peak = max(peak, t.n)
        t, labels = _measure_cells(t, labels, previous, spec, outcomes, rng)
        previous = column
    _measure_cells(t, labels, previous, spec, outcomes, rng)
    return GridRun(BitVector.from_array(outcomes), peak, 'sweep')


# ==========================================
# 3. RECURSIVO
# ==========================================
class _Recursion:
    """Mantiene solo las celdas de frontera de cada región (tienen vecinos fuera)."""

    def __init__(self, spec, rng):
        self.spec = spec
        self.rng = rng
        self.side = spec.side
        self.base = max(1, settings.GRID_BASE_SIDE)
        self.outcomes = np.zeros(spec.n, dtype=np.uint8)
        self.peak = 0

    def _inside(self, r, c, region):
        r0, r1, c0, c1 = region
        return r0 <= r < r1 and c0 <= c < c1

    def _is_boundary(self, cell, region):
        r, c = divmod(cell, self.side)
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            rr, cc = r + dr, c + dc
            if 0 <= rr < self.side and 0 <= cc < self.side and not self._inside(rr, cc, region):
                return True
        return False

    def solve(self, region):
        r0, r1, c0, c1 = region
        h, w = r1 - r0, c1 - c0
        if h <= self.base and w <= self.base:
            return self._base_case(region)
        if w >= h:
            mid = c0 + w // 2
            left, right = (r0, r1, c0, mid), (r0, r1, mid, c1)
            seam = [((r, mid - 1), (r, mid)) for r in range(r0, r1)]
        else:
            mid = r0 + h // 2
            left, right = (r0, mid, c0, c1), (mid, r1, c0, c1)
            seam = [((mid - 1, c), (mid, c)) for c in range(c0, c1)]
        t1, l1 = self.solve(left)
        t2, l2 = self.solve(right)
        t, labels = tensor(t1, t2), l1 + l2
        self.peak = max(self.peak, t.n)
        pos = {q: i for i, q in enumerate(labels)}
        for (ra, ca), (rb, cb) in seam:
            apply_gate(t, Gate(GateKind.CZ, (pos[ra * self.side + ca], pos[rb * self.side + cb])))
        done = [q for q in labels if not self._is_boundary(q, region)]
        return _measure_cells(t, labels, done, self.spec, self.outcomes, self.rng)

    def _base_case(self, region):
        r0, r1, c0, c1 = region
        cells = [r * self.side + c for r in range(r0, r1) for c in range(c0, c1)]
        index = {q: i for i, q in enumerate(cells)}
        edges = []
        for q in cells:
            r, c = divmod(q, self.side)
            if c + 1 < c1:
                edges.append((index[q], index[q + 1]))
            if r + 1 < r1:
                edges.append((index[q], index[q + self.side]))
        t = graph_state(Graph(len(cells), edges))
        self.peak = max(self.peak, t.n)
        done = [q for q in cells if not self._is_boundary(q, region)]
        return _measure_cells(t, cells, done, self.spec, self.outcomes, self.rng)


def grid_recursive(spec, rng):
    rec = _Recursion(spec, rng)
    t, labels = rec.solve((0, spec.side, 0, spec.side))
    if labels:
        raise RuntimeError(f"Quedaron {len(labels)} celdas sin medir")
    return GridRun(BitVector.from_array(rec.outcomes), rec.peak, 'recursive')


GRID_ALGORITHMS = {
    'naive': grid_naive,
    'sweep': grid_sweep,
    'recursive': grid_recursive,
}


def run_grid(algo, spec, rng):
    if algo not in GRID_ALGORITHMS:
        raise ValueError(f"Algoritmo de grilla desconocido: '{algo}' (opciones: {', '.join(GRID_ALGORITHMS)})")
    start = time.perf_counter()
    run = GRID_ALGORITHMS[algo](spec, rng)
    run.seconds = time.perf_counter() - start
    logger.debug(f"Grilla {spec.side}x{spec.side} con {algo}: pico de {run.peak_live} qubits vivos")
    return run
