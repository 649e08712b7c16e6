"""
Fachada del simulador: la usan las rutas HTTP y la CLI. Elige la
descomposición, reparte semillas y lleva contadores de uso.
"""
import logging
import threading

import numpy as np

from config import settings
from src.models.gadget import GssInstance
from src.models.graph import Graph
from src.models.planar import GridSpec
from src.services.bench_service import bench_grid, fit_slopes
from src.services.decomposition_service import default_method, heuristic_td, td_stats
from src.services.grid_service import run_grid
from src.services.gss_service import prepare_td, solve_instance
from src.services.planar_service import solve_symmetric_f2
from src.services.reduction_service import simulate_circuit

logger = logging.getLogger(__name__)


class SimulatorService:
    def __init__(self):
        self.lock = threading.Lock()
        self.stats = {'sample': 0, 'circuit': 0, 'solve': 0, 'grid': 0, 'td': 0, 'bench': 0}
        logger.info(f"⚙️ Simulador listo (Four-Russians={'sí' if settings.FOUR_RUSSIANS else 'no'}, "
                    f"oráculo hasta {settings.ORACLE_MAX_QUBITS} qubits)")

    def _count(self, key):
        with self.lock:
            self.stats[key] += 1

    @staticmethod
    def rng(seed=None):
        return np.random.default_rng(seed if seed is not None else settings.DEFAULT_SEED)

    # ------------------------------------------------------------------
    # Estados de grafo
    # ------------------------------------------------------------------
    def decompose(self, g, method=None):
        """TD nice con raíz vacía según el método elegido, y sus estadísticas."""
        self._count('td')
        method = method or default_method(g)
        td = prepare_td(g, heuristic_td(g, method))
        return td, {'method': method, **td_stats(td)}

    def sample(self, g, bases, postselect=None, method=None, shots=1, seed=None):
        self._count('sample')
        inst = GssInstance(g, bases, postselect or {})
        td, info = self.decompose(g, method)
        rng = self.rng(seed)
        results = [solve_instance(inst, td, rng) for _ in range(int(shots))]
        logger.debug(f"sample: {shots} muestras con TD {info['method']} (ancho {info['width']})")
        return results, info

    # ------------------------------------------------------------------
    # Circuitos, sistemas lineales y grilla
    # ------------------------------------------------------------------
    def sample_circuit(self, circuit, shots=1, seed=None):
        self._count('circuit')
        rng = self.rng(seed)
        return [simulate_circuit(circuit, rng) for _ in range(int(shots))]

    def solve(self, system, seed=None):
        self._count('solve')
        g = Graph.from_adjacency(system.a)
        td = heuristic_td(g, default_method(g))
        return solve_symmetric_f2(system, td, self.rng(seed))

    def grid(self, side, algo, trials=1, seed=None):
        """Una corrida por ensayo con bases X/Y aleatorias."""
        self._count('grid')
        rng = self.rng(seed)
        runs = []
        for _ in range(int(trials)):
            spec = GridSpec.random_xy(int(side), rng)
            runs.append((spec, run_grid(algo, spec, rng)))
        return runs

    def bench(self, sides, algos, trials=None, seed=None, workers=1):
        self._count('bench')
        df = bench_grid(sides, algos, trials, seed, workers)
        return df, fit_slopes(df)


class SimulatorStub:
    """Reemplazo cuando el simulador no pudo iniciarse: todo falla con RuntimeError."""
    stats = {}

    def __getattr__(self, name):
        def _unavailable(*args, **kwargs):
            raise RuntimeError("Simulador no disponible")
        return _unavailable
