"""
Especializaciones planares: simulación de grafos planares y de grafos con
coarse-graining planar, y sistemas lineales simétricos sobre F2.
"""
import logging

import numpy as np

from src.models.bits import BitVector
from src.models.gadget import Pattern
from src.models.graph import Graph
from src.models.pauli import Basis
from src.services.correction_service import correct_general
from src.services.decomposition_service import compute_td, preimage
from src.services.gss_service import build_circuit, prepare_td, solve_instance

logger = logging.getLogger(__name__)


def _require_planar(g, what="el grafo"):
    if not g.grid and not g.is_planar():
        raise ValueError(f"{what} no es planar")


def simulate_planar(inst, rng=None):
    g = inst.graph
    _require_planar(g)
    return solve_instance(inst, compute_td(g), rng)


def simulate_coarse(inst, cg, planar_target, rng=None):
    """TD del destino planar, preimagen por el mapa y simulación sobre G'."""
    _require_planar(planar_target, "el grafo destino")
    td = preimage(compute_td(planar_target), cg, inst.graph, planar_target)
    logger.debug(f"Preimagen por coarse-graining (r={cg.r}): ancho {td.width}")
    return solve_instance(inst, td, rng)


def solve_symmetric_f2(system, td=None, rng=None):
    """
    x uniforme con A x = b, o None. Todas las bases en Z; el patrón fija la
    parte X de las ancillas en 0 y la parte Z de los datos en b.
    """
    rng = rng if rng is not None else np.random.default_rng()
    g = Graph.from_adjacency(system.a)
    n = g.n
    circuit = build_circuit(g, prepare_td(g, td))
    bases = [Basis.Z] * n

    pattern = Pattern.free(circuit.n_total)
    pattern.x_part[n:] = 0
    pattern.z_part[:n] = system.b.to_array()

    p = correct_general(circuit, bases, pattern, rng)
    if p is None:
        return None
    x = p.x.take(range(n))
    if system.residual(x).any():
        raise RuntimeError("La solución obtenida no satisface A x = b")
    return x


def solve_planar_f2(system, rng=None):
    g = Graph.from_adjacency(system.a)
    _require_planar(g, "el grafo de A")
    return solve_symmetric_f2(system, compute_td(g), rng)


def brute_force_solutions(system):
    """Todas las soluciones por enumeración (solo para n pequeño)."""
    n = system.a.rows
    if n > 20:
        raise ValueError(f"Enumeración inviable para n={n}")
    out = []
    for mask in range(1 << n):
        x = BitVector.from_array([(mask >> i) & 1 for i in range(n)])
        if not system.residual(x).any():
            out.append(x)
    return out
