from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from src.models.gadget import GssInstance
from src.models.graph import CoarseGraining, Graph
from src.models.pauli import Gate, GateKind

# Compuertas que acepta la reducción; el resto se compila antes
NATIVE_KINDS = (GateKind.H, GateKind.S, GateKind.CZ)


@dataclass
class CliffordCircuit:
    """
    Circuito sobre n qubits que parte de |0^n> y mide todo en Z al final.
    Las compuertas de dos qubits solo pueden actuar sobre aristas del layout.
    """
    n: int
    layout: Graph
    gates: List[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.layout.n != self.n:
            raise ValueError(f"Layout de {self.layout.n} vértices para {self.n} qubits")
        for gate in self.gates:
            self._check(gate)

    def _check(self, gate):
        if any(q < 0 or q >= self.n for q in gate.targets):
            raise IndexError(f"Compuerta {gate} fuera de rango (n={self.n})")
        if gate.kind.arity == 2 and not self.layout.has_edge(*gate.targets):
            raise ValueError(f"La compuerta {gate} no actúa sobre una arista del layout")

    def append(self, gate):
        self._check(gate)
        self.gates.append(gate)
        return self

    @property
    def is_native(self):
        return all(g.kind in NATIVE_KINDS for g in self.gates)

    @property
    def depth(self):
        """Profundidad por capas ASAP."""
        level = [0] * self.n
        for gate in self.gates:
            top = max(level[q] for q in gate.targets) + 1
            for q in gate.targets:
                level[q] = top
        return max(level, default=0)

    def count(self, kind):
        return sum(1 for g in self.gates if g.kind == GateKind(kind))


@dataclass
class ReducedInstance:
    """
    Resultado de reducir un circuito a una instancia de estado de grafo.

    `push[j]` es la parte X (sobre los n cables lógicos) del error X que deja
    el gadget del qubit `gadget_qubits[j]`, empujado hasta el final.
    """
    instance: GssInstance
    coarse: CoarseGraining
    flips: np.ndarray
    outputs: Tuple[int, ...]
    gadget_qubits: Tuple[int, ...]
    push: np.ndarray
    depth: int

    @property
    def h(self):
        return len(self.gadget_qubits)

    @property
    def n_total(self):
        return self.instance.graph.n

    @property
    def groups(self):
        return self.coarse.groups
