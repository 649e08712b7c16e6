from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.models.affine import AffineSubspace
from src.models.bits import BitVector
from src.models.pauli import Basis
from src.models.tree_decomposition import NodeKind

ZERO_PROBABILITY = 'zero_probability'


@dataclass
class GssInstance:
    """
    Grafo, base por vértice y resultados a postseleccionar {vértice: bit}.
    Los vértices no postseleccionados forman el conjunto muestreado.
    """
    graph: object
    bases: List[Basis]
    postselect: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.bases = [Basis(b) for b in self.bases]
        if len(self.bases) != self.graph.n:
            raise ValueError(f"Se esperaban {self.graph.n} bases y llegaron {len(self.bases)}")
        self.postselect = {int(v): int(b) for v, b in self.postselect.items()}
        for v, b in self.postselect.items():
            if not 0 <= v < self.graph.n:
                raise IndexError(f"Vértice postseleccionado {v} fuera de rango")
            if b not in (0, 1):
                raise ValueError(f"Resultado postseleccionado inválido para {v}: {b}")

    @property
    def postselected(self):
        return sorted(self.postselect)

    @property
    def sampled(self):
        return [v for v in range(self.graph.n) if v not in self.postselect]

    @property
    def target(self):
        return BitVector.from_array([self.postselect[v] for v in self.postselected])


@dataclass
class Gadget:
    """Una compuerta del circuito de gadgets, ligada al nodo del TD que la produjo."""
    kind: NodeKind
    node: int
    children: Tuple[int, ...] = ()
    introduced: Tuple[int, ...] = ()
    cz_edges: Tuple[Tuple[int, int], ...] = ()
    measured: Tuple[int, ...] = ()
    cnots: Tuple[Tuple[int, int], ...] = ()   # (control en B2, ancilla en B1)


@dataclass
class GadgetCircuit:
    """
    Circuito 𝒞 compilado de un TD nice. Qubits de datos 0..n-1 (uno por
    vértice), ancillas de merge n..n_t-1 en orden de creación.
    """
    n_data: int
    n_ancilla: int
    gadgets: List[Gadget]
    vertex_of: List[int]
    root: int

    @property
    def n_total(self):
        return self.n_data + self.n_ancilla

    @property
    def ancillas(self):
        return list(range(self.n_data, self.n_total))

    @property
    def gate_count(self):
        return sum(len(g.cz_edges) + len(g.cnots) for g in self.gadgets)

    def by_node(self):
        return {g.node: g for g in self.gadgets}


@dataclass
class Pattern:
    """Restricción {0, 1, *} por coordenada; * se guarda como -1."""
    x_part: np.ndarray
    z_part: np.ndarray

    def __post_init__(self):
        self.x_part = np.asarray(self.x_part, dtype=np.int8)
        self.z_part = np.asarray(self.z_part, dtype=np.int8)
        if self.x_part.shape != self.z_part.shape:
            raise ValueError("Las partes X y Z del patrón deben tener la misma longitud")

    @classmethod
    def free(cls, n_total):
        return cls(np.full(n_total, -1), np.full(n_total, -1))

    @classmethod
    def parse(cls, text):
        """'(*1**1,*****)' -> Pattern."""
        body = text.strip().strip('()')
        xs, zs = body.split(',')
        conv = {'*': -1, '0': 0, '1': 1}
        return cls([conv[ch] for ch in xs.strip()], [conv[ch] for ch in zs.strip()])

    @property
    def n(self):
        return len(self.x_part)

    def respects(self, pauli):
        x, z = pauli.x.to_array(), pauli.z.to_array()
        fx, fz = self.x_part >= 0, self.z_part >= 0
        return bool(np.all(x[fx] == self.x_part[fx]) and np.all(z[fz] == self.z_part[fz]))

    def __str__(self):
        conv = {-1: '*', 0: '0', 1: '1'}
        return '(' + ''.join(conv[int(v)] for v in self.x_part) + ',' + \
            ''.join(conv[int(v)] for v in self.z_part) + ')'


@dataclass
class ChainLink:
    """
    Datos de un nodo para la reconstrucción: coordenadas [x; z] sobre
    `labels` (qubits vivos tras la unitaria local), el espacio ya con el patrón
    impuesto, la unitaria local y los qubits que terminan en este nodo.
    """
    kind: NodeKind
    labels: List[int]
    space: AffineSubspace
    local: Optional[object]
    finished: List[int]
    live: List[int]
    restricted: AffineSubspace


@dataclass
class StabilizerChain:
    links: Dict[int, ChainLink]
    root: int


@dataclass
class GssResult:
    outcome: Optional[BitVector]
    flag: Optional[str] = None
    n_total: int = 0

    @property
    def ok(self):
        return self.flag is None

    def to_dict(self):
        return {"outcome": str(self.outcome) if self.outcome is not None else None, "flag": self.flag}
