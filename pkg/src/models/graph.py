from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Tuple

import networkx as nx
import numpy as np

from src.models.bits import BitMatrix


class Graph:
    """
    Grafo simple no dirigido sobre los vértices 0..n-1.

    `grid` guarda (filas, columnas) cuando el grafo es una grilla completa
    con vértice r*cols + c; lo usa el separador rápido.
    """

    def __init__(self, n, edges=(), grid=None):
        self.n = int(n)
        self.adj = [set() for _ in range(self.n)]
        self.grid = grid
        for u, v in edges:
            self.add_edge(u, v)

    # ------------------------------------------------------------------
    # Constructores
    # ------------------------------------------------------------------
    @classmethod
    def from_adjacency(cls, a):
        if not a.is_symmetric() or a.diagonal().any():
            raise ValueError("La matriz de adyacencia debe ser simétrica y con diagonal cero")
        dense = a.to_array()
        rows, cols = np.nonzero(np.triu(dense, 1))
        return cls(a.rows, zip(rows.tolist(), cols.tolist()))

    @classmethod
    def from_networkx(cls, g):
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), [(index[u], index[v]) for u, v in g.edges()])

    @classmethod
    def grid_graph(cls, rows, cols=None):
        cols = rows if cols is None else cols
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return cls(rows * cols, edges, grid=(rows, cols))

    @classmethod
    def path(cls, n):
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n):
        return cls(n, [(i, (i + 1) % n) for i in range(n)] if n > 2 else [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete(cls, n):
        return cls(n, [(u, v) for u in range(n) for v in range(u + 1, n)])

    @classmethod
    def star(cls, leaves):
        """Estrella con centro 0."""
        return cls(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    # ------------------------------------------------------------------
    # Acceso
    # ------------------------------------------------------------------
    def add_edge(self, u, v):
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"Lazo en el vértice {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"Arista ({u}, {v}) fuera de rango (n={self.n})")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def has_edge(self, u, v):
        return v in self.adj[u]

    def neighbors(self, v):
        return self.adj[v]

    def degree(self, v):
        return len(self.adj[v])

    def edges(self):
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def num_edges(self):
        return sum(len(s) for s in self.adj) // 2

    def adjacency(self):
        dense = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges():
            dense[u, v] = dense[v, u] = 1
        return BitMatrix.from_array(dense)

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g

    def induced(self, vertices):
        """Subgrafo inducido: (grafo reetiquetado 0..k-1, lista de vértices originales)."""
        vertices = sorted(vertices)
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u in vertices for v in self.adj[u] if v in index and u < v]
        return Graph(len(vertices), edges), vertices

    def is_planar(self):
        return nx.check_planarity(self.to_networkx())[0]

    def components(self):
        return [sorted(c) for c in nx.connected_components(self.to_networkx())]

    def copy(self):
        return Graph(self.n, self.edges(), grid=self.grid)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges()})"


@dataclass(frozen=True)
class Separation:
    """Partición (A, S, B) sin aristas entre A y B."""
    a: FrozenSet[int]
    s: FrozenSet[int]
    b: FrozenSet[int]

    def check(self, g, vertices=None, alpha=2 / 3, beta=2 * np.sqrt(2)):
        """Lista de violaciones (vacía si la separación es válida)."""
        vertices = set(range(g.n)) if vertices is None else set(vertices)
        n = len(vertices)
        problems = []
        if self.a | self.s | self.b != vertices or len(self.a) + len(self.s) + len(self.b) != n:
            problems.append("A, S, B no particionan los vértices")
        if any(w in self.b for v in self.a for w in g.neighbors(v)):
            problems.append("Hay aristas entre A y B")
        if max(len(self.a), len(self.b)) > alpha * n + 1e-9:
            problems.append(f"Lado desbalanceado: |A|={len(self.a)}, |B|={len(self.b)}, n={n}")
        if len(self.s) > beta * np.sqrt(n) + 1e-9:
            problems.append(f"Separador grande: |S|={len(self.s)} > {beta:.3f}·√{n}")
        return problems


@dataclass
class CoarseGraining:
    """Mapa f: V(G') -> V(G) con |f⁻¹(w)| <= r."""
    mapping: Tuple[int, ...]
    target_n: int
    r: Optional[int] = None
    groups: Dict[int, Tuple[int, ...]] = field(init=False)

    def __post_init__(self):
        self.mapping = tuple(int(w) for w in self.mapping)
        if any(w < 0 or w >= self.target_n for w in self.mapping):
            raise ValueError("El mapa de coarse-graining apunta fuera del grafo destino")
        groups = {}
        for v, w in enumerate(self.mapping):
            groups.setdefault(w, []).append(v)
        self.groups = {w: tuple(vs) for w, vs in groups.items()}
        largest = max((len(vs) for vs in self.groups.values()), default=0)
        if self.r is None:
            self.r = largest
        elif largest > self.r:
            raise ValueError(f"Preimagen de tamaño {largest} supera r={self.r}")

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), n, 1)

    def preimage(self, vertices):
        return sorted(v for w in vertices for v in self.groups.get(w, ()))

    def validate(self, source, target):
        """Cada arista de G' cae dentro de un grupo o sobre una arista de G."""
        if len(self.mapping) != source.n:
            raise ValueError(f"El mapa cubre {len(self.mapping)} vértices y G' tiene {source.n}")
        if target.n != self.target_n:
            raise ValueError(f"Grafo destino con {target.n} vértices, se esperaban {self.target_n}")
        for u, v in source.edges():
            fu, fv = self.mapping[u], self.mapping[v]
            if fu != fv and not target.has_edge(fu, fv):
                raise ValueError(f"La arista ({u}, {v}) no se preserva: ({fu}, {fv}) no es arista del destino")
