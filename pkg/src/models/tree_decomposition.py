from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List, Optional


class NodeKind(str, Enum):
    INTRODUCE = 'introduce'
    FORGET = 'forget'
    MERGE = 'merge'


@dataclass
class TdNode:
    bag: FrozenSet[int]
    children: List[int] = field(default_factory=list)
    kind: Optional[NodeKind] = None

    def __post_init__(self):
        self.bag = frozenset(int(v) for v in self.bag)
        self.children = [int(c) for c in self.children]


class TreeDecomposition:
    """Árbol enraizado de bolsas. Los nodos se referencian por índice en `nodes`."""

    def __init__(self, nodes, root):
        self.nodes = list(nodes)
        self.root = int(root)
        if self.nodes and not 0 <= self.root < len(self.nodes):
            raise ValueError(f"Raíz {self.root} fuera de rango ({len(self.nodes)} nodos)")

    @classmethod
    def single_bag(cls, vertices):
        return cls([TdNode(frozenset(vertices))], 0)

    @property
    def width(self):
        return max((len(node.bag) for node in self.nodes), default=0) - 1

    def __len__(self):
        return len(self.nodes)

    def bag(self, i):
        return self.nodes[i].bag

    def children(self, i):
        return self.nodes[i].children

    def post_order(self):
        """Índices en post-orden (hijos antes que padres), sin recursión."""
        order, stack = [], [(self.root, False)]
        while stack:
            i, done = stack.pop()
            if done:
                order.append(i)
                continue
            stack.append((i, True))
            for c in reversed(self.nodes[i].children):
                stack.append((c, False))
        return order

    def parents(self):
        parent = {self.root: None}
        for i in self.post_order():
            for c in self.nodes[i].children:
                parent[c] = i
        return parent

    def is_nice(self):
        return all(node.kind is not None for node in self.nodes)

    def copy(self):
        return TreeDecomposition(
            [TdNode(node.bag, list(node.children), node.kind) for node in self.nodes], self.root)

    def __repr__(self):
        return f"TreeDecomposition(nodes={len(self.nodes)}, width={self.width})"


@dataclass
class TdDiagnostics:
    """Resultado de validar una descomposición; `valid` si no hay fallas."""
    missing_vertices: List[int] = field(default_factory=list)
    uncovered_edges: List[tuple] = field(default_factory=list)
    disconnected_vertices: List[int] = field(default_factory=list)
    kind_errors: List[str] = field(default_factory=list)
    structure_errors: List[str] = field(default_factory=list)
    width: int = -1

    @property
    def valid(self):
        return not (self.missing_vertices or self.uncovered_edges or self.disconnected_vertices
                    or self.kind_errors or self.structure_errors)

    def summary(self):
        if self.valid:
            return f"válida (ancho {self.width})"
        parts = []
        if self.structure_errors:
            parts.append(f"estructura: {self.structure_errors[:3]}")
        if self.missing_vertices:
            parts.append(f"vértices sin bolsa: {self.missing_vertices[:5]}")
        if self.uncovered_edges:
            parts.append(f"aristas sin cubrir: {self.uncovered_edges[:5]}")
        if self.disconnected_vertices:
            parts.append(f"subárbol no conexo para: {self.disconnected_vertices[:5]}")
        if self.kind_errors:
            parts.append(f"tipos: {self.kind_errors[:3]}")
        return '; '.join(parts)
