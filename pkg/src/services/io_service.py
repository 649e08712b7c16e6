"""
Lectura y escritura de los formatos de archivo: grafos (JSON o lista de
aristas), postselecciones, circuitos, matrices de texto y descomposiciones
en formato PACE (.td).
"""
import json
import logging
import os

import networkx as nx
import numpy as np

from src.models.bits import BitMatrix, BitVector
from src.models.graph import Graph
from src.models.tree_decomposition import TdNode, TreeDecomposition
from src.services.reduction_service import compile_circuit

logger = logging.getLogger(__name__)


def _read(path):
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def _load_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as e:
        raise ValueError(f"JSON inválido en {path}: {e}")


# ==========================================
# GRAFOS
# ==========================================
def graph_from_dict(data):
    """{"n": 4, "edges": [[0, 1], ...]} o {"grid": [filas, columnas]}."""
    if 'grid' in data and 'edges' not in data:
        rows, cols = data['grid']
        return Graph.grid_graph(int(rows), int(cols))
    if 'n' not in data:
        raise ValueError("El grafo debe indicar 'n' (o 'grid')")
    return Graph(int(data['n']), [tuple(e) for e in data.get('edges', [])])


def graph_to_dict(g):
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def parse_edge_list(text):
    """Primera línea n; luego una arista 'u v' por línea. '#' inicia comentario."""
    lines = [ln.split('#')[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("Lista de aristas vacía")
    n = int(lines[0])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"Línea de arista inválida: '{ln}'")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, edges)


def load_graph(path):
    if os.path.splitext(path)[1].lower() == '.json':
        return graph_from_dict(_load_json(path))
    return parse_edge_list(_read(path))


def save_graph(g, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(graph_to_dict(g), f, indent=2)


def postselect_from_dict(data):
    """{"3": 1, "5": 0} -> {3: 1, 5: 0}; también acepta {"postselect": {...}}."""
    data = data.get('postselect', data)
    return {int(v): int(b) for v, b in data.items()}


def load_postselect(path):
    return postselect_from_dict(_load_json(path))


# ==========================================
# CIRCUITOS
# ==========================================
def circuit_from_dict(data):
    """{"n", "layout_edges" | "layout_grid", "gates": [{"g": "H", "q": [0]}, ...]}."""
    n = int(data['n'])
    if 'layout_grid' in data:
        rows, cols = data['layout_grid']
        layout = Graph.grid_graph(int(rows), int(cols))
        if layout.n != n:
            raise ValueError(f"Layout de {layout.n} vértices para n={n}")
    else:
        layout = Graph(n, [tuple(e) for e in data.get('layout_edges', [])])
    ops = []
    for gate in data.get('gates', []):
        if 'g' not in gate or 'q' not in gate:
            raise ValueError(f"Compuerta mal formada: {gate}")
        ops.append((gate['g'], gate['q'], gate.get('k')))
    return compile_circuit(n, layout, ops)


def load_circuit(path):
    return circuit_from_dict(_load_json(path))


# ==========================================
# MATRICES Y VECTORES DE TEXTO
# ==========================================
def parse_matrix(text):
    """Primera línea 'filas columnas'; luego una fila de 0/1 por línea."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("Matriz vacía")
    try:
        rows, cols = (int(v) for v in lines[0].split())
    except ValueError:
        raise ValueError(f"Cabecera de matriz inválida: '{lines[0]}'")
    body = lines[1:]
    if len(body) != rows:
        raise ValueError(f"Se esperaban {rows} filas y llegaron {len(body)}")
    dense = np.zeros((rows, cols), dtype=np.uint8)
    for i, ln in enumerate(body):
        ln = ln.replace(' ', '')
        if len(ln) != cols or any(ch not in '01' for ch in ln):
            raise ValueError(f"Fila {i} inválida: '{ln}'")
        dense[i] = [int(ch) for ch in ln]
    return BitMatrix.from_array(dense)


def format_matrix(m):
    rows = [''.join(str(int(b)) for b in row) for row in m.to_array()]
    return '\n'.join([f"{m.rows} {m.cols}"] + rows) + '\n'


def parse_vector(text):
    """Bits 0/1; se ignoran espacios y saltos de línea."""
    return BitVector.from_string(''.join(text.split()))


def load_matrix(path):
    return parse_matrix(_read(path))


def load_vector(path):
    return parse_vector(_read(path))


# ==========================================
# DESCOMPOSICIONES (PACE .td)
# ==========================================
def format_td(t, n_vertices):
    """Bolsas 1-indexadas y vértices 1-indexados, como en PACE."""
    max_bag = max((len(node.bag) for node in t.nodes), default=0)
    lines = [f"s td {len(t.nodes)} {max_bag} {n_vertices}"]
    for i, node in enumerate(t.nodes):
        lines.append(' '.join(['b', str(i + 1)] + [str(v + 1) for v in sorted(node.bag)]))
    for i, node in enumerate(t.nodes):
        for c in node.children:
            lines.append(f"{i + 1} {c + 1}")
    return '\n'.join(lines) + '\n'


def parse_td(text):
    """Devuelve (TreeDecomposition enraizada en la bolsa 1, número de vértices)."""
    header, bags, tree = None, {}, nx.Graph()
    for ln in text.splitlines():
        parts = ln.split()
        if not parts or parts[0] == 'c':
            continue
        if parts[0] == 's':
            if len(parts) != 5 or parts[1] != 'td':
                raise ValueError(f"Cabecera PACE inválida: '{ln}'")
            header = tuple(int(v) for v in parts[2:])
        elif parts[0] == 'b':
            bags[int(parts[1]) - 1] = frozenset(int(v) - 1 for v in parts[2:])
        else:
            tree.add_edge(int(parts[0]) - 1, int(parts[1]) - 1)
    if header is None:
        raise ValueError("Falta la cabecera 's td' del archivo PACE")
    n_bags, _, n_vertices = header
    if sorted(bags) != list(range(n_bags)):
        raise ValueError(f"Se declararon {n_bags} bolsas y llegaron {len(bags)}")
    tree.add_nodes_from(range(n_bags))
    if n_bags and (tree.number_of_edges() != n_bags - 1 or not nx.is_connected(tree)):
        raise ValueError("Las bolsas no forman un árbol")
    nodes = [TdNode(bags[i]) for i in range(n_bags)]
    if n_bags:
        for parent, child in nx.bfs_edges(tree, 0):
            nodes[parent].children.append(child)
    return TreeDecomposition(nodes, 0), n_vertices


def save_td(t, n_vertices, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_td(t, n_vertices))
    logger.info(f"✅ Descomposición escrita en {path} ({len(t.nodes)} bolsas)")


def load_td(path):
    return parse_td(_read(path))
