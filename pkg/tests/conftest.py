import numpy as np
import pytest
from scipy.spatial import Delaunay

from src.models.graph import Graph
from src.models.tree_decomposition import NodeKind, TdNode, TreeDecomposition


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: corridas largas (estadísticas o grafos grandes)")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_graph(n, p, rng):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def random_planar_graph(n, rng):
    """Subgrafo aleatorio de una grilla 2 x ceil(n/2) recortada a n vértices."""
    cols = (n + 1) // 2
    grid = Graph.grid_graph(2, cols)
    edges = [(u, v) for u, v in grid.edges() if u < n and v < n and rng.random() < 0.7]
    return Graph(n, edges)


def random_triangulation(n, rng):
    """Triangulación de Delaunay de n puntos uniformes en el cuadrado unitario."""
    tri = Delaunay(rng.random((n, 2)))
    edges = {tuple(sorted((int(a), int(b)))) for simplex in tri.simplices
             for a, b in ((simplex[0], simplex[1]), (simplex[1], simplex[2]), (simplex[0], simplex[2]))}
    return Graph(n, sorted(edges))


@pytest.fixture
def star():
    """Estrella de 4 vértices con centro B: A=0, B=1, C=2, D=3."""
    return Graph(4, [(0, 1), (1, 2), (1, 3)])


@pytest.fixture
def star_td():
    """
    Hoja {A,B} -> forget A -> {B}; hoja {B,C} -> forget C -> {B};
    merge {B}; introduce {B,D}; forget hasta la raíz vacía.
    """
    nodes = [
        TdNode({0, 1}, [], NodeKind.INTRODUCE),     # 0
        TdNode({1}, [0], NodeKind.FORGET),          # 1
        TdNode({1, 2}, [], NodeKind.INTRODUCE),     # 2
        TdNode({1}, [2], NodeKind.FORGET),          # 3
        TdNode({1}, [1, 3], NodeKind.MERGE),        # 4
        TdNode({1, 3}, [4], NodeKind.INTRODUCE),    # 5
        TdNode(set(), [5], NodeKind.FORGET),        # 6
    ]
    return TreeDecomposition(nodes, 6)


@pytest.fixture
def client():
    from src import create_app
    app = create_app()
    app.config['TESTING'] = True
    with app.test_client() as c:
        yield c
