import pytest

from src.models.graph import CoarseGraining, Graph
from src.models.tree_decomposition import NodeKind, TdNode, TreeDecomposition
from src.services.decomposition_service import (base_case_size, compress, compute_td, contract_redundant,
                                                heuristic_td, norm_p, normalize, preimage, td_from_elimination,
                                                td_stats, to_nice_form, validate_td, width_bound)
from tests.conftest import random_graph, random_planar_graph


def _random_order(n, rng):
    return [int(v) for v in rng.permutation(n)]


def test_base_case_size():
    assert base_case_size() == 72


def test_star_fixture_is_valid_and_nice(star, star_td):
    diag = validate_td(star, star_td)
    assert diag.valid, diag.summary()
    assert star_td.is_nice()
    stats = td_stats(star_td)
    assert stats['nodes'] == 7
    assert stats['width'] == 1
    assert stats['norm_1'] == 9
    assert stats['norm_2_sq'] == 15
    assert stats['kinds'] == {'introduce': 3, 'forget': 3, 'merge': 1}
    assert norm_p(star_td, float('inf')) == 2.0


def test_validate_reports_each_failure(star):
    missing = TreeDecomposition([TdNode({0, 1}), TdNode({1, 2}, [0])], 1)
    diag = validate_td(star, missing)
    assert diag.missing_vertices == [3]
    assert (1, 3) in diag.uncovered_edges

    # B aparece en dos ramas separadas por una bolsa sin B
    broken = TreeDecomposition([TdNode({0, 1}), TdNode({0}, [0]), TdNode({0, 1, 2, 3}, [1])], 2)
    assert validate_td(star, broken).disconnected_vertices == [1]

    bad_kind = TreeDecomposition([TdNode({0, 1, 2, 3}, [], NodeKind.INTRODUCE),
                                  TdNode({0, 1, 2, 3}, [0], NodeKind.FORGET)], 1)
    assert validate_td(star, bad_kind).kind_errors


def test_contract_redundant_removes_nested_bags(star):
    t = TreeDecomposition([TdNode({0, 1}), TdNode({1}, [0]), TdNode({1, 2, 3}, [1])], 2)
    out = contract_redundant(t)
    assert validate_td(star, out).valid
    assert len(out) == 2
    assert all(not (a.bag <= b.bag) for a in out.nodes for b in out.nodes if a is not b)


@pytest.mark.parametrize("n", [5, 8, 12])
def test_normalize_random_elimination_tds(rng, n):
    for _ in range(15):
        g = random_graph(n, 0.35, rng)
        t = td_from_elimination(g, _random_order(n, rng))
        assert validate_td(g, t).valid
        nice = normalize(t)
        diag = validate_td(g, nice)
        assert diag.valid, diag.summary()
        assert nice.is_nice()
        assert nice.bag(nice.root) == frozenset()
        assert nice.width + 1 <= 2 * (max(t.width, 1) + 1)


def test_to_nice_form_keeps_width(rng):
    g = random_graph(9, 0.4, rng)
    t = td_from_elimination(g, _random_order(9, rng))
    nice = to_nice_form(contract_redundant(t))
    assert validate_td(g, nice).valid
    assert nice.width == t.width


def test_compress_respects_limit(rng):
    g = Graph.path(30)
    t = td_from_elimination(g, list(range(30)))
    out = compress(t, 1)
    assert validate_td(g, out).valid
    assert max(len(node.bag) for node in out.nodes) <= 4
    assert len(out) < len(t)


@pytest.mark.parametrize("side", [8, 16, 24])
def test_compress_node_count_on_grids(side):
    g = Graph.grid_graph(side)
    t = compute_td(g)
    out = compress(t, t.width)
    assert validate_td(g, out).valid
    assert max(len(node.bag) for node in out.nodes) <= 2 * (t.width + 1)
    assert len(out) <= 4 * g.n / t.width


@pytest.mark.parametrize("graph", [
    Graph.grid_graph(12),
    Graph.grid_graph(3, 40),
    Graph(144, Graph.grid_graph(12).edges()),
    Graph.cycle(150),
    Graph.path(200),
    Graph.star(90),
])
def test_compute_td_valid_and_bounded(graph):
    t = compute_td(graph)
    diag = validate_td(graph, t)
    assert diag.valid, diag.summary()
    assert t.is_nice()
    assert t.bag(t.root) == frozenset()
    assert t.width + 1 <= width_bound(graph.n, 0)


def test_compute_td_with_root_boundary(rng):
    g = random_planar_graph(30, rng)
    u = frozenset({0, 5, 17})
    t = compute_td(g, u)
    assert validate_td(g, t).valid
    assert t.bag(t.root) == u


def test_compute_td_rejects_non_planar():
    with pytest.raises(ValueError):
        compute_td(Graph.complete(5))


def test_width_bound_below_base_case():
    assert width_bound(10, 3) == 72 + 3
    assert width_bound(10_000, 0) > 72


@pytest.mark.parametrize("method", ['trivial', 'planar', 'min_degree', 'min_fill'])
def test_heuristic_methods_give_valid_tds(rng, method):
    g = random_planar_graph(16, rng)
    t = heuristic_td(g, method)
    assert validate_td(g, t).valid
    assert validate_td(g, normalize(t)).valid


def test_heuristic_unknown_method(star):
    with pytest.raises(ValueError):
        heuristic_td(star, 'magic')


def test_preimage_through_coarse_graining():
    # Cada vértice de un camino de 4 se duplica; las copias son adyacentes entre sí
    target = Graph.path(4)
    mapping = [0, 0, 1, 1, 2, 2, 3, 3]
    edges = [(0, 1), (2, 3), (4, 5), (6, 7), (1, 2), (3, 4), (5, 6), (0, 3)]
    source = Graph(8, edges)
    cg = CoarseGraining(mapping, 4)
    cg.validate(source, target)
    t = preimage(compute_td(target), cg)
    assert validate_td(source, t).valid
    assert t.width + 1 <= 2 * (compute_td(target).width + 1)


def test_preimage_rejects_map_that_breaks_edges():
    # K4 sobre un destino sin aristas: 0-1 y 0-2 caen en no-aristas
    target = Graph(3, [])
    source = Graph.complete(4)
    cg = CoarseGraining((0, 1, 2, 2), 3)
    with pytest.raises(ValueError):
        preimage(compute_td(target), cg, source, target)
    with pytest.raises(ValueError):
        preimage(compute_td(target), cg, source)
    # con un mapa válido la preimagen es una TD de G'
    t = preimage(compute_td(target), CoarseGraining((0, 0, 1, 2), 3), Graph(4, [(0, 1)]), target)
    assert validate_td(Graph(4, [(0, 1)]), t).valid


def test_coarse_graining_rejects_broken_edges():
    cg = CoarseGraining([0, 1, 2], 3)
    with pytest.raises(ValueError):
        cg.validate(Graph(3, [(0, 2)]), Graph.path(3))
    with pytest.raises(ValueError):
        CoarseGraining([0, 0, 0], 2, r=2)
