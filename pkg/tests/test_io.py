import numpy as np
import pytest

from src.models.graph import Graph
from src.models.pauli import GateKind
from src.models.tree_decomposition import TdNode, TreeDecomposition
from src.services import io_service
from src.services.decomposition_service import compute_td, validate_td


def test_graph_from_dict():
    g = io_service.graph_from_dict({"n": 3, "edges": [[0, 1], [1, 2]]})
    assert g.n == 3 and g.num_edges() == 2
    grid = io_service.graph_from_dict({"grid": [2, 3]})
    assert grid.n == 6 and grid.num_edges() == 7
    with pytest.raises(ValueError):
        io_service.graph_from_dict({"edges": [[0, 1]]})


def test_graph_json_file(tmp_path):
    path = tmp_path / 'g.json'
    io_service.save_graph(Graph.cycle(5), str(path))
    g = io_service.load_graph(str(path))
    assert g.n == 5 and g.num_edges() == 5
    bad = tmp_path / 'bad.json'
    bad.write_text('{"n": 3,', encoding='utf-8')
    with pytest.raises(ValueError):
        io_service.load_graph(str(bad))


def test_edge_list():
    g = io_service.parse_edge_list("# estrella\n4\n0 1\n1 2  # centro\n1 3\n")
    assert g.n == 4
    assert g.has_edge(1, 3) and not g.has_edge(0, 2)
    with pytest.raises(ValueError):
        io_service.parse_edge_list("3\n0 1 2\n")
    with pytest.raises(ValueError):
        io_service.parse_edge_list("# nada\n")


def test_postselect_from_dict():
    assert io_service.postselect_from_dict({"3": 1, "0": 0}) == {3: 1, 0: 0}
    assert io_service.postselect_from_dict({"postselect": {"2": 1}}) == {2: 1}


def test_circuit_from_dict():
    c = io_service.circuit_from_dict({
        "n": 4, "layout_grid": [2, 2],
        "gates": [{"g": "H", "q": [0]}, {"g": "C1", "q": [3], "k": 5}, {"g": "CZ", "q": [0, 1]}],
    })
    assert c.is_native
    assert any(g.kind == GateKind.CZ for g in c.gates)
    with pytest.raises(ValueError):
        io_service.circuit_from_dict({"n": 5, "layout_grid": [2, 2], "gates": []})
    with pytest.raises(ValueError):
        io_service.circuit_from_dict({"n": 2, "layout_edges": [[0, 1]], "gates": [{"g": "H"}]})


def test_matrix_text():
    m = io_service.parse_matrix("3 3\n010\n1 0 1\n010\n")
    assert np.array_equal(m.to_array(), [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    assert io_service.format_matrix(m) == "3 3\n010\n101\n010\n"
    for text in ("", "3\n010\n", "2 2\n01\n", "2 2\n01\n12\n", "2 2\n01\n100\n"):
        with pytest.raises(ValueError):
            io_service.parse_matrix(text)


def test_vector_text():
    assert str(io_service.parse_vector("10 11\n0\n")) == '10110'


def test_pace_format():
    t = TreeDecomposition([TdNode({0, 1}, [1]), TdNode({1, 2})], 0)
    text = io_service.format_td(t, 3)
    assert text == "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n"
    parsed, n = io_service.parse_td(text)
    assert n == 3
    assert [node.bag for node in parsed.nodes] == [frozenset({0, 1}), frozenset({1, 2})]
    assert validate_td(Graph.path(3), parsed).valid


def test_pace_preserves_validity(tmp_path):
    g = Graph.grid_graph(4)
    path = tmp_path / 'grid.td'
    io_service.save_td(compute_td(g), g.n, str(path))
    parsed, n = io_service.load_td(str(path))
    assert n == 16
    assert validate_td(g, parsed).valid


@pytest.mark.parametrize("text", [
    "b 1 1 2\n",                              # sin cabecera
    "s tw 1 2 2\nb 1 1 2\n",                  # cabecera inválida
    "s td 2 2 3\nb 1 1 2\n",                  # falta una bolsa
    "s td 3 2 3\nb 1 1\nb 2 2\nb 3 3\n1 2\n",  # bosque
])
def test_invalid_pace(text):
    with pytest.raises(ValueError):
        io_service.parse_td(text)
