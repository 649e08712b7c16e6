import numpy as np
import pytest

from config import settings
from src.models.gadget import ZERO_PROBABILITY, GssInstance
from src.models.graph import Graph
from src.models.pauli import parse_bases
from src.models.tree_decomposition import NodeKind, TdNode, TreeDecomposition
from src.services.decomposition_service import heuristic_td, normalize
from src.services.gss_service import (build_circuit, build_pattern, derive_gprime, prepare_td, sample_subroutine,
                                      solve_instance)
from src.services.oracle_service import DenseState, graph_distribution, graph_state_vector
from src.services.stat_service import stat_tests
from tests.conftest import random_graph


def _circuit_vector(c):
    state = DenseState.plus(c.n_total)
    for gadget in c.gadgets:
        for u, w in gadget.cz_edges:
            state.cz(u, w)
        for control, target in gadget.cnots:
            state.cnot(control, target)
    return state


def _samples(inst, shots, rng, td=None):
    out = []
    for _ in range(shots):
        result = solve_instance(inst, td, rng)
        assert result.ok
        out.append(str(result.outcome))
    return out


# ==========================================
# CIRCUITO DE GADGETS
# ==========================================
def test_build_circuit_on_star(star, star_td):
    c = build_circuit(star, star_td)
    assert (c.n_data, c.n_ancilla, c.n_total) == (4, 1, 5)
    assert c.vertex_of == [0, 1, 2, 3, 1]
    by_node = c.by_node()
    assert by_node[1].cz_edges == ((0, 4),)
    assert by_node[3].cz_edges == ((1, 2),)
    # la réplica de B en la rama de B2 controla; la de B1 queda como ancilla
    assert by_node[4].cnots == ((1, 4),)
    assert by_node[4].measured == (4,)
    assert by_node[6].cz_edges == ((1, 3),)
    assert set(by_node[6].measured) == {1, 3}
    assert c.gate_count == 4


def test_build_circuit_requires_nice_td(star, star_td):
    with pytest.raises(ValueError):
        build_circuit(star, TreeDecomposition.single_bag(range(4)))
    not_empty_root = TreeDecomposition([TdNode({0, 1, 2, 3}, [], NodeKind.INTRODUCE)], 0)
    with pytest.raises(ValueError):
        build_circuit(star, not_empty_root)


def test_gprime_matches_circuit_state(star, star_td, rng):
    cases = [(star, star_td)]
    for _ in range(20):
        g = random_graph(6, 0.5, rng)
        cases.append((g, normalize(heuristic_td(g, 'min_degree'))))
    checked = 0
    for g, td in cases:
        c = build_circuit(g, td)
        if c.n_total > settings.ORACLE_MAX_QUBITS:
            continue
        gprime = derive_gprime(c)
        amps = _circuit_vector(c).amps
        assert np.allclose(amps, graph_state_vector(gprime).amps)
        # proyectar las ancillas en |0> deja |G> sobre los datos
        projected = amps[:1 << g.n]
        projected = projected / np.linalg.norm(projected)
        assert abs(np.vdot(graph_state_vector(g).amps, projected)) == pytest.approx(1.0, abs=1e-8)
        # el subgrafo de datos de G' es G
        assert gprime.induced(range(g.n))[0] == g
        checked += 1
    assert checked >= 10


def test_sample_subroutine_and_pattern(star, star_td, rng):
    c = build_circuit(star, star_td)
    inst = GssInstance(star, parse_bases('XXZY'), {2: 1})
    y = sample_subroutine(c, inst.bases, rng)
    assert y.length == c.n_total
    pattern = build_pattern(inst, c, y)
    assert pattern.x_part[4] == y[4]
    assert pattern.x_part[2] == y[2] ^ 1
    assert all(pattern.x_part[q] == -1 for q in (0, 1, 3))
    assert np.all(pattern.z_part == -1)


# ==========================================
# INSTANCIAS
# ==========================================
def test_instance_validation(star):
    with pytest.raises(ValueError):
        GssInstance(star, parse_bases('XX'))
    with pytest.raises(IndexError):
        GssInstance(star, parse_bases('XXXX'), {7: 0})
    with pytest.raises(ValueError):
        GssInstance(star, parse_bases('XXXX'), {0: 2})
    inst = GssInstance(star, parse_bases('XXXX'), {3: 1, 0: 0})
    assert inst.postselected == [0, 3]
    assert inst.sampled == [1, 2]
    assert str(inst.target) == '01'


def test_prepare_td_rejects_invalid(star):
    broken = TreeDecomposition([TdNode({0, 1}), TdNode({2, 3}, [0])], 1)
    with pytest.raises(ValueError):
        prepare_td(star, broken)
    td = prepare_td(star)
    assert td.is_nice() and td.bag(td.root) == frozenset()


def test_zero_probability_flag(rng):
    # |K2> en XZ: el resultado X de 0 siempre coincide con el Z de 1
    inst = GssInstance(Graph.complete(2), parse_bases('XZ'), {0: 0, 1: 1})
    assert graph_distribution(inst) == ({}, 0.0)
    result = solve_instance(inst, rng=rng)
    assert result.flag == ZERO_PROBABILITY
    assert result.outcome is None
    assert result.to_dict() == {"outcome": None, "flag": ZERO_PROBABILITY}


def test_deterministic_postselected_outcome(rng):
    inst = GssInstance(Graph.complete(2), parse_bases('XZ'), {0: 1})
    for _ in range(10):
        assert str(solve_instance(inst, rng=rng).outcome) == '1'


@pytest.mark.parametrize("graph, bases, postselect, method", [
    (Graph(4, [(0, 1), (1, 2), (1, 3)]), 'XXXX', {}, 'trivial'),
    (Graph(4, [(0, 1), (1, 2), (1, 3)]), 'XYZX', {1: 0}, 'min_fill'),
    (Graph.path(4), 'YYZX', {0: 1, 3: 0}, 'planar'),
    (Graph.cycle(5), 'XYXYZ', {4: 1}, 'min_degree'),
    (Graph.cycle(5), 'YXZXY', {}, 'min_fill'),
    (Graph.grid_graph(2, 3), 'XXYYZX', {0: 0}, 'planar'),
])
def test_samples_follow_exact_distribution(rng, graph, bases, postselect, method):
    inst = GssInstance(graph, parse_bases(bases), postselect)
    reference, p_post = graph_distribution(inst)
    assert p_post > 0
    td = heuristic_td(graph, method)
    samples = _samples(inst, 400, rng, td)
    assert set(samples) <= set(reference)
    assert stat_tests(samples, reference)['chi2_p'] > 1e-3


def test_star_fixture_tree_decomposition(star, star_td, rng):
    inst = GssInstance(star, parse_bases('XYXX'), {3: 1})
    reference, _ = graph_distribution(inst)
    samples = _samples(inst, 300, rng, star_td)
    assert stat_tests(samples, reference)['chi2_p'] > 1e-3
