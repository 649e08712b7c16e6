import numpy as np
import pytest

from src.models.circuit import CliffordCircuit
from src.models.graph import Graph
from src.models.pauli import Gate, GateKind, Pauli
from src.models.tableau import Tableau
from src.services.oracle_service import statevector_oracle
from src.services.reduction_service import (ALIASES, _signature, compile_circuit, compile_gate, random_circuit,
                                            reduce_circuit, simulate_circuit, single_qubit_cliffords)
from src.services.stat_service import stat_tests
from src.services.tableau_service import apply_gates, conjugate_pauli


def _tableau(n, gates):
    return apply_gates(Tableau.identity(n), gates)


def _samples(c, shots, rng):
    return [str(simulate_circuit(c, rng)) for _ in range(shots)]


# ==========================================
# COMPILACIÓN
# ==========================================
def test_single_qubit_cliffords():
    words = single_qubit_cliffords()
    assert len(words) == 24
    assert words[0] == ()
    assert len({_signature(w) for w in words}) == 24
    assert all(set(w) <= {'H', 'S'} for w in words)


@pytest.mark.parametrize("alias, kind", [
    ('X', GateKind.X), ('Y', GateKind.Y), ('Z', GateKind.Z),
    ('SDG', GateKind.SDG), ('YB', GateKind.Y_BASIS_CHANGE),
])
def test_aliases_match_gate_tableaus(alias, kind):
    assert alias in ALIASES
    assert _tableau(1, compile_gate(alias, [0])) == _tableau(1, [Gate(kind, (0,))])


def test_two_qubit_compilation():
    cnot = compile_gate('CNOT', (0, 1))
    assert _tableau(2, cnot) == _tableau(2, [Gate(GateKind.CNOT, (0, 1))])
    assert _tableau(2, compile_gate('cx', (1, 0))) == _tableau(2, [Gate(GateKind.CNOT, (1, 0))])
    swap = _tableau(2, compile_gate('SWAP', (0, 1)))
    assert conjugate_pauli(swap, Pauli.from_label('XZ')).label() == '+ZX'
    assert conjugate_pauli(swap, Pauli.from_label('YI')).label() == '+IY'


def test_compile_gate_errors():
    with pytest.raises(ValueError):
        compile_gate('C1', [0], index=24)
    with pytest.raises(ValueError):
        compile_gate('C1', [0])
    with pytest.raises(ValueError):
        compile_gate('T', [0])
    with pytest.raises(ValueError):
        compile_gate('H', [0, 1])
    assert len(compile_gate('C1', [0], index=0)) == 0


def test_circuit_validation():
    layout = Graph.path(3)
    with pytest.raises(ValueError):
        compile_circuit(3, layout, [('CZ', (0, 2))])
    with pytest.raises(IndexError):
        compile_circuit(3, layout, [('H', (3,))])
    with pytest.raises(ValueError):
        CliffordCircuit(4, layout)
    c = compile_circuit(3, layout, [('H', (0,)), ('CNOT', (0, 1)), ('S', (2,))])
    assert c.is_native
    assert c.count('H') == 3
    assert c.depth == 3
    with pytest.raises(ValueError):
        c.append(Gate(GateKind.CZ, (0, 2)))


# ==========================================
# REDUCCIÓN
# ==========================================
def test_reduce_requires_native_gates():
    c = CliffordCircuit(2, Graph.path(2), [Gate(GateKind.CNOT, (0, 1))])
    with pytest.raises(ValueError):
        reduce_circuit(c)


def test_empty_circuit_has_no_gadgets():
    reduced = reduce_circuit(CliffordCircuit(3, Graph.path(3)))
    assert reduced.h == 0
    assert reduced.n_total == 3
    assert reduced.outputs == (0, 1, 2)
    assert reduced.instance.graph.num_edges() == 0
    assert not reduced.flips.any()


def test_hadamard_layer_uses_one_gadget_per_wire():
    layout = Graph.path(4)
    c = compile_circuit(4, layout, [('H', (q,)) for q in range(4)])
    reduced = reduce_circuit(c)
    assert reduced.h == 4
    assert reduced.n_total == 8
    assert all(len(group) == 2 for group in reduced.groups.values())


def test_groups_stay_within_depth_bound(rng):
    for layout in (Graph.grid_graph(2, 3), Graph.path(5), Graph.cycle(6)):
        for depth in range(1, 5):
            c = random_circuit(layout, depth, rng)
            reduced = reduce_circuit(c)
            assert max(len(g) for g in reduced.groups.values()) <= c.depth + 4
            reduced.coarse.validate(reduced.instance.graph, layout)
            assert reduced.push.shape == (reduced.h, c.n)


# ==========================================
# MUESTREO DE EXTREMO A EXTREMO
# ==========================================
def test_identity_circuit_outputs_zeros(rng):
    c = CliffordCircuit(3, Graph.path(3))
    assert set(_samples(c, 20, rng)) == {'000'}


@pytest.mark.parametrize("alias, expected", [('X', '010'), ('Y', '010'), ('Z', '000'), ('SX', None)])
def test_single_qubit_aliases(rng, alias, expected):
    c = compile_circuit(3, Graph.path(3), [(alias, (1,))])
    samples = set(_samples(c, 40, rng))
    if expected is None:
        assert samples == {'000', '010'}
    else:
        assert samples == {expected}


def test_hadamard_layer_is_uniform(rng):
    c = compile_circuit(3, Graph.path(3), [('H', (q,)) for q in range(3)])
    reference = statevector_oracle(c)
    assert len(reference) == 8
    samples = _samples(c, 400, rng)
    assert stat_tests(samples, reference)['chi2_p'] > 1e-3


def test_ghz_circuit(rng):
    c = compile_circuit(3, Graph.path(3), [('H', (0,)), ('CNOT', (0, 1)), ('CNOT', (1, 2))])
    samples = _samples(c, 100, rng)
    assert set(samples) == {'000', '111'}


@pytest.mark.slow
@pytest.mark.parametrize("layout, depth", [
    (Graph.grid_graph(2, 3), 3),
    (Graph.path(5), 4),
    (Graph.cycle(6), 2),
    (Graph.grid_graph(2, 4), 4),
])
def test_random_circuits_match_oracle(rng, layout, depth):
    c = random_circuit(layout, depth, rng)
    reference = statevector_oracle(c)
    samples = _samples(c, 400, rng)
    assert set(samples) <= set(reference)
    assert stat_tests(samples, reference)['chi2_p'] > 1e-3


def test_random_circuit_respects_layout(rng):
    layout = Graph.grid_graph(3)
    c = random_circuit(layout, 5, rng)
    assert c.is_native
    assert all(layout.has_edge(*g.targets) for g in c.gates if g.kind == GateKind.CZ)
    assert c.depth <= 5
    assert np.all([q < 9 for g in c.gates for q in g.targets])
