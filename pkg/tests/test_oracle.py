import numpy as np
import pytest

from config import settings
from src.models.circuit import CliffordCircuit
from src.models.gadget import GssInstance
from src.models.graph import Graph
from src.models.pauli import Gate, GateKind, parse_bases
from src.services.oracle_service import (DenseState, circuit_distribution, graph_distribution, graph_state_vector,
                                         statevector_oracle)


def test_cz_on_plus_plus_is_uniform_in_z():
    # (|00> + |01> + |10> - |11>) / 2
    state = graph_state_vector(Graph.complete(2))
    assert np.allclose(state.amps, np.array([1, 1, 1, -1]) / 2)
    dist, p = state.distribution()
    assert p == pytest.approx(1.0)
    assert dist == pytest.approx({'00': 0.25, '01': 0.25, '10': 0.25, '11': 0.25})


def test_keys_are_little_endian():
    state = DenseState.zero(3)
    state.x(0)
    dist, _ = state.distribution()
    assert dist == {'100': 1.0}


def test_y_basis_change_maps_y_eigenstate_to_zero():
    # S|+> es el autoestado +1 de Y
    state = DenseState.plus(1)
    state.phase(0, 1j)
    state.apply(Gate(GateKind.Y_BASIS_CHANGE, (0,)))
    dist, _ = state.distribution()
    assert dist == pytest.approx({'0': 1.0})


def test_star_x_measurement():
    g = Graph(4, [(0, 1), (1, 2), (1, 3)])
    dist = statevector_oracle(g, parse_bases('XZXX'))
    # X0·Z1 estabiliza: el resultado de 0 coincide con el de 1
    assert all(k[0] == k[1] for k in dist)
    assert sum(dist.values()) == pytest.approx(1.0)


def test_postselection_marginalizes():
    inst = GssInstance(Graph.complete(2), parse_bases('XZ'), {1: 1})
    dist, p = graph_distribution(inst)
    assert p == pytest.approx(0.5)
    assert dist == pytest.approx({'1': 1.0})


def test_zero_probability_postselection():
    inst = GssInstance(Graph.complete(2), parse_bases('XZ'), {0: 0, 1: 1})
    assert graph_distribution(inst) == ({}, 0.0)


def test_circuit_distribution_bell():
    c = CliffordCircuit(2, Graph.path(2), [Gate(GateKind.H, (0,)), Gate(GateKind.CNOT, (0, 1))])
    assert circuit_distribution(c) == pytest.approx({'00': 0.5, '11': 0.5})
    assert statevector_oracle(c) == pytest.approx({'00': 0.5, '11': 0.5})


def test_gates_preserve_norm(rng):
    state = DenseState.plus(5)
    kinds = [GateKind.H, GateKind.S, GateKind.SDG, GateKind.X, GateKind.Y, GateKind.Z, GateKind.Y_BASIS_CHANGE]
    for _ in range(50):
        if rng.random() < 0.3:
            a, b = (int(v) for v in rng.choice(5, size=2, replace=False))
            state.apply(Gate(GateKind.CZ if rng.random() < 0.5 else GateKind.CNOT, (a, b)))
        else:
            state.apply(Gate(kinds[int(rng.integers(0, len(kinds)))], (int(rng.integers(0, 5)),)))
    assert state.norm() == pytest.approx(1.0, abs=1e-10)


def test_size_limit_and_arguments():
    with pytest.raises(ValueError):
        DenseState(settings.ORACLE_MAX_QUBITS + 1)
    with pytest.raises(ValueError):
        statevector_oracle(Graph.path(2))
    with pytest.raises(IndexError):
        DenseState.zero(2).h(2)
