import numpy as np
import pytest

from config import settings
from src.models.bits import BitMatrix, BitVector
from src.models.graph import Graph
from src.models.pauli import Basis, Gate, GateKind, Pauli
from src.models.tableau import Postselect, Sample, Tableau
from src.services.tableau_service import (apply_cz_batch, apply_gate, apply_gates, check_invariants, compose,
                                          conjugate_many, conjugate_pauli, gate_tableau, graph_state, inverse,
                                          measure_bases, measure_sequential, measure_z_subset, pauli_mul,
                                          same_stabilizer_group, sample_with_postselection, stabilizer_contains,
                                          stabilizer_generators, tensor)


def random_gates(n, count, rng):
    gates = []
    for _ in range(count):
        if n > 1 and rng.random() < 0.4:
            a, b = (int(v) for v in rng.choice(n, size=2, replace=False))
            gates.append(Gate(GateKind.CZ if rng.random() < 0.5 else GateKind.CNOT, (a, b)))
        else:
            kind = (GateKind.H, GateKind.S, GateKind.SDG, GateKind.X, GateKind.Z)[int(rng.integers(0, 5))]
            gates.append(Gate(kind, (int(rng.integers(0, n)),)))
    return gates


def random_state(n, rng, count=None):
    return apply_gates(Tableau.identity(n), random_gates(n, count or 6 * n, rng))


def random_pauli(n, rng):
    x = BitVector.from_array(rng.integers(0, 2, size=n, dtype=np.uint8))
    z = BitVector.from_array(rng.integers(0, 2, size=n, dtype=np.uint8))
    return Pauli.from_bits(x, z, beta=int(rng.integers(0, 2)))


def embed(p, positions, n):
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    x[positions] = p.x.to_array()
    z[positions] = p.z.to_array()
    return Pauli(p.alpha, p.beta, BitVector.from_array(x), BitVector.from_array(z))


# ==========================================
# PAULIS Y CONJUGACIÓN
# ==========================================
def test_pauli_products():
    y = Pauli.from_label('Y')
    assert pauli_mul(y, y) == Pauli.identity(1)
    # X·Y = iZ
    xy = pauli_mul(Pauli.from_label('X'), y)
    assert (xy.alpha, xy.beta, str(xy.x), str(xy.z)) == (1, 0, '0', '1')


@pytest.mark.parametrize("gate, before, after", [
    ('H', 'X', '+Z'), ('H', 'Z', '+X'), ('H', 'Y', '-Y'),
    ('S', 'X', '+Y'), ('S', 'Y', '-X'), ('SDG', 'X', '-Y'),
    ('X', 'Z', '-Z'), ('Z', 'X', '-X'), ('Y', 'Z', '-Z'),
    ('YB', 'Y', '+Z'), ('YB', 'Z', '+X'),
])
def test_single_qubit_conjugation(gate, before, after):
    out = conjugate_pauli(gate_tableau(gate), Pauli.from_label(before))
    assert out.label() == after


def test_two_qubit_conjugation():
    assert conjugate_pauli(gate_tableau('CNOT'), Pauli.from_label('XI')).label() == '+XX'
    assert conjugate_pauli(gate_tableau('CNOT'), Pauli.from_label('IZ')).label() == '+ZZ'
    assert conjugate_pauli(gate_tableau('CZ'), Pauli.from_label('XI')).label() == '+XZ'
    assert conjugate_pauli(gate_tableau('CZ'), Pauli.from_label('YY')).label() == '+XX'


@pytest.mark.parametrize("dense_rows", [2, 64])
def test_conjugate_many_matches_single(rng, monkeypatch, dense_rows):
    monkeypatch.setattr(settings, 'CONJUGATE_DENSE_ROWS', dense_rows)
    for n, k in [(3, 2), (6, 1), (6, 20), (9, 5)]:
        t = random_state(n, rng)
        paulis = [random_pauli(n, rng) for _ in range(k)]
        rows = BitMatrix.from_rows([p.x.concat(p.z) for p in paulis])
        alpha = BitVector.from_array([p.alpha for p in paulis])
        beta = BitVector.from_array([p.beta for p in paulis])
        out, new_alpha, new_beta = conjugate_many(t, rows, alpha, beta)
        for i, p in enumerate(paulis):
            single = conjugate_pauli(t, p)
            assert out.row(i) == single.x.concat(single.z)
            assert (new_alpha[i], new_beta[i]) == (single.alpha, single.beta)


# ==========================================
# COMPOSICIÓN, INVERSA Y TENSOR
# ==========================================
def test_compose_matches_gate_by_gate(rng):
    gates = random_gates(4, 30, rng)
    first, second = gates[:15], gates[15:]
    t1 = apply_gates(Tableau.identity(4), first)
    t2 = apply_gates(Tableau.identity(4), second)
    assert compose(t1, t2) == apply_gates(Tableau.identity(4), gates)


def test_inverse_is_exact(rng):
    for n in (1, 3, 7):
        t = random_state(n, rng)
        assert compose(t, inverse(t)) == Tableau.identity(n)
        assert compose(inverse(t), t) == Tableau.identity(n)


def test_symplectic_invariants_hold_under_random_sequences(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        t = random_state(n, rng, count=int(rng.integers(1, 12)))
        op = int(rng.integers(0, 3))
        if op == 0:
            t = compose(t, random_state(n, rng))
        elif op == 1:
            t = tensor(t, random_state(int(rng.integers(1, 3)), rng))
        else:
            t = inverse(t)
        assert check_invariants(t)


def test_tensor_orders_qubits():
    t = tensor(Tableau.identity(1), Tableau.plus_state(1))
    labels = sorted(p.label() for p in t.stabilizers())
    assert labels == ['+IX', '+ZI']


def test_cz_batch_validates_adjacency():
    t = Tableau.plus_state(2)
    with pytest.raises(ValueError):
        apply_cz_batch(t, BitMatrix.from_rows(['01', '00']))
    with pytest.raises(ValueError):
        apply_cz_batch(t, BitMatrix.from_rows(['11', '10']))


def test_apply_gate_out_of_range():
    with pytest.raises(IndexError):
        apply_gate(Tableau.identity(2), Gate(GateKind.H, (2,)))


def test_graph_state_stabilizers(star):
    t = graph_state(star)
    assert check_invariants(t)
    for v in range(star.n):
        x = BitVector.from_indices(star.n, [v])
        z = BitVector.from_indices(star.n, star.neighbors(v))
        assert stabilizer_contains(t.stabilizers(), Pauli.from_bits(x, z))


# ==========================================
# MEDICIÓN
# ==========================================
def test_measure_zero_and_plus(rng):
    result = measure_z_subset(Tableau.identity(3), [0, 2], Sample(rng))
    assert str(result.outcomes) == '00'
    assert result.remaining.n == 1
    seen = {str(measure_z_subset(Tableau.plus_state(1), [0], Sample(rng)).outcomes) for _ in range(50)}
    assert seen == {'0', '1'}


def test_bell_pair_is_correlated(rng):
    t = apply_gates(Tableau.identity(2), [Gate(GateKind.H, (0,)), Gate(GateKind.CNOT, (0, 1))])
    for _ in range(20):
        bits = measure_z_subset(t, [0, 1], Sample(rng)).outcomes
        assert bits[0] == bits[1]
    assert measure_z_subset(t, [0, 1], Postselect(BitVector.from_string('01'))) is None


def test_measure_rejects_repeated_qubits(rng):
    with pytest.raises(ValueError):
        measure_z_subset(Tableau.identity(2), [1, 1], Sample(rng))
    with pytest.raises(IndexError):
        measure_z_subset(Tableau.identity(2), [5], Sample(rng))


def test_fast_measurement_matches_sequential(rng):
    n = 10
    for _ in range(200):
        t = random_state(n, rng)
        k = int(rng.integers(1, n + 1))
        qubits = [int(q) for q in rng.choice(n, size=k, replace=False)]
        outcomes, random_positions, generators = measure_sequential(t, qubits, rng)

        result = measure_z_subset(t, qubits, Postselect(outcomes))
        assert result is not None
        assert result.outcomes == outcomes
        assert check_invariants(result.remaining)

        determinate = [i for i in range(k) if i not in random_positions]
        if determinate:
            flipped = outcomes.copy()
            flipped.flip(determinate[0])
            assert measure_z_subset(t, qubits, Postselect(flipped)) is None

        rest = [q for q in range(n) if q not in set(qubits)]
        expected = [embed(p, rest, n) for p in result.remaining.stabilizers()]
        for pos, q in enumerate(qubits):
            expected.append(Pauli(0, outcomes[pos], BitVector.zeros(n), BitVector.from_indices(n, [q])))
        assert same_stabilizer_group(expected, generators)


def test_measure_bases_on_graph_state(rng):
    # |K2> en XX: uniforme sobre 4 resultados
    t = graph_state(Graph.complete(2))
    seen = {str(measure_bases(t, [Basis.X, Basis.X], Sample(rng)).outcomes) for _ in range(100)}
    assert seen == {'00', '01', '10', '11'}
    # En XZ el resultado X del primero coincide con el Z del segundo
    for _ in range(20):
        bits = measure_bases(t, [Basis.X, Basis.Z], Sample(rng)).outcomes
        assert bits[0] == bits[1]


def test_sample_with_postselection(rng):
    t = apply_gates(Tableau.identity(2), [Gate(GateKind.H, (0,)), Gate(GateKind.CNOT, (0, 1))])
    for _ in range(10):
        bits = sample_with_postselection(t, [0], BitVector.from_string('1'), rng)
        assert str(bits) == '11'


def test_graph_state_generators(star):
    labels = [p.label() for p in stabilizer_generators(graph_state(star))]
    assert labels == ['+XZII', '+ZXZZ', '+IZXI', '+IZIX']
