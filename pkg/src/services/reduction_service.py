"""
Circuitos de Clifford de profundidad constante sobre un layout planar:
compilación a {H, S, CZ}, reducción a un estado de grafo con gadgets de
Hadamard y muestreo de extremo a extremo.
"""
import logging
from collections import defaultdict, deque
from functools import lru_cache

import numpy as np

from src.models.bits import BitVector
from src.models.circuit import CliffordCircuit, ReducedInstance
from src.models.gadget import GssInstance
from src.models.graph import CoarseGraining, Graph
from src.models.pauli import Basis, Gate, GateKind
from src.models.tableau import Tableau
from src.services.planar_service import simulate_coarse
from src.services.tableau_service import apply_gates

logger = logging.getLogger(__name__)


# ==========================================
# 1. COMPILACIÓN A {H, S, CZ}
# ==========================================
ALIASES = {
    'I': (),
    'H': ('H',),
    'S': ('S',),
    'Z': ('S', 'S'),
    'SDG': ('S', 'S', 'S'),
    'X': ('H', 'S', 'S', 'H'),
    'Y': ('S', 'S', 'H', 'S', 'S', 'H'),
    'SX': ('H', 'S', 'H'),
    'SXDG': ('H', 'S', 'S', 'S', 'H'),
    'YB': ('S', 'S', 'S', 'H'),
}


def _signature(word):
    t = apply_gates(Tableau.identity(1), [Gate(GateKind(letter), (0,)) for letter in word])
    return tuple(t.x.to_array().ravel()) + tuple(t.z.to_array().ravel()) + tuple(t.s.to_array())


@lru_cache(maxsize=None)
def single_qubit_cliffords():
    """Las 24 Cliffords de un qubit (módulo fase global) como palabras mínimas en {H, S}."""
    seen = {_signature(()): ()}
    queue = deque([()])
    while queue and len(seen) < 24:
        word = queue.popleft()
        for letter in ('H', 'S'):
            candidate = word + (letter,)
            sig = _signature(candidate)
            if sig not in seen:
                seen[sig] = candidate
                queue.append(candidate)
    words = sorted(seen.values(), key=lambda w: (len(w), w))
    if len(words) != 24:
        raise RuntimeError(f"Se esperaban 24 Cliffords de un qubit y se obtuvieron {len(words)}")
    return tuple(words)


def compile_gate(name, targets, index=None):
    """Expande una compuerta nombrada a compuertas nativas."""
    name = name.upper()
    targets = tuple(int(q) for q in targets)
    if name == 'CZ':
        return [Gate(GateKind.CZ, targets)]
    if name in ('CNOT', 'CX'):
        control, target = targets
        h = Gate(GateKind.H, (target,))
        return [h, Gate(GateKind.CZ, (control, target)), h]
    if name == 'SWAP':
        a, b = targets
        return compile_gate('CNOT', (a, b)) + compile_gate('CNOT', (b, a)) + compile_gate('CNOT', (a, b))
    if len(targets) != 1:
        raise ValueError(f"La compuerta '{name}' actúa sobre un qubit (llegaron {len(targets)})")
    if name == 'C1':
        table = single_qubit_cliffords()
        if index is None or not 0 <= int(index) < len(table):
            raise ValueError(f"Índice de Clifford inválido: {index} (0..{len(table) - 1})")
        word = table[int(index)]
    elif name in ALIASES:
        word = ALIASES[name]
    else:
        raise ValueError(f"Compuerta desconocida: '{name}'")
    return [Gate(GateKind(letter), targets) for letter in word]


def compile_circuit(n, layout, ops):
    """ops: iterable de (nombre, qubits) o (nombre, qubits, índice)."""
    gates = []
    for op in ops:
        name, targets = op[0], op[1]
        index = op[2] if len(op) > 2 else None
        gates.extend(compile_gate(name, targets, index))
    return CliffordCircuit(n, layout, gates)


def random_circuit(layout, depth, rng):
    """Capas con CZ sobre un matching aleatorio del layout y H/S/nada en el resto."""
    gates = []
    edges = layout.edges()
    for _ in range(depth):
        busy = set()
        for k in rng.permutation(len(edges)):
            u, v = edges[k]
            if u not in busy and v not in busy and rng.random() < 0.5:
                gates.append(Gate(GateKind.CZ, (u, v)))
                busy.update((u, v))
        for q in range(layout.n):
            if q in busy:
                continue
            pick = int(rng.integers(0, 3))
            if pick < 2:
                gates.append(Gate((GateKind.H, GateKind.S)[pick], (q,)))
    return CliffordCircuit(layout.n, layout, gates)


# ==========================================
# 2. REDUCCIÓN
# ==========================================
# Cantidad de S acumuladas (mod 4) -> (base de medición, se invierte el resultado)
_S_FRAME = {0: (Basis.X, 0), 1: (Basis.Y, 1), 2: (Basis.X, 1), 3: (Basis.Y, 0)}


def _cancel_hadamards(gates):
    """Elimina pares H·H consecutivos sobre el mismo cable."""
    removed = set()
    stacks = defaultdict(list)
    for i, gate in enumerate(gates):
        if gate.kind == GateKind.H:
            stack = stacks[gate.targets[0]]
            if stack and gates[stack[-1]].kind == GateKind.H:
                removed.add(stack.pop())
                removed.add(i)
                continue
        for q in gate.targets:
            stacks[q].append(i)
    return [g for i, g in enumerate(gates) if i not in removed]


def _push_x(wire, tail, n):
    """Parte X final de X_wire empujado por `tail` y por la capa H de la medición."""
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    x[wire] = 1
    for gate in tail:
        if gate.kind == GateKind.H:
            q = gate.targets[0]
            x[q], z[q] = z[q], x[q]
        elif gate.kind == GateKind.S:
            q = gate.targets[0]
            z[q] ^= x[q]
        else:
            a, b = gate.targets
            z[a] ^= x[b]
            z[b] ^= x[a]
    # la última capa de H intercambia X y Z
    return z


def reduce_circuit(c):
    """
    C' = H H C H H sobre |0^n>: la primera H prepara |+>, la última pasa a
    medición en X y cada H intermedia se reemplaza por un gadget (CZ con un
    qubit fresco y medición del qubit viejo).
    """
    if not c.is_native:
        raise ValueError("reduce_circuit requiere compuertas {H, S, CZ}; usar compile_circuit antes")
    n = c.n
    wrap = [Gate(GateKind.H, (q,)) for q in range(n)]
    middle = _cancel_hadamards(wrap + list(c.gates) + wrap)

    current = list(range(n))
    mapping = list(range(n))
    s_count = [0] * n
    edges = set()
    gadget_qubits, push_rows = [], []

    def toggle(u, v):
        edges.symmetric_difference_update({(min(u, v), max(u, v))})

    for i, gate in enumerate(middle):
        if gate.kind == GateKind.S:
            s_count[current[gate.targets[0]]] += 1
        elif gate.kind == GateKind.CZ:
            a, b = gate.targets
            toggle(current[a], current[b])
        else:
            wire = gate.targets[0]
            old, fresh = current[wire], len(mapping)
            mapping.append(wire)
            s_count.append(0)
            toggle(old, fresh)
            gadget_qubits.append(old)
            push_rows.append(_push_x(wire, middle[i + 1:], n))
            current[wire] = fresh

    frames = [_S_FRAME[k % 4] for k in s_count]
    gprime = Graph(len(mapping), sorted(edges))
    coarse = CoarseGraining(mapping, n)
    depth = c.depth
    largest = max(len(group) for group in coarse.groups.values())
    if largest > depth + 4:
        raise RuntimeError(f"Grupo de {largest} qubits supera d+4={depth + 4}")

    push = np.array(push_rows, dtype=np.uint8).reshape(len(push_rows), n)
    reduced = ReducedInstance(
        instance=GssInstance(gprime, [basis for basis, _ in frames]),
        coarse=coarse,
        flips=np.array([flip for _, flip in frames], dtype=np.uint8),
        outputs=tuple(current),
        gadget_qubits=tuple(gadget_qubits),
        push=push,
        depth=depth,
    )
    logger.debug(f"Circuito reducido: n={n}, h={reduced.h}, |V(G')|={gprime.n}, d={depth}")
    return reduced


# ==========================================
# 3. MUESTREO DE EXTREMO A EXTREMO
# ==========================================
def output_stabilizer_x(c):
    """Partes X de los generadores estabilizadores de U_C|0^n> (una fila por generador)."""
    t = apply_gates(Tableau.identity(c.n), c.gates)
    return t.x.take_rows(range(c.n, 2 * c.n)).to_array()


def push_corrections(reduced, outcomes):
    """g = salida de los cables corregida por P(z); `outcomes` ya en el marco de las bases."""
    m = outcomes.to_array() ^ reduced.flips
    g = m[list(reduced.outputs)].copy()
    if reduced.h:
        z = m[list(reduced.gadget_qubits)].astype(np.int64)
        g ^= ((z @ reduced.push.astype(np.int64)) & 1).astype(np.uint8)
    return g


def simulate_circuit(c, rng=None):
    rng = rng if rng is not None else np.random.default_rng()
    reduced = reduce_circuit(c)
    result = simulate_coarse(reduced.instance, reduced.coarse, c.layout, rng)
    g = push_corrections(reduced, result.outcome)
    s = rng.integers(0, 2, size=c.n).astype(np.int64)
    q = (s @ output_stabilizer_x(c).astype(np.int64)) & 1
    return BitVector.from_array(g ^ q.astype(np.uint8))
