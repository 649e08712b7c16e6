"""
Simulación de estados de grafo por descomposición en árbol: compila el TD en
el circuito de gadgets, muestrea y corrige la salida.
"""
import logging

import numpy as np

from src.models.bits import BitVector
from src.models.gadget import ZERO_PROBABILITY, Gadget, GadgetCircuit, GssResult, Pattern
from src.models.graph import Graph
from src.models.pauli import Gate, GateKind
from src.models.tableau import Sample, Tableau
from src.models.tree_decomposition import NodeKind, TreeDecomposition
from src.services.correction_service import correct_general, correct_simple, uniformize
from src.services.decomposition_service import ensure_valid, normalize
from src.services.tableau_service import apply_basis_changes, apply_gate, measure_z_subset, tensor

logger = logging.getLogger(__name__)


# ==========================================
# 1. COMPILACIÓN DEL CIRCUITO
# ==========================================
def build_circuit(g, t):
    """
    Introduce: un |+> por vértice nuevo. Forget: CZ por cada arista de la bolsa
    hija que toca un vértice olvidado, y se mide. Merge: CNOT desde la réplica
    de B2 hacia la de B1, que queda como ancilla medida.
    """
    if not t.is_nice():
        raise ValueError("build_circuit requiere una descomposición nice")
    if t.bag(t.root):
        raise ValueError("build_circuit requiere bolsa raíz vacía")

    prov_vertex = []
    data_prov = {}
    ancilla_prov = []
    raw = []
    live = {}

    def alloc(v):
        prov_vertex.append(v)
        return len(prov_vertex) - 1

    for i in t.post_order():
        node = t.nodes[i]
        children = tuple(node.children)
        if node.kind == NodeKind.INTRODUCE:
            current = dict(live.pop(children[0])) if children else {}
            new = []
            for v in sorted(node.bag - set(current)):
                current[v] = alloc(v)
                new.append(current[v])
            raw.append(Gadget(NodeKind.INTRODUCE, i, children, introduced=tuple(new)))
        elif node.kind == NodeKind.FORGET:
            child_map = live.pop(children[0])
            child_bag = t.nodes[children[0]].bag
            forgotten = sorted(child_bag - node.bag)
            edges = set()
            for u in forgotten:
                for w in g.neighbors(u):
                    if w in child_bag:
                        a, b = child_map[u], child_map[w]
                        edges.add((min(a, b), max(a, b)))
            for u in forgotten:
                data_prov[u] = child_map[u]
            raw.append(Gadget(NodeKind.FORGET, i, children, cz_edges=tuple(sorted(edges)),
                              measured=tuple(child_map[u] for u in forgotten)))
            current = {v: p for v, p in child_map.items() if v in node.bag}
        else:
            first, second = live.pop(children[0]), live.pop(children[1])
            shared = sorted(set(first) & set(second))
            cnots = tuple((second[v], first[v]) for v in shared)
            ancilla_prov.extend(first[v] for v in shared)
            raw.append(Gadget(NodeKind.MERGE, i, children, cnots=cnots,
                              measured=tuple(first[v] for v in shared)))
            current = {**first, **second}
        live[i] = current

    n = g.n
    if len(data_prov) != n:
        raise ValueError("Hay vértices que nunca se olvidan: la descomposición no cubre el grafo")
    label = {p: v for v, p in data_prov.items()}
    for k, p in enumerate(sorted(ancilla_prov)):
        label[p] = n + k
    vertex_of = [0] * len(label)
    for p, q in label.items():
        vertex_of[q] = prov_vertex[p]

    def relabel(items):
        return tuple(label[p] for p in items)

    gadgets = []
    for gd in raw:
        gadgets.append(Gadget(
            gd.kind, gd.node, gd.children,
            introduced=relabel(gd.introduced),
            cz_edges=tuple(sorted((min(label[a], label[b]), max(label[a], label[b])) for a, b in gd.cz_edges)),
            measured=relabel(gd.measured),
            cnots=tuple((label[a], label[b]) for a, b in gd.cnots),
        ))
    circuit = GadgetCircuit(n, len(ancilla_prov), gadgets, vertex_of, t.root)
    logger.debug(f"Circuito de gadgets: n_t={circuit.n_total}, ancillas={circuit.n_ancilla}, "
                 f"compuertas={circuit.gate_count}")
    return circuit


def derive_gprime(c):
    """Grafo G' con 𝒞|+^{n_t}> = |G'>, empujando cada CNOT hasta el estado inicial."""
    adj = [set() for _ in range(c.n_total)]

    def toggle(u, w):
        if w in adj[u]:
            adj[u].discard(w)
            adj[w].discard(u)
        else:
            adj[u].add(w)
            adj[w].add(u)

    for gadget in c.gadgets:
        for u, w in gadget.cz_edges:
            toggle(u, w)
        for control, target in gadget.cnots:
            for w in list(adj[target]):
                if w == control:
                    raise ValueError(f"CNOT({control}->{target}) sobre qubits adyacentes")
                toggle(control, w)
    return Graph(c.n_total, [(u, w) for u in range(c.n_total) for w in adj[u] if u < w])


# ==========================================
# 2. MUESTREO
# ==========================================
def local_unitary(gadget, labels, bases, vertex_of):
    """Tableau de la unitaria del gadget sobre sus qubits vivos (orden de `labels`)."""
    pos = {q: i for i, q in enumerate(labels)}
    t = Tableau.identity(len(labels))
    if gadget.kind == NodeKind.FORGET:
        for u, w in gadget.cz_edges:
            apply_gate(t, Gate(GateKind.CZ, (pos[u], pos[w])))
        apply_basis_changes(t, [bases[vertex_of[q]] for q in gadget.measured],
                            [pos[q] for q in gadget.measured])
    elif gadget.kind == NodeKind.MERGE:
        for control, target in gadget.cnots:
            apply_gate(t, Gate(GateKind.CNOT, (pos[control], pos[target])))
    return t


def sample_subroutine(c, bases, rng):
    """Evalúa 𝒞 de abajo hacia arriba; cada nodo solo guarda los qubits vivos de su bolsa."""
    y = np.zeros(c.n_total, dtype=np.uint8)
    state = {}
    for gadget in c.gadgets:
        if gadget.kind == NodeKind.INTRODUCE:
            fresh = Tableau.plus_state(len(gadget.introduced))
            if gadget.children:
                t, labels = state.pop(gadget.children[0])
                t, labels = tensor(t, fresh), labels + list(gadget.introduced)
            else:
                t, labels = fresh, list(gadget.introduced)
            state[gadget.node] = (t, labels)
            continue

        if gadget.kind == NodeKind.FORGET:
            t, labels = state.pop(gadget.children[0])
            pos = {q: i for i, q in enumerate(labels)}
            for u, w in gadget.cz_edges:
                apply_gate(t, Gate(GateKind.CZ, (pos[u], pos[w])))
            apply_basis_changes(t, [bases[c.vertex_of[q]] for q in gadget.measured],
                                [pos[q] for q in gadget.measured])
        else:
            t1, l1 = state.pop(gadget.children[0])
            t2, l2 = state.pop(gadget.children[1])
            t, labels = tensor(t1, t2), l1 + l2
            pos = {q: i for i, q in enumerate(labels)}
            for control, target in gadget.cnots:
                apply_gate(t, Gate(GateKind.CNOT, (pos[control], pos[target])))

        result = measure_z_subset(t, [pos[q] for q in gadget.measured], Sample(rng))
        y[list(gadget.measured)] = result.outcomes.to_array()
        measured = set(gadget.measured)
        state[gadget.node] = (result.remaining, [q for q in labels if q not in measured])
    return BitVector.from_array(y)


def build_pattern(inst, c, y):
    """Ancillas forzadas a 0 y vértices postseleccionados a su objetivo; el resto libre."""
    if y.length != c.n_total:
        raise ValueError(f"y de {y.length} bits para un circuito de {c.n_total} qubits")
    bits = y.to_array()
    pattern = Pattern.free(c.n_total)
    for a in c.ancillas:
        pattern.x_part[a] = bits[a]
    for v, target in inst.postselect.items():
        pattern.x_part[v] = bits[v] ^ target
    return pattern


# ==========================================
# 3. TUBERÍA COMPLETA
# ==========================================
def prepare_td(g, td=None):
    """TD nice con raíz vacía; sin TD se usa la bolsa única."""
    td = TreeDecomposition.single_bag(range(g.n)) if td is None else td
    ensure_valid(g, td)
    if not td.is_nice() or td.bag(td.root):
        td = normalize(td)
    return td


def solve_instance(inst, td=None, rng=None):
    """Muestra sobre 𝒮 condicionada a la postselección, o la bandera de probabilidad cero."""
    rng = rng if rng is not None else np.random.default_rng()
    g = inst.graph
    td = prepare_td(g, td)
    circuit = build_circuit(g, td)
    y = sample_subroutine(circuit, inst.bases, rng)

    if not inst.postselect:
        gprime = derive_gprime(circuit)
        p_cor = correct_simple(gprime, inst.bases, y)
        corrected = (y ^ p_cor.x).take(range(g.n))
        outcome = uniformize(corrected, g, inst.bases, rng)
        return GssResult(outcome, None, circuit.n_total)

    pattern = build_pattern(inst, circuit, y)
    p_cor = correct_general(circuit, inst.bases, pattern, rng)
    if p_cor is None:
        logger.debug("Postselección con probabilidad cero")
        return GssResult(None, ZERO_PROBABILITY, circuit.n_total)
    corrected = y ^ p_cor.x
    return GssResult(corrected.take(inst.sampled), None, circuit.n_total)
