"""
Corrección de la salida del muestreo: cadena de espacios afines de
estabilizadores (caso general) y corrección directa por G' (sin postselección).
"""
import logging

import numpy as np

from src.models.affine import AffineSubspace
from src.models.bits import BitMatrix, BitVector
from src.models.gadget import ChainLink, StabilizerChain
from src.models.pauli import Basis, Pauli
from src.models.tree_decomposition import NodeKind
from src.services.linalg_service import mat_mul, reduce_columns, sample_uniform, solve_linear
from src.services.tableau_service import inverse

logger = logging.getLogger(__name__)


# ==========================================
# 1. CADENA DE ESPACIOS AFINES (de abajo hacia arriba)
# ==========================================
def _coords(space, k_old, extra):
    """Agrega `extra` qubits con espacio ℐ (X libre, Z = 0) a un espacio sobre k_old qubits."""
    e = space.basis.to_array()
    f = space.offset.to_array()
    k_new = k_old + extra
    cols = e.shape[1]
    out_e = np.zeros((2 * k_new, cols + extra), dtype=np.uint8)
    out_f = np.zeros(2 * k_new, dtype=np.uint8)
    out_e[:k_old, :cols] = e[:k_old]
    out_e[k_new:k_new + k_old, :cols] = e[k_old:]
    out_e[k_old:k_new, cols:] = np.eye(extra, dtype=np.uint8)
    out_f[:k_old] = f[:k_old]
    out_f[k_new:k_new + k_old] = f[k_old:]
    return AffineSubspace(BitMatrix.from_array(out_e), BitVector.from_array(out_f))


def _product(s1, k1, s2, k2):
    """Producto directo con coordenadas [x1 x2 ; z1 z2]."""
    e1, e2 = s1.basis.to_array(), s2.basis.to_array()
    f1, f2 = s1.offset.to_array(), s2.offset.to_array()
    k = k1 + k2
    c1, c2 = e1.shape[1], e2.shape[1]
    out_e = np.zeros((2 * k, c1 + c2), dtype=np.uint8)
    out_e[:k1, :c1] = e1[:k1]
    out_e[k1:k, c1:] = e2[:k2]
    out_e[k:k + k1, :c1] = e1[k1:]
    out_e[k + k1:, c1:] = e2[k2:]
    out_f = np.concatenate([f1[:k1], f2[:k2], f1[k1:], f2[k2:]])
    return AffineSubspace(BitMatrix.from_array(out_e), BitVector.from_array(out_f))


def _restrict(space, rows):
    return AffineSubspace(reduce_columns(space.basis.take_rows(rows)), space.offset.take(rows))


def _coordinate_rows(labels, qubits):
    pos = {q: i for i, q in enumerate(labels)}
    k = len(labels)
    return [pos[q] for q in qubits] + [k + pos[q] for q in qubits]


def _enforce(space, labels, finished, pattern):
    """Subconjunto del espacio que respeta el patrón en los qubits terminados; None si es vacío."""
    pos = {q: i for i, q in enumerate(labels)}
    k = len(labels)
    rows, values = [], []
    for q in finished:
        if pattern.x_part[q] >= 0:
            rows.append(pos[q])
            values.append(int(pattern.x_part[q]))
        if pattern.z_part[q] >= 0:
            rows.append(k + pos[q])
            values.append(int(pattern.z_part[q]))
    if not rows:
        return space
    target = BitVector.from_array(values) ^ space.offset.take(rows)
    sol = solve_linear(space.basis.take_rows(rows), target)
    if sol is None:
        return None
    return AffineSubspace(mat_mul(space.basis, sol.basis), space.offset ^ space.basis.mul_vec(sol.offset))


def _conjugate_space(space, local):
    """Columnas (x|z) conjugadas por la unitaria local: E' = Mᵀ E, f' = Mᵀ f."""
    mt = local.m.transpose()
    return AffineSubspace(mat_mul(mt, space.basis), mt.mul_vec(space.offset))


def build_chain(c, bases, pattern):
    """Espacios 𝒜_B por nodo; None si alguno queda vacío (probabilidad cero)."""
    # Importación diferida para evitar ciclos (gss <-> correction)
    from src.services.gss_service import local_unitary

    if pattern.n != c.n_total:
        raise ValueError(f"Patrón de {pattern.n} qubits para un circuito de {c.n_total}")
    links = {}
    for gadget in c.gadgets:
        if gadget.kind == NodeKind.INTRODUCE:
            if gadget.children:
                child = links[gadget.children[0]]
                labels = child.live + list(gadget.introduced)
                space = _coords(child.restricted, len(child.live), len(gadget.introduced))
            else:
                labels = list(gadget.introduced)
                space = _coords(AffineSubspace.point(BitVector.zeros(0)), 0, len(labels))
            links[gadget.node] = ChainLink(gadget.kind, labels, space, None, [], labels, space)
            continue

        if gadget.kind == NodeKind.FORGET:
            child = links[gadget.children[0]]
            labels = list(child.live)
            space = child.restricted
        else:
            first, second = links[gadget.children[0]], links[gadget.children[1]]
            labels = first.live + second.live
            space = _product(first.restricted, len(first.live), second.restricted, len(second.live))

        local = local_unitary(gadget, labels, bases, c.vertex_of)
        space = _enforce(_conjugate_space(space, local), labels, gadget.measured, pattern)
        if space is None:
            logger.debug(f"Espacio vacío en el nodo {gadget.node}")
            return None
        finished = list(gadget.measured)
        done = set(finished)
        live = [q for q in labels if q not in done]
        restricted = _restrict(space, _coordinate_rows(labels, live))
        links[gadget.node] = ChainLink(gadget.kind, labels, space, local, finished, live, restricted)
    return StabilizerChain(links, c.root)


# ==========================================
# 2. RECONSTRUCCIÓN (de arriba hacia abajo)
# ==========================================
def sample_chain(chain, c, rng):
    """Elemento uniforme de Stab ∩ Π reconstruido nodo a nodo."""
    n_t = c.n_total
    x_bits = np.zeros(n_t, dtype=np.uint8)
    z_bits = np.zeros(n_t, dtype=np.uint8)
    by_node = c.by_node()

    stack = [(chain.root, BitVector.zeros(0))]
    while stack:
        node, target = stack.pop()
        link = chain.links[node]
        gadget = by_node[node]
        k = len(link.labels)

        if link.kind == NodeKind.INTRODUCE:
            if gadget.children:
                k_child = k - len(gadget.introduced)
                bits = target.to_array()
                child_bits = np.concatenate([bits[:k_child], bits[k:k + k_child]])
                stack.append((gadget.children[0], BitVector.from_array(child_bits)))
            continue

        live_rows = _coordinate_rows(link.labels, link.live)
        sol = solve_linear(link.space.basis.take_rows(live_rows), target ^ link.space.offset.take(live_rows))
        if sol is None:
            raise ValueError(f"Reconstrucción inconsistente en el nodo {node}")
        full = link.space.element(sample_uniform(sol, rng))

        bits = full.to_array()
        pos = {q: i for i, q in enumerate(link.labels)}
        for q in link.finished:
            x_bits[q] = bits[pos[q]]
            z_bits[q] = bits[k + pos[q]]

        before = inverse(link.local).m.transpose().mul_vec(full).to_array()
        if link.kind == NodeKind.FORGET:
            stack.append((gadget.children[0], BitVector.from_array(before)))
        else:
            k1 = len(chain.links[gadget.children[0]].live)
            first = np.concatenate([before[:k1], before[k:k + k1]])
            second = np.concatenate([before[k1:k], before[k + k1:]])
            stack.append((gadget.children[0], BitVector.from_array(first)))
            stack.append((gadget.children[1], BitVector.from_array(second)))

    return Pauli.from_bits(BitVector.from_array(x_bits), BitVector.from_array(z_bits))


def correct_general(c, bases, pattern, rng):
    """Pauli uniforme en Stab((U_bases ⊗ I)𝒞|+>) que respeta el patrón; None si no existe."""
    chain = build_chain(c, bases, pattern)
    if chain is None:
        return None
    return sample_chain(chain, c, rng)


# ==========================================
# 3. CASO SIN POSTSELECCIÓN
# ==========================================
def _conjugate_bits_by_basis(x, z, basis):
    if basis == Basis.X:
        return z, x
    if basis == Basis.Y:
        return x ^ z, x
    return x, z


def correct_simple(gprime, bases, y, postselect=None):
    """(U_bases ⊗ I) X^y Z^{A'y} (U_bases ⊗ I)†; fija las ancillas en 0."""
    if postselect:
        raise ValueError("correct_simple no admite vértices postseleccionados")
    if y.length != gprime.n:
        raise ValueError(f"y de {y.length} bits para G' de {gprime.n} vértices")
    ys = y.to_array()
    x = ys.copy()
    z = np.array([int(sum(ys[w] for w in gprime.neighbors(u)) & 1) for u in range(gprime.n)],
                 dtype=np.uint8)
    for v, basis in enumerate(bases):
        x[v], z[v] = _conjugate_bits_by_basis(x[v], z[v], Basis(basis))
    return Pauli.from_bits(BitVector.from_array(x), BitVector.from_array(z))


def uniformize(z, g, bases, rng):
    """Multiplica un estabilizador uniforme de |G> (en el marco de las bases) sobre z."""
    r = rng.integers(0, 2, size=g.n, dtype=np.uint8)
    out = z.to_array().copy()
    for u in range(g.n):
        basis = Basis(bases[u])
        flip = 0
        if basis != Basis.X:
            flip ^= int(r[u])
        if basis != Basis.Z:
            for v in g.neighbors(u):
                flip ^= int(r[v])
        out[u] ^= flip
    return BitVector.from_array(out)
