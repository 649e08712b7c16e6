"""
Motor de tableaux: aritmética de Paulis, composición de Cliffords, compuertas,
productos tensoriales y medición de varios qubits a la vez.
"""
import logging
from functools import lru_cache

import numpy as np

from config import settings
from src.models.bits import BitMatrix, BitVector, pack_bits, parity
from src.models.pauli import BASIS_CHANGE, Basis, Gate, GateKind, Pauli
from src.models.tableau import MeasurementResult, Postselect, Sample, Tableau
from src.services.linalg_service import inverse as matrix_inverse
from src.services.linalg_service import lsp_factorize, mat_mul, solve_linear

logger = logging.getLogger(__name__)


# ==========================================
# 1. ARITMÉTICA DE PAULIS
# ==========================================
def pauli_mul(p1, p2):
    """Producto exacto p1·p2 en forma i^a (-1)^b X^x Z^z."""
    if p1.n != p2.n:
        raise ValueError(f"pauli_mul: {p1.n} vs {p2.n} qubits")
    return Pauli(
        p1.alpha ^ p2.alpha,
        p1.beta ^ p2.beta ^ (p1.alpha & p2.alpha) ^ p1.z.dot(p2.x),
        p1.x ^ p2.x,
        p1.z ^ p2.z,
    )


def conjugate_pauli(t, p):
    """Q P Q† con fase y signo exactos."""
    if p.n != t.n:
        raise ValueError(f"conjugate_pauli: Pauli de {p.n} qubits y tableau de {t.n}")
    c = np.concatenate([p.x.to_array(), p.z.to_array()])
    sel = np.flatnonzero(c)
    x_rows, z_rows = t.x.words[sel], t.z.words[sel]
    p_bits = t.p.to_array()[sel]
    s_bits = t.s.to_array()[sel]

    cp = int(p_bits.sum()) & 1
    cs = int(s_bits.sum()) & 1
    # sum_{i>j} p_i p_j = C(w, 2) mod 2
    w = int(p_bits.sum())
    pp_term = (w * (w - 1) // 2) & 1
    # sum_{i>j} x_i . z_j vía XOR acumulado exclusivo de las filas Z
    if sel.size:
        prefix = np.bitwise_xor.accumulate(z_rows, axis=0)
        prefix = np.vstack([np.zeros_like(prefix[:1]), prefix[:-1]])
        xz_term = int(parity(x_rows & prefix).sum()) & 1
        new_x = np.bitwise_xor.reduce(x_rows, axis=0)
        new_z = np.bitwise_xor.reduce(z_rows, axis=0)
    else:
        xz_term = 0
        new_x = np.zeros_like(p.x.words)
        new_z = np.zeros_like(p.z.words)

    return Pauli(
        p.alpha ^ cp,
        p.beta ^ (p.alpha & cp) ^ cs ^ pp_term ^ xz_term,
        BitVector(t.n, new_x),
        BitVector(t.n, new_z),
    )


@lru_cache(maxsize=64)
def _lower_mask(size):
    return pack_bits(np.tril(np.ones((size, size), dtype=np.uint8), -1))


def _lower_k_block(t, lo, hi):
    """lower(p pᵀ + X Zᵀ) restringido a las filas/columnas lo..hi."""
    rows = range(lo, hi)
    p_blk = t.p.take(rows)
    k = BitMatrix.outer(p_blk, p_blk) ^ mat_mul(t.x.take_rows(rows), t.z.take_rows(rows).transpose())
    return BitMatrix(hi - lo, hi - lo, k.words & _lower_mask(hi - lo))


def _quadratic_term(t, c, lo, hi, base):
    """diag(C lower(K) Cᵀ) para las columnas lo..hi de C; mitades recursivas."""
    size = hi - lo
    if size <= base:
        y = mat_mul(c, _lower_k_block(t, lo, hi))
        return parity(y.words & c.words)
    mid = lo + size // 2
    c1 = c.take_cols(range(0, mid - lo))
    c2 = c.take_cols(range(mid - lo, size))
    # término cruzado: sum_{i en I2, j en I1} c_i c_j K_ij = parity((C2 K21) & C1)
    c2p = c2.mul_vec(t.p.take(range(mid, hi)))
    cross = BitMatrix.outer(c2p, t.p.take(range(lo, mid)))
    c2x = mat_mul(c2, t.x.take_rows(range(mid, hi)))
    cross = cross ^ mat_mul(c2x, t.z.take_rows(range(lo, mid)).transpose())
    return (parity(cross.words & c1.words)
            ^ _quadratic_term(t, c1, lo, mid, base)
            ^ _quadratic_term(t, c2, mid, hi, base))


def conjugate_many(t, rows, alpha=None, beta=None):
    """
    Conjuga cada fila (a|b) de `rows` por el Clifford t.

    Devuelve (bits, fases, signos). Con pocas filas respecto a 2n se usa la
    recursión por mitades; en otro caso el bloque denso lower(K) completo.
    """
    size = 2 * t.n
    if rows.cols != size:
        raise ValueError(f"conjugate_many: filas de {rows.cols} bits para tableau de {t.n} qubits")
    k = rows.rows
    alpha = alpha if alpha is not None else BitVector.zeros(k)
    beta = beta if beta is not None else BitVector.zeros(k)

    out = mat_mul(rows, t.m)
    cp = rows.mul_vec(t.p)
    cs = rows.mul_vec(t.s)

    base = settings.CONJUGATE_DENSE_ROWS
    if k >= size or size <= base:
        quad = _quadratic_term(t, rows, 0, size, size)
    else:
        quad = _quadratic_term(t, rows, 0, size, max(k, base))

    new_alpha = alpha ^ cp
    new_beta = beta ^ (alpha & cp) ^ cs ^ BitVector.from_array(quad)
    return out, new_alpha, new_beta


# ==========================================
# 2. COMPOSICIÓN Y COMPUERTAS
# ==========================================
def _from_rows(n, rows, p, s):
    x = rows.take_cols(range(n))
    z = rows.take_cols(range(n, 2 * n))
    return Tableau(n, x, z, p, s)


def compose(t1, t2, qubits=None):
    """
    Tableau de Q2·Q1 (primero t1, después t2).

    Con `qubits`, t2 actúa sobre ese subconjunto de los qubits de t1 y solo se
    conjugan las columnas locales.
    """
    if qubits is None:
        if t1.n != t2.n:
            raise ValueError(f"compose: {t1.n} vs {t2.n} qubits")
        out, p, s = conjugate_many(t2, t1.m, t1.p, t1.s)
        return _from_rows(t1.n, out, p, s)
    result = t1.copy()
    _compose_local(result, t2, list(qubits))
    return result


def _compose_local(t, local, qubits):
    if len(qubits) != local.n:
        raise ValueError(f"compose: {len(qubits)} qubits para un tableau de {local.n}")
    if any(q < 0 or q >= t.n for q in qubits) or len(set(qubits)) != len(qubits):
        raise IndexError(f"Qubits fuera de rango o repetidos: {qubits} (n={t.n})")
    dense = np.hstack([t.x.get_columns(qubits), t.z.get_columns(qubits)])
    out, p, s = conjugate_many(local, BitMatrix.from_array(dense), t.p, t.s)
    bits = out.to_array()
    m = len(qubits)
    t.x.set_columns(qubits, bits[:, :m])
    t.z.set_columns(qubits, bits[:, m:])
    t.p = p
    t.s = s


@lru_cache(maxsize=None)
def _gate_rows(kind):
    """(filas X, filas Z, p, s) del tableau local de cada compuerta."""
    table = {
        GateKind.H: (['0', '1'], ['1', '0'], '00', '00'),
        GateKind.S: (['1', '0'], ['1', '1'], '10', '00'),
        GateKind.SDG: (['1', '0'], ['1', '1'], '10', '10'),
        GateKind.X: (['1', '0'], ['0', '1'], '00', '01'),
        GateKind.Y: (['1', '0'], ['0', '1'], '00', '11'),
        GateKind.Z: (['1', '0'], ['0', '1'], '00', '10'),
        GateKind.Y_BASIS_CHANGE: (['1', '1'], ['1', '0'], '10', '00'),
        GateKind.CZ: (['10', '01', '00', '00'], ['01', '10', '10', '01'], '0000', '0000'),
        GateKind.CNOT: (['11', '01', '00', '00'], ['00', '00', '10', '11'], '0000', '0000'),
    }
    return table[kind]


def gate_tableau(kind):
    kind = GateKind(kind)
    x_rows, z_rows, p, s = _gate_rows(kind)
    return Tableau.from_rows(x_rows, z_rows, p, s)


def apply_gate(t, gate):
    """Aplica la compuerta in situ (O(n) operaciones de fila)."""
    if any(q < 0 or q >= t.n for q in gate.targets):
        raise IndexError(f"Compuerta {gate} fuera de rango (n={t.n})")
    _compose_local(t, gate_tableau(gate.kind), list(gate.targets))


def apply_gates(t, gates):
    for gate in gates:
        apply_gate(t, gate)
    return t


def apply_cz_batch(t, adjacency):
    """Aplica CZ en cada arista de la matriz de adyacencia con una sola composición."""
    if adjacency.shape != (t.n, t.n):
        raise ValueError(f"Adyacencia {adjacency.shape} para tableau de {t.n} qubits")
    if not adjacency.is_symmetric() or adjacency.diagonal().any():
        raise ValueError("La adyacencia debe ser simétrica y con diagonal cero")
    n = t.n
    eye = BitMatrix.identity(n)
    zero = BitMatrix.zeros(n, n)
    batch = Tableau(n, BitMatrix.vstack([eye, zero]), BitMatrix.vstack([adjacency, eye]),
                    BitVector.zeros(2 * n), BitVector.zeros(2 * n))
    result = compose(t, batch)
    t.x, t.z, t.p, t.s = result.x, result.z, result.p, result.s


def tensor(t1, t2):
    """Suma directa: qubits de t1 seguidos de los de t2."""
    n1, n2 = t1.n, t2.n

    def _halves(block, n):
        return block.take_rows(range(n)), block.take_rows(range(n, 2 * n))

    x1a, x1b = _halves(t1.x, n1)
    x2a, x2b = _halves(t2.x, n2)
    z1a, z1b = _halves(t1.z, n1)
    z2a, z2b = _halves(t2.z, n2)
    x = BitMatrix.vstack([BitMatrix.block_diag([x1a, x2a]), BitMatrix.block_diag([x1b, x2b])])
    z = BitMatrix.vstack([BitMatrix.block_diag([z1a, z2a]), BitMatrix.block_diag([z1b, z2b])])

    def _join(v1, v2):
        a1, a2 = v1.to_array(), v2.to_array()
        return BitVector.from_array(np.concatenate([a1[:n1], a2[:n2], a1[n1:], a2[n2:]]))

    return Tableau(n1 + n2, x, z, _join(t1.p, t2.p), _join(t1.s, t2.s))


def inverse(t):
    """Tableau de Q† con signos exactos (M⁻¹ = Ω Mᵀ Ω)."""
    n = t.n
    a = t.x.take_rows(range(n))
    c = t.x.take_rows(range(n, 2 * n))
    b = t.z.take_rows(range(n))
    d = t.z.take_rows(range(n, 2 * n))
    x_inv = BitMatrix.vstack([d.transpose(), c.transpose()])
    z_inv = BitMatrix.vstack([b.transpose(), a.transpose()])
    p_inv = BitVector.from_array(parity(x_inv.words & z_inv.words))
    candidate = Tableau(n, x_inv, z_inv, p_inv, BitVector.zeros(2 * n))
    # Con s = 0 el signo de cada fila de t conjugada queda en `residual`; M s_inv = residual
    _, _, residual = conjugate_many(candidate, t.m, t.p, t.s)
    candidate.s = candidate.m.mul_vec(residual)
    return candidate


def check_invariants(t):
    """MᵀΩM = Ω y p = diag(MΛMᵀ)."""
    n = t.n
    symp = mat_mul(t.x, t.z.transpose()) ^ mat_mul(t.z, t.x.transpose())
    omega = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    omega[:n, n:] = np.eye(n, dtype=np.uint8)
    omega[n:, :n] = np.eye(n, dtype=np.uint8)
    if symp != BitMatrix.from_array(omega):
        return False
    return BitVector.from_array(parity(t.x.words & t.z.words)) == t.p


def graph_state(graph):
    """Tableau de |G> = prod CZ |+^n>."""
    t = Tableau.plus_state(graph.n)
    if graph.num_edges():
        apply_cz_batch(t, graph.adjacency())
    return t


# ==========================================
# 3. MEDICIÓN
# ==========================================
class _RowStore:
    """Copia mutable de las filas de un tableau para la medición."""

    def __init__(self, t):
        self.n = t.n
        self.x = t.x.words.copy()
        self.z = t.z.words.copy()
        self.alpha = t.p.to_array().copy()
        self.beta = t.s.to_array().copy()

    def xbit(self, q):
        return ((self.x[:, q >> 6] >> np.uint64(q & 63)) & np.uint64(1)).astype(np.uint8)

    def zbit(self, q):
        return ((self.z[:, q >> 6] >> np.uint64(q & 63)) & np.uint64(1)).astype(np.uint8)

    def mul_rows(self, targets, src):
        """P_h <- P_h · P_src para cada h en targets; hermitiza si hace falta."""
        targets = np.asarray(targets, dtype=np.int64)
        if targets.size == 0:
            return
        a_src, b_src = self.alpha[src], self.beta[src]
        zx = parity(self.z[targets] & self.x[src][None, :])
        self.beta[targets] ^= b_src ^ (self.alpha[targets] & a_src) ^ zx
        self.alpha[targets] ^= a_src
        self.x[targets] ^= self.x[src]
        self.z[targets] ^= self.z[src]
        herm = parity(self.x[targets] & self.z[targets])
        bad = targets[self.alpha[targets] != herm]
        if bad.size:
            # multiplicar por i
            self.beta[bad] ^= self.alpha[bad]
            self.alpha[bad] ^= 1

    def set_row(self, i, x_bits, z_bits, alpha, beta):
        self.x[i] = pack_bits(x_bits)
        self.z[i] = pack_bits(z_bits)
        self.alpha[i] = alpha
        self.beta[i] = beta

    def copy_row(self, dst, src):
        self.x[dst] = self.x[src]
        self.z[dst] = self.z[src]
        self.alpha[dst] = self.alpha[src]
        self.beta[dst] = self.beta[src]

    def to_tableau(self, drop_rows, drop_cols):
        keep_rows = [i for i in range(2 * self.n) if i not in drop_rows]
        keep_cols = [j for j in range(self.n) if j not in drop_cols]
        m = len(keep_cols)
        xd = BitMatrix(2 * self.n, self.n, self.x).to_array()[np.ix_(keep_rows, keep_cols)]
        zd = BitMatrix(2 * self.n, self.n, self.z).to_array()[np.ix_(keep_rows, keep_cols)]
        return Tableau(m,
                       BitMatrix.from_array(xd.reshape(2 * m, m)),
                       BitMatrix.from_array(zd.reshape(2 * m, m)),
                       BitVector.from_array(self.alpha[keep_rows]),
                       BitVector.from_array(self.beta[keep_rows]))


def _outcome_bit(mode, pos):
    if isinstance(mode, Sample):
        return int(mode.rng.integers(0, 2))
    return mode.bits[pos]


def measure_z_subset(t, qubits, mode):
    """
    Mide en Z los qubits dados y los elimina del tableau.

    Los resultados aleatorios se detectan con la factorización LSP de la
    restricción X de los estabilizadores; después se leen los determinados.
    Devuelve None si la postselección pedida tiene probabilidad cero.
    """
    qubits = [int(q) for q in qubits]
    n, k = t.n, len(qubits)
    if len(set(qubits)) != k:
        raise ValueError(f"Qubits repetidos en la medición: {qubits}")
    if any(q < 0 or q >= n for q in qubits):
        raise IndexError(f"Qubits fuera de rango: {qubits} (n={n})")
    if isinstance(mode, Postselect) and mode.bits.length != k:
        raise ValueError(f"Postselección de {mode.bits.length} bits para {k} qubits")
    if k == 0:
        return MeasurementResult(BitVector.zeros(0), t.copy())

    store = _RowStore(t)
    stab_x = t.x.take_rows(range(n, 2 * n)).get_columns(qubits)   # n x k
    lsp = lsp_factorize(BitMatrix.from_array(stab_x.T))
    random_pos = list(lsp.pivot_rows)
    random_set = set(random_pos)

    outcomes = np.zeros(k, dtype=np.uint8)
    pair_row = {}

    # Paso 1: resultados aleatorios
    for pos in random_pos:
        q = qubits[pos]
        col = store.xbit(q)
        cand = np.flatnonzero(col[n:])
        p = n + int(cand[0])
        store.mul_rows([h for h in np.flatnonzero(col) if h != p], p)
        bit = _outcome_bit(mode, pos)
        store.copy_row(p - n, p)
        e_q = np.zeros(n, dtype=np.uint8)
        e_q[q] = 1
        store.set_row(p, np.zeros(n, dtype=np.uint8), e_q, 0, bit)
        outcomes[pos] = bit
        pair_row[pos] = p

    # Paso 2: resultados determinados
    for pos in range(k):
        if pos in random_set:
            continue
        q = qubits[pos]
        hits = [int(h) for h in np.flatnonzero(store.xbit(q)[:n])]
        # el pivote no puede ser un par ya fijado (±Z de un qubit medido)
        pinned = {row - n for row in pair_row.values()}
        p = next(h for h in hits if h not in pinned)
        others = [h for h in hits if h != p]
        for h in others:
            store.mul_rows([n + p], n + h)
        store.mul_rows(others, p)
        bit = int(store.beta[n + p])
        if isinstance(mode, Postselect) and bit != mode.bits[pos]:
            logger.debug(f"Postselección imposible en el qubit {q}")
            return None
        outcomes[pos] = bit
        pair_row[pos] = n + p

    # Desacoplar cada qubit medido: par (X_q, ±Z_q) y resto sin soporte en q
    for pos, p in pair_row.items():
        q = qubits[pos]
        zrows = [h for h in np.flatnonzero(store.zbit(q)) if h not in (p, p - n)]
        store.mul_rows(zrows, p)
        e_q = np.zeros(n, dtype=np.uint8)
        e_q[q] = 1
        store.set_row(p - n, e_q, np.zeros(n, dtype=np.uint8), 0, 0)

    drop_rows = set(pair_row.values()) | {p - n for p in pair_row.values()}
    remaining = store.to_tableau(drop_rows, set(qubits))
    return MeasurementResult(BitVector.from_array(outcomes), remaining)


def apply_basis_changes(t, bases, qubits=None):
    """Aplica U_bases (I / H / H·S†) sobre los qubits indicados."""
    qubits = list(range(t.n)) if qubits is None else list(qubits)
    if len(bases) != len(qubits):
        raise ValueError(f"Se esperaban {len(qubits)} bases y llegaron {len(bases)}")
    for q, basis in zip(qubits, bases):
        kind = BASIS_CHANGE[Basis(basis)]
        if kind is not None:
            apply_gate(t, Gate(kind, (q,)))
    return t


def measure_bases(t, bases, mode):
    """Mide todos los qubits, cada uno en su base {X, Y, Z}."""
    if len(bases) != t.n:
        raise ValueError(f"Se esperaban {t.n} bases y llegaron {len(bases)}")
    work = apply_basis_changes(t.copy(), bases)
    return measure_z_subset(work, range(t.n), mode)


def sample_with_postselection(t, post_qubits, post_bits, rng):
    """Postselecciona un subconjunto y muestrea el resto; None si la probabilidad es cero."""
    post_qubits = list(post_qubits)
    first = measure_z_subset(t, post_qubits, Postselect(post_bits))
    if first is None:
        return None
    rest = [q for q in range(t.n) if q not in set(post_qubits)]
    second = measure_z_subset(first.remaining, range(first.remaining.n), Sample(rng))
    bits = np.zeros(t.n, dtype=np.uint8)
    bits[post_qubits] = post_bits.to_array()
    bits[rest] = second.outcomes.to_array()
    return BitVector.from_array(bits)


# ==========================================
# 4. GRUPOS ESTABILIZADORES Y ORÁCULO SECUENCIAL
# ==========================================
def stabilizer_generators(t):
    return t.stabilizers()


def stabilizer_contains(generators, pauli):
    """¿Pertenece el Pauli (con su signo) al grupo generado?"""
    if not generators:
        return not pauli.x.any() and not pauli.z.any() and pauli.alpha == 0 and pauli.beta == 0
    rows = BitMatrix.from_rows([g.x.concat(g.z) for g in generators])
    coeffs = solve_linear(rows.transpose(), pauli.x.concat(pauli.z))
    if coeffs is None:
        return False
    product = Pauli.identity(pauli.n)
    for i in coeffs.offset.indices():
        product = pauli_mul(product, generators[i])
    return product.alpha == pauli.alpha and product.beta == pauli.beta


def same_stabilizer_group(gens1, gens2):
    """Igualdad de grupos estabilizadores, signos incluidos."""
    if len(gens1) != len(gens2):
        return False
    return all(stabilizer_contains(gens1, g) for g in gens2)


def _ag_sign(alpha, beta, x, z):
    """Signo de la cadena de letras (Y = iXZ) a partir de la forma i^a (-1)^b X^x Z^z."""
    n_y = int((x & z).sum())
    return (beta + ((alpha - n_y) % 4) // 2) % 2


def _ag_g(x1, z1, x2, z2):
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1 and z1 == 0:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


def measure_sequential(t, qubits, rng=None, forced=None):
    """
    Oráculo: mediciones de un qubit a la vez al estilo CHP (rowsum), sin
    eliminar qubits. `forced` fija los resultados aleatorios en orden.

    Devuelve (resultados, posiciones aleatorias, generadores del estado final).
    """
    n = t.n
    xs = t.x.to_array().astype(np.int64)
    zs = t.z.to_array().astype(np.int64)
    p_bits, s_bits = t.p.to_array(), t.s.to_array()
    # filas 0..2n-1 + fila de trabajo 2n
    x = np.vstack([xs, np.zeros((1, n), dtype=np.int64)])
    z = np.vstack([zs, np.zeros((1, n), dtype=np.int64)])
    r = np.array([_ag_sign(p_bits[i], s_bits[i], xs[i], zs[i]) for i in range(2 * n)] + [0], dtype=np.int64)

    def rowsum(h, j):
        total = 2 * r[h] + 2 * r[j] + sum(_ag_g(x[j, c], z[j, c], x[h, c], z[h, c]) for c in range(n))
        r[h] = (total % 4) // 2
        x[h] ^= x[j]
        z[h] ^= z[j]

    outcomes, random_positions = [], []
    forced = list(forced) if forced is not None else None
    for pos, a in enumerate(qubits):
        hits = [p for p in range(n, 2 * n) if x[p, a] == 1]
        if hits:
            q = hits[0]
            for j in range(2 * n):
                if j != q and x[j, a] == 1:
                    rowsum(j, q)
            x[q - n], z[q - n], r[q - n] = x[q].copy(), z[q].copy(), r[q]
            x[q] = 0
            z[q] = 0
            z[q, a] = 1
            if forced is not None:
                bit = forced.pop(0)
            else:
                bit = int(rng.integers(0, 2))
            r[q] = bit
            outcomes.append(bit)
            random_positions.append(pos)
        else:
            x[2 * n] = 0
            z[2 * n] = 0
            r[2 * n] = 0
            for j in range(n):
                if x[j, a] == 1:
                    rowsum(2 * n, j + n)
            outcomes.append(int(r[2 * n]))

    generators = []
    for i in range(n, 2 * n):
        alpha = int((x[i] & z[i]).sum()) & 1
        n_y = int((x[i] & z[i]).sum())
        # invertir _ag_sign: beta = r - ((alpha - n_y) mod 4)/2
        beta = (int(r[i]) + ((alpha - n_y) % 4) // 2) % 2
        generators.append(Pauli(alpha, beta,
                                BitVector.from_array(x[i].astype(np.uint8)),
                                BitVector.from_array(z[i].astype(np.uint8))))
    return BitVector.from_array(outcomes), random_positions, generators
