"""
Oráculo exacto por vector de estado (n pequeño). Índice little-endian: el bit
j del índice es el qubit j; en las claves de las distribuciones el carácter j
es el resultado del qubit j.
"""
import logging

import numpy as np

from config import settings
from src.models.circuit import CliffordCircuit
from src.models.gadget import GssInstance
from src.models.pauli import BASIS_CHANGE, Basis, Gate, GateKind

logger = logging.getLogger(__name__)

_CUTOFF = 1e-12


class DenseState:
    """Vector de 2^n amplitudes complejas."""

    def __init__(self, n, amps=None):
        if n > settings.ORACLE_MAX_QUBITS:
            raise ValueError(f"El oráculo admite hasta {settings.ORACLE_MAX_QUBITS} qubits (llegaron {n})")
        self.n = int(n)
        if amps is None:
            amps = np.zeros(1 << self.n, dtype=np.complex128)
            amps[0] = 1.0
        self.amps = np.asarray(amps, dtype=np.complex128)
        self._index = np.arange(1 << self.n)

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def plus(cls, n):
        return cls(n, np.full(1 << n, 2 ** (-n / 2), dtype=np.complex128))

    def _bit(self, q):
        if not 0 <= q < self.n:
            raise IndexError(f"Qubit {q} fuera de rango (n={self.n})")
        return ((self._index >> q) & 1).astype(bool)

    def norm(self):
        return float(np.linalg.norm(self.amps))

    # ------------------------------------------------------------------
    # Compuertas
    # ------------------------------------------------------------------
    def h(self, q):
        one = self._bit(q)
        a0, a1 = self.amps[~one].copy(), self.amps[one].copy()
        self.amps[~one] = (a0 + a1) / np.sqrt(2)
        self.amps[one] = (a0 - a1) / np.sqrt(2)

    def phase(self, q, factor):
        self.amps[self._bit(q)] *= factor

    def x(self, q):
        one = self._bit(q)
        a0, a1 = self.amps[~one].copy(), self.amps[one].copy()
        self.amps[~one], self.amps[one] = a1, a0

    def cz(self, a, b):
        self.amps[self._bit(a) & self._bit(b)] *= -1

    def cnot(self, control, target):
        c1 = self._bit(control)
        t1 = self._bit(target)
        lo, hi = c1 & ~t1, c1 & t1
        a0, a1 = self.amps[lo].copy(), self.amps[hi].copy()
        self.amps[lo], self.amps[hi] = a1, a0

    def apply(self, gate):
        kind, targets = gate.kind, gate.targets
        q = targets[0]
        if kind == GateKind.H:
            self.h(q)
        elif kind == GateKind.S:
            self.phase(q, 1j)
        elif kind == GateKind.SDG:
            self.phase(q, -1j)
        elif kind == GateKind.Z:
            self.phase(q, -1)
        elif kind == GateKind.X:
            self.x(q)
        elif kind == GateKind.Y:
            # Y = i X Z
            self.phase(q, -1)
            self.x(q)
            self.amps *= 1j
        elif kind == GateKind.Y_BASIS_CHANGE:
            self.phase(q, -1j)
            self.h(q)
        elif kind == GateKind.CZ:
            self.cz(*targets)
        else:
            self.cnot(*targets)
        return self

    def apply_all(self, gates):
        for gate in gates:
            self.apply(gate)
        return self

    def rotate_to(self, bases):
        for q, basis in enumerate(bases):
            kind = BASIS_CHANGE[Basis(basis)]
            if kind is not None:
                self.apply(Gate(kind, (q,)))
        return self

    # ------------------------------------------------------------------
    # Probabilidades
    # ------------------------------------------------------------------
    def probabilities(self):
        return np.abs(self.amps) ** 2

    def key(self, index, qubits=None):
        qubits = range(self.n) if qubits is None else qubits
        return ''.join(str((index >> q) & 1) for q in qubits)

    def distribution(self, postselect=None):
        """
        Distribución exacta en la base computacional, condicionada a
        `postselect` {qubit: bit} y marginalizada a los qubits restantes.
        Devuelve (distribución, probabilidad de la postselección).
        """
        probs = self.probabilities()
        postselect = dict(postselect or {})
        keep = np.ones(len(probs), dtype=bool)
        for q, b in postselect.items():
            keep &= self._bit(int(q)) == bool(b)
        p_post = float(probs[keep].sum())
        if p_post < _CUTOFF:
            return {}, 0.0
        sampled = [q for q in range(self.n) if q not in postselect]
        out = {}
        for index in np.flatnonzero(keep & (probs > _CUTOFF)):
            k = self.key(int(index), sampled)
            out[k] = out.get(k, 0.0) + float(probs[index]) / p_post
        return out, p_post


def graph_state_vector(g):
    state = DenseState.plus(g.n)
    for u, v in g.edges():
        state.cz(u, v)
    return state


def graph_distribution(inst):
    """Distribución exacta de una GssInstance: (dist sobre los vértices muestreados, p_𝒫(m))."""
    state = graph_state_vector(inst.graph).rotate_to(inst.bases)
    return state.distribution(inst.postselect)


def circuit_state(c):
    return DenseState.zero(c.n).apply_all(c.gates)


def circuit_distribution(c):
    dist, _ = circuit_state(c).distribution()
    return dist


def statevector_oracle(source, bases=None, postselect=None):
    """Fachada: grafo + bases (con postselección opcional) o circuito de Clifford."""
    if isinstance(source, CliffordCircuit):
        return circuit_distribution(source)
    if isinstance(source, GssInstance):
        return graph_distribution(source)[0]
    if bases is None:
        raise ValueError("Para un grafo hay que indicar las bases de medición")
    return graph_distribution(GssInstance(source, bases, postselect or {}))[0]
