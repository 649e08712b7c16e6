from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

from src.models.bits import BitVector


class Basis(str, Enum):
    X = 'X'
    Y = 'Y'
    Z = 'Z'


def parse_bases(text, n=None):
    """'XYZX' -> [Basis.X, Basis.Y, ...]"""
    text = text.strip().upper()
    try:
        bases = [Basis(ch) for ch in text]
    except ValueError:
        raise ValueError(f"Base de medición inválida en '{text}' (se aceptan X, Y, Z)")
    if n is not None and len(bases) != n:
        raise ValueError(f"Se esperaban {n} bases y llegaron {len(bases)}")
    return bases


class GateKind(str, Enum):
    H = 'H'
    S = 'S'
    SDG = 'SDG'
    X = 'X'
    Y = 'Y'
    Z = 'Z'
    CZ = 'CZ'
    CNOT = 'CNOT'
    Y_BASIS_CHANGE = 'YB'  # H·S†: lleva la base Y a la computacional

    @property
    def arity(self):
        return 2 if self in (GateKind.CZ, GateKind.CNOT) else 1


# Cambio de base que lleva cada base de medición a la computacional
BASIS_CHANGE = {Basis.X: GateKind.H, Basis.Y: GateKind.Y_BASIS_CHANGE, Basis.Z: None}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    targets: Tuple[int, ...]

    def __post_init__(self):
        if len(self.targets) != self.kind.arity:
            raise ValueError(f"La compuerta {self.kind.value} actúa sobre {self.kind.arity} qubit(s)")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"Qubits repetidos en {self.kind.value}{self.targets}")

    @classmethod
    def of(cls, name, *targets):
        return cls(GateKind(name.upper()), tuple(int(t) for t in targets))

    def __str__(self):
        return f"{self.kind.value}{list(self.targets)}"


@dataclass
class Pauli:
    """i^alpha (-1)^beta X^x Z^z."""
    alpha: int
    beta: int
    x: BitVector
    z: BitVector = field(default=None)

    def __post_init__(self):
        if self.z is None:
            self.z = BitVector.zeros(self.x.length)
        if self.x.length != self.z.length:
            raise ValueError(f"Componentes X/Z de longitudes {self.x.length} y {self.z.length}")
        self.alpha &= 1
        self.beta &= 1

    @property
    def n(self):
        return self.x.length

    @classmethod
    def identity(cls, n):
        return cls(0, 0, BitVector.zeros(n), BitVector.zeros(n))

    @classmethod
    def from_bits(cls, x, z, beta=0):
        """Forma hermítica canónica para las componentes dadas."""
        return cls(x.dot(z), beta, x.copy(), z.copy())

    @classmethod
    def from_label(cls, label):
        """'-XIZY' -> Pauli; cada Y aporta i·X·Z."""
        label = label.strip()
        beta = 0
        if label[:1] in '+-':
            beta = 1 if label[0] == '-' else 0
            label = label[1:]
        xs, zs, n_y = [], [], 0
        for ch in label.upper():
            if ch not in 'IXYZ':
                raise ValueError(f"Letra de Pauli inválida '{ch}'")
            xs.append(1 if ch in 'XY' else 0)
            zs.append(1 if ch in 'YZ' else 0)
            n_y += ch == 'Y'
        # i^n_y = i^(n_y mod 2) * (-1)^(n_y // 2 mod 2)
        return cls(n_y & 1, beta ^ ((n_y >> 1) & 1),
                   BitVector.from_array(xs), BitVector.from_array(zs))

    def is_hermitian(self):
        return self.alpha == self.x.dot(self.z)

    def sign(self):
        """Signo real (+1/-1) de un Pauli hermítico escrito con letras X, Y, Z."""
        n_y = (self.x & self.z).weight()
        # i^alpha (-1)^beta X^x Z^z = (-1)^r * prod(letras) con Y = i X Z
        r = (self.beta + ((self.alpha - n_y) % 4) // 2) % 2
        return -1 if r else 1

    def label(self):
        xs, zs = self.x.to_array(), self.z.to_array()
        letters = ''.join('IXZY'[int(a) + 2 * int(b)] for a, b in zip(xs, zs))
        return ('-' if self.sign() < 0 else '+') + letters

    def copy(self):
        return Pauli(self.alpha, self.beta, self.x.copy(), self.z.copy())

    def __eq__(self, other):
        if not isinstance(other, Pauli):
            return NotImplemented
        return (self.alpha, self.beta) == (other.alpha, other.beta) and self.x == other.x and self.z == other.z

    def __repr__(self):
        return f"Pauli({self.label()}, alpha={self.alpha}, beta={self.beta})"
