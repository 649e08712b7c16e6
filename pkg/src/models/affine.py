from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.models.bits import BitMatrix, BitVector


@dataclass
class AffineSubspace:
    """Conjunto {E z + f : z en F2^k}; las columnas de E son independientes."""
    basis: BitMatrix
    offset: BitVector

    def __post_init__(self):
        if self.basis.rows != self.offset.length:
            raise ValueError(f"Base con {self.basis.rows} filas y offset de {self.offset.length} bits")

    @property
    def ambient_dim(self):
        return self.offset.length

    @property
    def dim(self):
        return self.basis.cols

    @classmethod
    def point(cls, offset):
        return cls(BitMatrix.zeros(offset.length, 0), offset.copy())

    @classmethod
    def full(cls, n):
        return cls(BitMatrix.identity(n), BitVector.zeros(n))

    def element(self, coeffs):
        """E·coeffs + f."""
        return self.basis.mul_vec(coeffs) ^ self.offset

    def elements(self):
        """Enumera los 2^k elementos (solo para dimensiones pequeñas)."""
        k = self.dim
        if k > 20:
            raise ValueError(f"Demasiados elementos para enumerar: 2^{k}")
        out = []
        for mask in range(1 << k):
            coeffs = BitVector.from_array([(mask >> i) & 1 for i in range(k)])
            out.append(self.element(coeffs))
        return out


@dataclass(frozen=True)
class LspFactors:
    """m = L · S · P con L triangular inferior unitaria y S escalonada."""
    l: BitMatrix
    s: BitMatrix
    perm: Tuple[int, ...]
    rank: int
    pivot_rows: Tuple[int, ...]
    pivot_cols: Tuple[int, ...]

    @property
    def p(self):
        """Matriz de permutación con P[k, perm[k]] = 1."""
        out = np.zeros((len(self.perm), len(self.perm)), dtype=np.uint8)
        for k, j in enumerate(self.perm):
            out[k, j] = 1
        return BitMatrix.from_array(out)


@dataclass(frozen=True)
class RowReduceResult:
    """Forma escalonada reducida R = T · m, con T invertible."""
    matrix: BitMatrix
    transform: BitMatrix
    rank: int
    pivots: Tuple[int, ...]
