from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from src.models.bits import BitMatrix, BitVector
from src.models.pauli import Basis


@dataclass
class GridSpec:
    """Grilla ℓ x ℓ; la celda (r, c) es el vértice r*ℓ + c."""
    side: int
    bases: List[Basis]

    def __post_init__(self):
        if self.side < 1:
            raise ValueError(f"El lado de la grilla debe ser >= 1 (llegó {self.side})")
        self.bases = [Basis(b) for b in self.bases]
        if len(self.bases) != self.side * self.side:
            raise ValueError(f"Se esperaban {self.side ** 2} bases y llegaron {len(self.bases)}")

    @classmethod
    def random_xy(cls, side, rng):
        """Bases X o Y al azar por celda, como en los benchmarks."""
        picks = rng.integers(0, 2, size=side * side)
        return cls(side, [Basis.X if p == 0 else Basis.Y for p in picks])

    @property
    def n(self):
        return self.side * self.side


@dataclass
class SymmetricSystem:
    """A x = b con A simétrica de diagonal cero (matriz de adyacencia)."""
    a: BitMatrix
    b: BitVector

    def __post_init__(self):
        if self.a.rows != self.a.cols:
            raise ValueError(f"A debe ser cuadrada (llegó {self.a.shape})")
        if not self.a.is_symmetric():
            raise ValueError("A debe ser simétrica")
        if self.a.diagonal().any():
            raise ValueError("A debe tener diagonal cero")
        if self.b.length != self.a.rows:
            raise ValueError(f"b de {self.b.length} bits para A de {self.a.rows} filas")

    @classmethod
    def from_arrays(cls, a, b):
        return cls(BitMatrix.from_array(np.asarray(a, dtype=np.uint8)),
                   BitVector.from_array(np.asarray(b, dtype=np.uint8)))

    def residual(self, x):
        return self.a.mul_vec(x) ^ self.b


@dataclass
class GridRun:
    outcome: BitVector
    peak_live: int
    algo: Optional[str] = None
    seconds: float = 0.0
