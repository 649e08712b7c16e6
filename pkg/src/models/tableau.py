from dataclasses import dataclass
from typing import Any

import numpy as np

from src.models.bits import BitMatrix, BitVector
from src.models.pauli import Pauli


class Tableau:
    """
    Representación (M, p, s) de un Clifford o de un estado estabilizador.

    Filas 0..n-1: imágenes de X_j (desestabilizadores).
    Filas n..2n-1: imágenes de Z_j (estabilizadores).
    La fila i es i^p_i (-1)^s_i X^x_i Z^z_i.
    """

    __slots__ = ('n', 'x', 'z', 'p', 's')

    def __init__(self, n, x, z, p, s):
        self.n = int(n)
        if x.shape != (2 * self.n, self.n) or z.shape != (2 * self.n, self.n):
            raise ValueError(f"Bloques X/Z con forma {x.shape}/{z.shape} para n={self.n}")
        if p.length != 2 * self.n or s.length != 2 * self.n:
            raise ValueError("Vectores de fase/signo con longitud distinta de 2n")
        self.x = x
        self.z = z
        self.p = p
        self.s = s

    # ------------------------------------------------------------------
    # Constructores
    # ------------------------------------------------------------------
    @classmethod
    def identity(cls, n):
        """Clifford identidad; como estado es |0^n>."""
        eye = np.eye(n, dtype=np.uint8)
        zero = np.zeros((n, n), dtype=np.uint8)
        return cls(n,
                   BitMatrix.from_array(np.vstack([eye, zero])),
                   BitMatrix.from_array(np.vstack([zero, eye])),
                   BitVector.zeros(2 * n), BitVector.zeros(2 * n))

    @classmethod
    def plus_state(cls, n):
        """|+^n>: estabilizadores X_j, desestabilizadores Z_j."""
        eye = np.eye(n, dtype=np.uint8)
        zero = np.zeros((n, n), dtype=np.uint8)
        return cls(n,
                   BitMatrix.from_array(np.vstack([zero, eye])),
                   BitMatrix.from_array(np.vstack([eye, zero])),
                   BitVector.zeros(2 * n), BitVector.zeros(2 * n))

    @classmethod
    def from_rows(cls, x_rows, z_rows, p=None, s=None):
        """Construye desde listas de cadenas '01..' (útil para tablas pequeñas)."""
        x = BitMatrix.from_rows(x_rows)
        z = BitMatrix.from_rows(z_rows)
        n = x.cols
        p = p if p is not None else BitVector.zeros(2 * n)
        s = s if s is not None else BitVector.zeros(2 * n)
        if isinstance(p, str):
            p = BitVector.from_string(p)
        if isinstance(s, str):
            s = BitVector.from_string(s)
        return cls(n, x, z, p, s)

    # ------------------------------------------------------------------
    # Vistas
    # ------------------------------------------------------------------
    @property
    def m(self):
        """Matriz 2n x 2n [[A, B], [C, D]]."""
        return BitMatrix.hstack([self.x, self.z])

    def row_pauli(self, i):
        return Pauli(self.p[i], self.s[i], self.x.row(i), self.z.row(i))

    def stabilizers(self):
        return [self.row_pauli(self.n + j) for j in range(self.n)]

    def destabilizers(self):
        return [self.row_pauli(j) for j in range(self.n)]

    def copy(self):
        return Tableau(self.n, self.x.copy(), self.z.copy(), self.p.copy(), self.s.copy())

    def __eq__(self, other):
        if not isinstance(other, Tableau):
            return NotImplemented
        return (self.n == other.n and self.x == other.x and self.z == other.z
                and self.p == other.p and self.s == other.s)

    def __repr__(self):
        return f"Tableau(n={self.n})"

    def __str__(self):
        lines = []
        for i in range(2 * self.n):
            lines.append(self.row_pauli(i).label())
            if i == self.n - 1:
                lines.append('-' * (self.n + 1))
        return '\n'.join(lines)


@dataclass
class Sample:
    """Modo de medición: resultados aleatorios según Born."""
    rng: Any


@dataclass
class Postselect:
    """Modo de medición: resultados forzados (uno por qubit medido)."""
    bits: BitVector


@dataclass
class MeasurementResult:
    outcomes: BitVector
    remaining: Tableau
