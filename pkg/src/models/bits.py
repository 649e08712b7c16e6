"""
Contenedores de bits sobre F2 empaquetados en palabras de 64 bits.

El bit j de una fila vive en la palabra j >> 6, posición j & 63 (little endian).
Los bits sobrantes de la última palabra siempre quedan en cero.
"""
import numpy as np

WORD = 64
_ONE = np.uint64(1)
_FOLD_SHIFTS = tuple(np.uint64(s) for s in (32, 16, 8, 4, 2, 1))


def n_words(n_bits):
    return (n_bits + WORD - 1) // WORD


def pack_bits(bits):
    """Empaqueta un arreglo (..., n) de 0/1 en palabras uint64 (..., ceil(n/64))."""
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.shape[-1]
    nw = n_words(n)
    lead = bits.shape[:-1]
    if nw == 0:
        return np.zeros(lead + (0,), dtype=np.uint64)
    padded = np.zeros(lead + (nw * WORD,), dtype=np.uint8)
    padded[..., :n] = bits & 1
    packed = np.ascontiguousarray(np.packbits(padded, axis=-1, bitorder='little'))
    return packed.view('<u8').astype(np.uint64)


def unpack_bits(words, n_bits):
    """Inversa de pack_bits: devuelve un arreglo uint8 (..., n_bits)."""
    words = np.asarray(words, dtype=np.uint64)
    lead = words.shape[:-1]
    if n_bits == 0:
        return np.zeros(lead + (0,), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words.astype('<u8')).view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, bitorder='little')[..., :n_bits]


def parity(words):
    """Paridad (XOR de todos los bits) sobre el último eje."""
    words = np.asarray(words, dtype=np.uint64)
    if words.shape[-1] == 0:
        return np.zeros(words.shape[:-1], dtype=np.uint8)
    acc = np.bitwise_xor.reduce(words, axis=-1)
    for shift in _FOLD_SHIFTS:
        acc = acc ^ (acc >> shift)
    return (acc & _ONE).astype(np.uint8)


def popcount(words):
    """Cuenta de bits encendidos sobre el último eje (SWAR)."""
    w = np.asarray(words, dtype=np.uint64)
    w = w - ((w >> np.uint64(1)) & np.uint64(0x5555555555555555))
    w = (w & np.uint64(0x3333333333333333)) + ((w >> np.uint64(2)) & np.uint64(0x3333333333333333))
    w = (w + (w >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    w = (w * np.uint64(0x0101010101010101)) >> np.uint64(56)
    return w.sum(axis=-1).astype(np.int64)


class BitVector:
    """Vector de bits de longitud fija."""

    __slots__ = ('length', 'words')

    def __init__(self, length, words=None):
        self.length = int(length)
        if words is None:
            words = np.zeros(n_words(self.length), dtype=np.uint64)
        self.words = np.asarray(words, dtype=np.uint64)

    # ------------------------------------------------------------------
    # Constructores
    # ------------------------------------------------------------------
    @classmethod
    def zeros(cls, length):
        return cls(length)

    @classmethod
    def from_array(cls, bits):
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
        return cls(bits.shape[0], pack_bits(bits))

    @classmethod
    def from_string(cls, text):
        text = text.strip()
        if any(ch not in '01' for ch in text):
            raise ValueError(f"Cadena de bits inválida: '{text}'")
        return cls.from_array([int(ch) for ch in text])

    @classmethod
    def from_indices(cls, length, indices):
        bits = np.zeros(length, dtype=np.uint8)
        bits[list(indices)] = 1
        return cls.from_array(bits)

    # ------------------------------------------------------------------
    # Acceso
    # ------------------------------------------------------------------
    def to_array(self):
        return unpack_bits(self.words, self.length)

    def __len__(self):
        return self.length

    def __getitem__(self, i):
        if not 0 <= i < self.length:
            raise IndexError(f"Bit {i} fuera de rango (longitud {self.length})")
        return int((self.words[i >> 6] >> np.uint64(i & 63)) & _ONE)

    def set(self, i, bit):
        if not 0 <= i < self.length:
            raise IndexError(f"Bit {i} fuera de rango (longitud {self.length})")
        mask = _ONE << np.uint64(i & 63)
        if bit & 1:
            self.words[i >> 6] |= mask
        else:
            self.words[i >> 6] &= ~mask

    def flip(self, i):
        self.set(i, self[i] ^ 1)

    def indices(self):
        return [int(i) for i in np.flatnonzero(self.to_array())]

    def weight(self):
        return int(popcount(self.words))

    def any(self):
        return bool(self.words.any())

    def dot(self, other):
        """Producto interno sobre F2."""
        self._check(other)
        return int(parity(self.words & other.words))

    def take(self, indices):
        return BitVector.from_array(self.to_array()[list(indices)])

    def concat(self, other):
        return BitVector.from_array(np.concatenate([self.to_array(), other.to_array()]))

    def copy(self):
        return BitVector(self.length, self.words.copy())

    # ------------------------------------------------------------------
    # Aritmética
    # ------------------------------------------------------------------
    def _check(self, other):
        if self.length != other.length:
            raise ValueError(f"Longitudes distintas: {self.length} vs {other.length}")

    def __xor__(self, other):
        self._check(other)
        return BitVector(self.length, self.words ^ other.words)

    def __and__(self, other):
        self._check(other)
        return BitVector(self.length, self.words & other.words)

    def __or__(self, other):
        self._check(other)
        return BitVector(self.length, self.words | other.words)

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.length, self.words.tobytes()))

    def __str__(self):
        return ''.join(str(b) for b in self.to_array())

    def __repr__(self):
        return f"BitVector('{self}')"


class BitMatrix:
    """Matriz densa sobre F2, filas empaquetadas (rows x ceil(cols/64) palabras)."""

    __slots__ = ('rows', 'cols', 'words')

    def __init__(self, rows, cols, words=None):
        self.rows = int(rows)
        self.cols = int(cols)
        if words is None:
            words = np.zeros((self.rows, n_words(self.cols)), dtype=np.uint64)
        self.words = np.asarray(words, dtype=np.uint64).reshape(self.rows, n_words(self.cols))

    # ------------------------------------------------------------------
    # Constructores
    # ------------------------------------------------------------------
    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        return cls.from_array(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_array(cls, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise ValueError(f"Se esperaba un arreglo 2D, llegó {bits.ndim}D")
        return cls(bits.shape[0], bits.shape[1], pack_bits(bits))

    @classmethod
    def from_rows(cls, rows, cols=None):
        """Acepta cadenas '0101' o BitVectors."""
        rows = list(rows)
        if not rows:
            return cls(0, cols or 0)
        if isinstance(rows[0], BitVector):
            width = rows[0].length
            words = np.vstack([r.words for r in rows]) if width else None
            return cls(len(rows), width, words)
        return cls.from_array(np.array([[int(ch) for ch in r.strip()] for r in rows], dtype=np.uint8))

    @classmethod
    def outer(cls, u, v):
        """u vᵀ para BitVectors u (filas) y v (columnas)."""
        mask = u.to_array().astype(bool)
        words = np.zeros((u.length, n_words(v.length)), dtype=np.uint64)
        words[mask] = v.words
        return cls(u.length, v.length, words)

    # ------------------------------------------------------------------
    # Acceso
    # ------------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def to_array(self):
        return unpack_bits(self.words, self.cols)

    def get(self, i, j):
        return int((self.words[i, j >> 6] >> np.uint64(j & 63)) & _ONE)

    def set(self, i, j, bit):
        mask = _ONE << np.uint64(j & 63)
        if bit & 1:
            self.words[i, j >> 6] |= mask
        else:
            self.words[i, j >> 6] &= ~mask

    def row(self, i):
        return BitVector(self.cols, self.words[i].copy())

    def set_row(self, i, vec):
        self.words[i] = vec.words

    def column_bits(self, j):
        """Columna j como arreglo uint8 (sin empaquetar)."""
        return ((self.words[:, j >> 6] >> np.uint64(j & 63)) & _ONE).astype(np.uint8)

    def column(self, j):
        return BitVector.from_array(self.column_bits(j))

    def get_columns(self, indices):
        """Submatriz densa rows x len(indices)."""
        if len(indices) == 0:
            return np.zeros((self.rows, 0), dtype=np.uint8)
        return np.stack([self.column_bits(j) for j in indices], axis=1)

    def set_columns(self, indices, dense):
        dense = np.asarray(dense, dtype=np.uint64)
        for k, j in enumerate(indices):
            w, shift = j >> 6, np.uint64(j & 63)
            self.words[:, w] = (self.words[:, w] & ~(_ONE << shift)) | (dense[:, k] << shift)

    def diagonal(self):
        return BitVector.from_array([self.get(i, i) for i in range(min(self.rows, self.cols))])

    def any(self):
        return bool(self.words.any())

    def copy(self):
        return BitMatrix(self.rows, self.cols, self.words.copy())

    # ------------------------------------------------------------------
    # Transformaciones
    # ------------------------------------------------------------------
    def transpose(self):
        return BitMatrix.from_array(self.to_array().T)

    @property
    def T(self):
        return self.transpose()

    def take_rows(self, indices):
        indices = list(indices)
        return BitMatrix(len(indices), self.cols, self.words[indices] if indices else None)

    def take_cols(self, indices):
        indices = list(indices)
        return BitMatrix.from_array(self.to_array()[:, indices].reshape(self.rows, len(indices)))

    def delete_rows(self, indices):
        drop = set(indices)
        return self.take_rows([i for i in range(self.rows) if i not in drop])

    def delete_cols(self, indices):
        drop = set(indices)
        return self.take_cols([j for j in range(self.cols) if j not in drop])

    @staticmethod
    def vstack(blocks):
        blocks = list(blocks)
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("vstack: número de columnas distinto")
        return BitMatrix(sum(b.rows for b in blocks), cols, np.vstack([b.words for b in blocks]))

    @staticmethod
    def hstack(blocks):
        blocks = list(blocks)
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise ValueError("hstack: número de filas distinto")
        return BitMatrix.from_array(np.hstack([b.to_array() for b in blocks]))

    @staticmethod
    def block_diag(blocks):
        blocks = list(blocks)
        out = np.zeros((sum(b.rows for b in blocks), sum(b.cols for b in blocks)), dtype=np.uint8)
        r = c = 0
        for b in blocks:
            out[r:r + b.rows, c:c + b.cols] = b.to_array()
            r += b.rows
            c += b.cols
        return BitMatrix.from_array(out)

    def is_symmetric(self):
        return self.rows == self.cols and np.array_equal(self.to_array(), self.to_array().T)

    # ------------------------------------------------------------------
    # Aritmética
    # ------------------------------------------------------------------
    def __xor__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"Dimensiones distintas: {self.shape} vs {other.shape}")
        return BitMatrix(self.rows, self.cols, self.words ^ other.words)

    def __and__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"Dimensiones distintas: {self.shape} vs {other.shape}")
        return BitMatrix(self.rows, self.cols, self.words & other.words)

    def __matmul__(self, other):
        # Importación diferida para evitar ciclos (models <- services)
        from src.services.linalg_service import mat_mul
        if isinstance(other, BitVector):
            return self.mul_vec(other)
        return mat_mul(self, other)

    def mul_vec(self, vec):
        if vec.length != self.cols:
            raise ValueError(f"mul_vec: {self.shape} x {vec.length}")
        return BitVector.from_array(parity(self.words & vec.words[None, :]))

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"

    def __str__(self):
        return '\n'.join(''.join(str(b) for b in r) for r in self.to_array())
