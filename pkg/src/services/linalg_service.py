"""
Álgebra lineal densa sobre F2: producto, factorización LSP, inversa generalizada,
espacios afines de soluciones y muestreo uniforme.
"""
import logging

import numpy as np

from config import settings
from src.models.affine import AffineSubspace, LspFactors, RowReduceResult
from src.models.bits import BitMatrix, BitVector, n_words

logger = logging.getLogger(__name__)

_ONE = np.uint64(1)


def _bit_column(words, j):
    return (words[:, j >> 6] >> np.uint64(j & 63)) & _ONE


# ==========================================
# PRODUCTO
# ==========================================
def mat_mul(a, b, four_russians=None):
    """Producto exacto sobre F2. El kernel de Cuatro Rusos se activa por configuración."""
    if a.cols != b.rows:
        raise ValueError(f"mat_mul: dimensiones incompatibles {a.shape} x {b.shape}")
    if four_russians is None:
        four_russians = settings.FOUR_RUSSIANS

    out = np.zeros((a.rows, n_words(b.cols)), dtype=np.uint64)
    if a.rows == 0 or a.cols == 0 or b.cols == 0:
        return BitMatrix(a.rows, b.cols, out)

    dense_a = a.to_array()
    if four_russians:
        _mul_four_russians(dense_a, b.words, out, settings.FOUR_RUSSIANS_CHUNK)
    else:
        for j in range(a.cols):
            mask = dense_a[:, j].astype(bool)
            if mask.any():
                out[mask] ^= b.words[j]
    return BitMatrix(a.rows, b.cols, out)


def _mul_four_russians(dense_a, b_words, out, chunk):
    k = dense_a.shape[1]
    for base in range(0, k, chunk):
        width = min(chunk, k - base)
        # Tabla de las 2^width combinaciones de filas de B, construida por duplicación
        table = np.zeros((1 << width, b_words.shape[1]), dtype=np.uint64)
        for t in range(width):
            size = 1 << t
            table[size:2 * size] = table[:size] ^ b_words[base + t]
        weights = (1 << np.arange(width)).astype(np.int64)
        idx = dense_a[:, base:base + width].astype(np.int64) @ weights
        out ^= table[idx]


# ==========================================
# ELIMINACIÓN
# ==========================================
def row_reduce(m):
    """Forma escalonada reducida con seguimiento de la transformación (R = T·m)."""
    work = m.words.copy()
    trans = BitMatrix.identity(m.rows).words.copy()
    pivots = []
    row = 0
    for col in range(m.cols):
        if row == m.rows:
            break
        below = np.flatnonzero(_bit_column(work[row:], col))
        if below.size == 0:
            continue
        piv = row + int(below[0])
        if piv != row:
            work[[row, piv]] = work[[piv, row]]
            trans[[row, piv]] = trans[[piv, row]]
        hits = _bit_column(work, col).astype(bool)
        hits[row] = False
        work[hits] ^= work[row]
        trans[hits] ^= trans[row]
        pivots.append(col)
        row += 1
    return RowReduceResult(
        matrix=BitMatrix(m.rows, m.cols, work),
        transform=BitMatrix(m.rows, m.rows, trans),
        rank=len(pivots),
        pivots=tuple(pivots),
    )


def rank(m):
    return row_reduce(m).rank


def inverse(m):
    """Inversa de una matriz cuadrada invertible."""
    if m.rows != m.cols:
        raise ValueError(f"inverse: matriz no cuadrada {m.shape}")
    reduced = row_reduce(m)
    if reduced.rank != m.rows:
        raise ValueError("inverse: matriz singular")
    return reduced.transform


def lsp_factorize(m):
    """
    Factorización L·S·P sin intercambio de filas.

    Cada fila toma como pivote su primera columna no nula y se elimina esa columna
    de las filas siguientes. Las filas pivote son exactamente las filas linealmente
    independientes de las anteriores.
    """
    work = m.words.copy()
    l = np.eye(m.rows, dtype=np.uint8)
    pivot_rows, pivot_cols = [], []

    for i in range(m.rows):
        if not work[i].any():
            continue
        nz_word = int(np.flatnonzero(work[i])[0])
        word = int(work[i, nz_word])
        p = nz_word * 64 + ((word & -word).bit_length() - 1)
        pivot_rows.append(i)
        pivot_cols.append(p)
        if i + 1 < m.rows:
            hits = np.flatnonzero(_bit_column(work[i + 1:], p)) + i + 1
            work[hits] ^= work[i]
            l[hits, i] = 1

    used = set(pivot_cols)
    perm = tuple(pivot_cols + [j for j in range(m.cols) if j not in used])
    s_prime = BitMatrix(m.rows, m.cols, work)
    return LspFactors(
        l=BitMatrix.from_array(l),
        s=s_prime.take_cols(perm),
        perm=perm,
        rank=len(pivot_rows),
        pivot_rows=tuple(pivot_rows),
        pivot_cols=tuple(pivot_cols),
    )


# ==========================================
# INVERSA GENERALIZADA Y SISTEMAS
# ==========================================
def generalized_inverse(c):
    """C^g con C·C^g·C = C. Si hay más filas que columnas se trabaja con Cᵀ."""
    if c.rows > c.cols:
        return generalized_inverse(c.transpose()).transpose()

    reduced = row_reduce(c)
    g = np.zeros((c.cols, c.rows), dtype=np.uint8)
    transform = reduced.transform.to_array()
    for k, col in enumerate(reduced.pivots):
        g[col] = transform[k]
    return BitMatrix.from_array(g)


def column_basis(m):
    """Índices de un conjunto maximal de columnas independientes (primera aparición)."""
    return list(row_reduce(m).pivots)


def solve_linear(c, d):
    """
    Espacio afín {x : Cx = d}, o None si el sistema es inconsistente.

    Consistencia: C·C^g·d = d. Solución: C^g d + columnas de (I + C^g C).
    """
    if c.rows != d.length:
        raise ValueError(f"solve_linear: {c.rows} filas y d de {d.length} bits")
    g = generalized_inverse(c)
    offset = g.mul_vec(d)
    if c.mul_vec(offset) != d:
        return None
    if c.cols == 0:
        return AffineSubspace.point(offset)
    directions = BitMatrix.identity(c.cols) ^ mat_mul(g, c)
    keep = column_basis(directions)
    return AffineSubspace(directions.take_cols(keep), offset)


def sample_uniform(space, rng):
    """Elemento uniforme del espacio afín vía un vector de coeficientes uniforme."""
    coeffs = rng.integers(0, 2, size=space.dim, dtype=np.uint8)
    return space.element(BitVector.from_array(coeffs))


def affine_contains(space, vec):
    return solve_linear(space.basis, vec ^ space.offset) is not None


def affine_equal(s1, s2):
    """Igualdad como conjuntos."""
    if s1.ambient_dim != s2.ambient_dim or s1.dim != s2.dim:
        return False
    if not affine_contains(s1, s2.offset):
        return False
    return all(affine_contains(s1, s2.offset ^ s2.basis.column(j)) for j in range(s2.dim))


def reduce_columns(basis):
    """Descarta columnas dependientes de una base."""
    if basis.cols == 0:
        return basis
    keep = column_basis(basis)
    return basis if len(keep) == basis.cols else basis.take_cols(keep)
