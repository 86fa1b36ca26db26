"""Dense matrices over F_p: products, inverses, ranks and submatrices.

All elimination is exact Gaussian elimination; the pivot in a column is the
first usable nonzero entry.  Inversion is blocked Gauss-Jordan: each panel of
columns is reduced with vectorised row operations, and the accumulated row
transform is then applied to the remaining columns with one matrix product.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ._kernels import U64, as_residues
from .errors import DimensionError, FieldMismatchError, ParameterError, SingularError
from .field import FieldElement, PrimeField, default_field

__all__ = [
    "FpMatrix",
    "IndexSet",
    "bounded_rank",
    "inverse",
    "low_rank_inverse_update",
    "matmul",
    "rank",
    "submatrix",
    "transpose",
]

IndexSet = Sequence[int]

_PANEL = 64
# below this many entries rank is computed on Python ints
_SMALL_RANK_ENTRIES = 256


class FpMatrix:
    """Immutable dense matrix over F_p, stored row-major as ``uint64`` residues."""

    __slots__ = ("_data", "field")

    def __init__(self, data, field: PrimeField | None = None):
        self.field = field if field is not None else default_field()
        arr = as_residues(data, self.field.p)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got shape {arr.shape}")
        arr = np.ascontiguousarray(arr, dtype=U64)
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray, field: PrimeField) -> FpMatrix:
        # trusted constructor for arrays already holding canonical residues
        obj = cls.__new__(cls)
        obj.field = field
        arr = np.ascontiguousarray(arr, dtype=U64)
        arr.flags.writeable = False
        obj._data = arr
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int, field: PrimeField | None = None) -> FpMatrix:
        field = field if field is not None else default_field()
        return cls._wrap(np.zeros((rows, cols), dtype=U64), field)

    @classmethod
    def identity(cls, n: int, field: PrimeField | None = None) -> FpMatrix:
        field = field if field is not None else default_field()
        return cls._wrap(np.eye(n, dtype=U64), field)

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator, field: PrimeField | None = None) -> FpMatrix:
        field = field if field is not None else default_field()
        return cls._wrap(field.random_array(rng, (rows, cols)), field)

    @property
    def data(self) -> np.ndarray:
        """Read-only ``uint64`` view of the entries."""
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def T(self) -> FpMatrix:
        return transpose(self)

    def __getitem__(self, idx) -> FieldElement:
        i, j = idx
        return FieldElement(int(self._data[i, j]), self.field)

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self._data]

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.field.p == other.field.p and np.array_equal(self._data, other._data)

    __hash__ = None

    def __matmul__(self, other: FpMatrix) -> FpMatrix:
        return matmul(self, other)

    def __add__(self, other: FpMatrix) -> FpMatrix:
        _same_shape(self, other)
        return FpMatrix._wrap(self.field.ops.add(self._data, other._data), self.field)

    def __sub__(self, other: FpMatrix) -> FpMatrix:
        _same_shape(self, other)
        return FpMatrix._wrap(self.field.ops.sub(self._data, other._data), self.field)

    def __neg__(self) -> FpMatrix:
        return FpMatrix._wrap(self.field.ops.neg(self._data), self.field)

    def __repr__(self):
        return f"FpMatrix({self.rows}x{self.cols} mod {self.field.p})"


def _same_field(a: FpMatrix, b: FpMatrix) -> None:
    if a.field.p != b.field.p:
        raise FieldMismatchError(f"matrices over F_{a.field.p} and F_{b.field.p}")


def _same_shape(a: FpMatrix, b: FpMatrix) -> None:
    _same_field(a, b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")


def matmul(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    _same_field(a, b)
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return FpMatrix._wrap(a.field.ops.matmul(a.data, b.data), a.field)


def transpose(a: FpMatrix) -> FpMatrix:
    return FpMatrix._wrap(a.data.T, a.field)


def submatrix(a: FpMatrix, rows: IndexSet, cols: IndexSet) -> FpMatrix:
    """``a[S, T]`` with rows and columns in the order the index sets list them."""
    r = _index_array(rows, a.rows, "row")
    c = _index_array(cols, a.cols, "column")
    return FpMatrix._wrap(a.data[np.ix_(r, c)], a.field)


def _index_array(idx: IndexSet, bound: int, what: str) -> np.ndarray:
    arr = np.asarray(list(idx), dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= bound):
        raise IndexError(f"{what} index out of range [0, {bound})")
    if np.unique(arr).size != arr.size:
        raise ParameterError(f"duplicate {what} indices")
    return arr


# -- rank ---------------------------------------------------------------------


def _rank_python(rows: list[list[int]], p: int, limit: int) -> int:
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        if rank == limit or rank == len(rows):
            break
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv_p = pow(prow[c], -1, p)
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                f = f * inv_p % p
                row = rows[i]
                for j in range(c, ncols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
    return rank


def _rank_array(data: np.ndarray, field: PrimeField, limit: int) -> int:
    ops = field.ops
    w = data.copy()
    nrows, ncols = w.shape
    rank = 0
    for c in range(ncols):
        if rank == limit or rank == nrows:
            break
        nz = np.flatnonzero(w[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            w[[rank, piv]] = w[[piv, rank]]
        inv_p = U64(pow(int(w[rank, c]), -1, field.p))
        prow = ops.mul(w[rank, c:], inv_p)
        below = w[rank + 1:, c]
        hit = np.flatnonzero(below) + rank + 1
        if hit.size:
            w[hit, c:] = ops.sub(w[hit, c:], ops.mul(w[hit, c][:, None], prow[None, :]))
        rank += 1
    return rank


def _rank_limited(a: FpMatrix, limit: int) -> int:
    if a.rows == 0 or a.cols == 0 or limit == 0:
        return 0
    if a.rows * a.cols <= _SMALL_RANK_ENTRIES:
        return _rank_python(a.tolist(), a.field.p, limit)
    return _rank_array(a.data, a.field, limit)


def rank(a: FpMatrix) -> int:
    """Exact rank over F_p by full elimination."""
    return _rank_limited(a, min(a.rows, a.cols))


def bounded_rank(a: FpMatrix, k: int) -> int:
    """``min(k, rank(a))``; elimination stops as soon as ``k`` pivots are found."""
    if k < 1:
        raise ParameterError(f"bound k must be positive, got {k}")
    return _rank_limited(a, min(k, a.rows, a.cols))


# -- inverse -----------------------------------------------------------------


def _inverse_array(data: np.ndarray, field: PrimeField) -> np.ndarray:
    ops = field.ops
    n = data.shape[0]
    w = np.concatenate([data, np.eye(n, dtype=U64)], axis=1)
    used = np.zeros(n, dtype=bool)
    pivot_row = np.empty(n, dtype=np.int64)
    for c0 in range(0, n, _PANEL):
        c1 = min(n, c0 + _PANEL)
        width = c1 - c0
        panel = w[:, c0:c1].copy()
        # columns of the panel's row transform E that differ from the identity
        g = np.zeros((n, width), dtype=U64)
        rows_used: list[int] = []
        for jj in range(width):
            cand = np.flatnonzero((panel[:, jj] != 0) & ~used)
            if cand.size == 0:
                raise SingularError("matrix is singular", rank=_rank_limited(FpMatrix._wrap(data, field), n))
            r = int(cand[0])
            used[r] = True
            pivot_row[c0 + jj] = r
            rows_used.append(r)
            g[r, jj] = 1
            inv_p = U64(pow(int(panel[r, jj]), -1, field.p))
            panel[r] = ops.mul(panel[r], inv_p)
            g[r] = ops.mul(g[r], inv_p)
            f = panel[:, jj].copy()
            f[r] = 0
            hit = np.flatnonzero(f)
            if hit.size:
                fc = f[hit][:, None]
                panel[hit] = ops.sub(panel[hit], ops.mul(fc, panel[r][None, :]))
                g[hit] = ops.sub(g[hit], ops.mul(fc, g[r][None, :]))
        piv = np.asarray(rows_used, dtype=np.int64)
        g[piv, np.arange(width)] = ops.sub(g[piv, np.arange(width)], U64(1))
        rest = w[:, c1:]
        if rest.shape[1]:
            w[:, c1:] = ops.add(rest, ops.matmul(g, rest[piv]))
        w[:, c0:c1] = panel
    return w[pivot_row, n:]


def inverse(a: FpMatrix) -> FpMatrix:
    """Exact inverse; raises :class:`SingularError` (carrying the rank) if none exists."""
    if a.rows != a.cols:
        raise DimensionError(f"cannot invert a non-square {a.rows}x{a.cols} matrix")
    if a.rows == 0:
        return a
    return FpMatrix._wrap(_inverse_array(a.data, a.field), a.field)


def low_rank_inverse_update(left: FpMatrix, right: FpMatrix) -> FpMatrix:
    """Return ``(I - left @ right)^-1`` via the small inverse ``(I - right @ left)^-1``.

    ``left`` is a x b and ``right`` is b x a; only a b x b matrix is inverted,
    so this is the cheap route whenever b << a.
    """
    _same_field(left, right)
    if left.cols != right.rows or left.rows != right.cols:
        raise DimensionError(f"need a x b and b x a factors, got {left.shape} and {right.shape}")
    field = left.field
    small = FpMatrix.identity(left.cols, field) - right @ left
    core = inverse(small)
    return FpMatrix.identity(left.rows, field) + left @ core @ right
