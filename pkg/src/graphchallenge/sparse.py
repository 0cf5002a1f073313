"""Dimension-checked sparse integer matrices over the (+, *) counting semiring.

Every kernel in the package is expressed with the handful of operations in
this module.  Storage is compressed sparse row with int64 values, sorted
column indices in every row and no stored zeros; the scipy CSR routines do
the arithmetic and each result is re-canonicalised before it is returned.

Dense vectors are plain one-dimensional ``numpy.int64`` arrays.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ContractViolation

VALUE_DTYPE = np.int64
INDEX_DTYPE = np.int64

DenseVector = np.ndarray


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class SparseMatrix:
    """Immutable CSR matrix of int64 values.

    Instances are only produced through the constructors below or by the
    module-level operations, all of which enforce the storage invariants.
    """

    __slots__ = ("nrows", "ncols", "indptr", "indices", "data")

    def __init__(self, nrows: int, ncols: int, indptr, indices, data):
        nrows, ncols = int(nrows), int(ncols)
        if nrows < 0 or ncols < 0:
            raise ContractViolation(f"negative shape ({nrows}, {ncols})")
        self.nrows = nrows
        self.ncols = ncols
        self.indptr = _freeze(np.array(indptr, dtype=INDEX_DTYPE))
        self.indices = _freeze(np.array(indices, dtype=INDEX_DTYPE))
        self.data = _freeze(np.array(data, dtype=VALUE_DTYPE))
        self.validate()

    # -- constructors -----------------------------------------------------

    @classmethod
    def _from_scipy(cls, mat) -> "SparseMatrix":
        # scipy results are fresh buffers; canonicalise in place and adopt them
        csr = sp.csr_matrix(mat, dtype=VALUE_DTYPE)
        csr.sum_duplicates()
        csr.eliminate_zeros()
        csr.sort_indices()
        out = object.__new__(cls)
        out.nrows, out.ncols = csr.shape
        out.indptr = _freeze(np.asarray(csr.indptr, dtype=INDEX_DTYPE))
        out.indices = _freeze(np.asarray(csr.indices, dtype=INDEX_DTYPE))
        out.data = _freeze(np.asarray(csr.data, dtype=VALUE_DTYPE))
        return out

    @classmethod
    def from_triples(
        cls,
        nrows: int,
        ncols: int,
        rows: Sequence[int],
        cols: Sequence[int],
        values: Sequence[int] | None = None,
    ) -> "SparseMatrix":
        """Build from coordinate triples; duplicate positions are rejected."""
        rows = np.asarray(rows, dtype=INDEX_DTYPE).reshape(-1)
        cols = np.asarray(cols, dtype=INDEX_DTYPE).reshape(-1)
        if values is None:
            values = np.ones(rows.size, dtype=VALUE_DTYPE)
        values = np.asarray(values, dtype=VALUE_DTYPE).reshape(-1)
        if not rows.size == cols.size == values.size:
            raise ContractViolation("rows, cols and values differ in length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= nrows or cols.min() < 0 or cols.max() >= ncols:
                raise ContractViolation(f"coordinate out of range for shape ({nrows}, {ncols})")
            keys = rows * max(ncols, 1) + cols
            if np.unique(keys).size != keys.size:
                raise ContractViolation("duplicate (row, col) coordinates")
        coo = sp.coo_matrix((values, (rows, cols)), shape=(nrows, ncols))
        return cls._from_scipy(coo)

    @classmethod
    def from_dense(cls, dense) -> "SparseMatrix":
        dense = np.asarray(dense, dtype=VALUE_DTYPE)
        if dense.ndim != 2:
            raise ContractViolation("from_dense needs a 2-D array")
        return cls._from_scipy(sp.csr_matrix(dense))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls(nrows, ncols, np.zeros(nrows + 1), [], [])

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        idx = np.arange(n)
        return cls(n, n, np.arange(n + 1), idx, np.ones(n))

    # -- inspection -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def validate(self) -> None:
        """Raise ContractViolation unless the CSR storage invariants hold."""
        ip, ix, v = self.indptr, self.indices, self.data
        if ip.size != self.nrows + 1 or ip[0] != 0 or ip[-1] != ix.size or ix.size != v.size:
            raise ContractViolation("inconsistent CSR arrays")
        counts = np.diff(ip)
        if np.any(counts < 0):
            raise ContractViolation("row pointers decrease")
        if ix.size == 0:
            return
        if ix.min() < 0 or ix.max() >= self.ncols:
            raise ContractViolation("column index out of range")
        if np.any(v == 0):
            raise ContractViolation("explicit zero stored")
        # strictly increasing within each row: every step not at a row start must be positive
        steps = np.diff(ix)
        row_start = np.zeros(ix.size, dtype=bool)
        row_start[ip[:-1][counts > 0]] = True
        if np.any(steps[~row_start[1:]] <= 0):
            raise ContractViolation("column indices not strictly increasing within a row")

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def row_ids(self) -> np.ndarray:
        """Row index of every stored entry, aligned with ``indices``."""
        return np.repeat(np.arange(self.nrows, dtype=INDEX_DTYPE), np.diff(self.indptr))

    def entries(self) -> Iterator[tuple[int, int, int]]:
        for r, c, v in zip(self.row_ids().tolist(), self.indices.tolist(), self.data.tolist()):
            yield r, c, v

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=VALUE_DTYPE)
        out[self.row_ids(), self.indices] = self.data
        return out

    def to_scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.data.copy(), self.indices.copy(), self.indptr.copy()), shape=self.shape
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.data, other.data)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def _csr(a: SparseMatrix) -> sp.csr_matrix:
    # shares buffers; scipy only reads them here
    return sp.csr_matrix((a.data, a.indices, a.indptr), shape=a.shape, copy=False)


def _same_shape(op: str, a: SparseMatrix, b: SparseMatrix) -> None:
    if a.shape != b.shape:
        raise ContractViolation(f"{op}: shape mismatch {a.shape} vs {b.shape}")


def spgemm(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Integer matrix product ``a @ b``."""
    if a.ncols != b.nrows:
        raise ContractViolation(f"spgemm: cannot multiply {a.shape} by {b.shape}")
    return SparseMatrix._from_scipy(_csr(a) @ _csr(b))


def hadamard(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Element-wise product; the pattern is the intersection of both patterns."""
    _same_shape("hadamard", a, b)
    return SparseMatrix._from_scipy(_csr(a).multiply(_csr(b)))


def add(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    _same_shape("add", a, b)
    return SparseMatrix._from_scipy(_csr(a) + _csr(b))


def subtract(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    _same_shape("subtract", a, b)
    return SparseMatrix._from_scipy(_csr(a) - _csr(b))


def transpose(a: SparseMatrix) -> SparseMatrix:
    return SparseMatrix._from_scipy(_csr(a).T.tocsr())


def sum_all(a: SparseMatrix) -> int:
    return int(a.data.sum(dtype=VALUE_DTYPE))


def row_reduce(a: SparseMatrix) -> DenseVector:
    """Sum of each row, length ``nrows``."""
    out = np.zeros(a.nrows, dtype=VALUE_DTYPE)
    np.add.at(out, a.row_ids(), a.data)
    return out


def col_reduce(a: SparseMatrix) -> DenseVector:
    """Sum of each column, length ``ncols``."""
    out = np.zeros(a.ncols, dtype=VALUE_DTYPE)
    np.add.at(out, a.indices, a.data)
    return out


def filter_eq(a: SparseMatrix, target: int) -> SparseMatrix:
    """Indicator of the stored entries equal to ``target``.

    Zero is rejected because zeros are never stored and so cannot be selected.
    """
    if target == 0:
        raise ContractViolation("filter_eq: target 0 cannot be selected from sparse storage")
    keep = a.data == target
    rows = a.row_ids()[keep]
    indptr = np.zeros(a.nrows + 1, dtype=INDEX_DTYPE)
    np.cumsum(np.bincount(rows, minlength=a.nrows), out=indptr[1:])
    return SparseMatrix(a.nrows, a.ncols, indptr, a.indices[keep], np.ones(rows.size))


def select_rows(a: SparseMatrix, keep) -> SparseMatrix:
    """Submatrix of the rows in ``keep``, in their original relative order."""
    keep = np.asarray(keep, dtype=INDEX_DTYPE).reshape(-1)
    if keep.size:
        if keep.min() < 0 or keep.max() >= a.nrows:
            raise ContractViolation(f"select_rows: index out of range for {a.nrows} rows")
        keep = np.sort(keep)
        if np.any(np.diff(keep) == 0):
            raise ContractViolation("select_rows: duplicate row index")
    return SparseMatrix._from_scipy(_csr(a)[keep, :].copy())


def diag_from_vector(v) -> SparseMatrix:
    v = np.asarray(v, dtype=VALUE_DTYPE).reshape(-1)
    n = v.size
    nz = np.flatnonzero(v)
    return SparseMatrix.from_triples(n, n, nz, nz, v[nz])


def triangular_split(a: SparseMatrix) -> tuple[SparseMatrix, SparseMatrix]:
    """Strictly lower and strictly upper parts; the diagonal goes to neither."""
    if a.nrows != a.ncols:
        raise ContractViolation(f"triangular_split needs a square matrix, got {a.shape}")
    rows = a.row_ids()
    lower = rows > a.indices
    upper = rows < a.indices

    def part(mask):
        return SparseMatrix.from_triples(a.nrows, a.ncols, rows[mask], a.indices[mask], a.data[mask])

    return part(lower), part(upper)
