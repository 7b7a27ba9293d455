"""Sparse Hermitian operators assembled term by term.

Entries are stored as the upper triangle (row <= col); the lower triangle is
implied by conjugation and materialized on demand. Duplicate entries sum;
entries below 1e-14 in magnitude are dropped after summation.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .errors import InvalidParameterError

DROP_TOLERANCE = 1e-14


class SparseHermitianOperator:
    """Hermitian-by-construction sparse matrix on a tagged basis."""

    def __init__(self, dim: int, basis=None):
        self.dim = int(dim)
        self.basis = basis
        self._rows: list[np.ndarray] = []
        self._cols: list[np.ndarray] = []
        self._vals: list[np.ndarray] = []
        self._upper = None
        self._full = None

    def add_entries(self, rows, cols, vals):
        """Accumulate entries; lower-triangle input is conjugated into the upper."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.complex128)
        if rows.shape != cols.shape or rows.shape != vals.shape:
            raise InvalidParameterError("rows, cols, vals must share a shape")
        if rows.size == 0:
            return
        if rows.max() >= self.dim or cols.max() >= self.dim:
            raise InvalidParameterError("entry index out of range")
        if rows.min() < 0 or cols.min() < 0:
            raise InvalidParameterError("negative entry index")
        swap = rows > cols
        self._rows.append(np.where(swap, cols, rows))
        self._cols.append(np.where(swap, rows, cols))
        self._vals.append(np.where(swap, np.conj(vals), vals))
        self._upper = None
        self._full = None

    def add_entry(self, row: int, col: int, val: complex):
        self.add_entries(np.array([row]), np.array([col]), np.array([val]))

    def _build_upper(self) -> sp.csr_matrix:
        if self._upper is None:
            if self._rows:
                rows = np.concatenate(self._rows)
                cols = np.concatenate(self._cols)
                vals = np.concatenate(self._vals)
            else:
                rows = np.empty(0, dtype=np.int64)
                cols = np.empty(0, dtype=np.int64)
                vals = np.empty(0, dtype=np.complex128)
            coo = sp.coo_matrix((vals, (rows, cols)), shape=(self.dim, self.dim))
            coo.sum_duplicates()
            mask = np.abs(coo.data) > DROP_TOLERANCE
            diag_imag = np.abs(coo.data[coo.row == coo.col].imag)
            if diag_imag.size and diag_imag.max() > 1e-12:
                raise InvalidParameterError("diagonal entries must be real")
            upper = sp.coo_matrix(
                (coo.data[mask], (coo.row[mask], coo.col[mask])), shape=coo.shape
            )
            self._upper = upper.tocsr()
        return self._upper

    def to_csr(self) -> sp.csr_matrix:
        """Full symmetric matrix with the conjugate lower triangle filled in."""
        if self._full is None:
            upper = self._build_upper()
            strict = sp.triu(upper, k=1)
            full = upper + strict.conj().T
            full.sum_duplicates()
            self._full = full.tocsr()
        return self._full

    def to_dense(self) -> np.ndarray:
        return self.to_csr().toarray()

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.to_csr() @ v

    def upper_entries(self):
        """(rows, cols, vals) of the stored upper triangle, row-major sorted."""
        upper = self._build_upper().tocoo()
        order = np.lexsort((upper.col, upper.row))
        return upper.row[order], upper.col[order], upper.data[order]

    @property
    def nnz(self) -> int:
        return self.to_csr().nnz

    def expectation(self, v: np.ndarray) -> float:
        return float(np.real(np.vdot(v, self.matvec(v))))
