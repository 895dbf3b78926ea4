"""Pure numpy implementations of the elimination kernels.

Used when the compiled extension is unavailable (or forced with
``CARTANSUPER_KERNELS=python``).  Same API as ``_ckernels``.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``a @ b mod p`` for residue matrices."""
    inner = a.shape[-1]
    if inner * (p - 1) ** 2 < 2**52:
        out = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    else:
        out = a.astype(object) @ b.astype(object)
        out = np.asarray(out % p, dtype=np.int64)
    return out % p


def _inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        table[v] = pow(v, -1, p)
    return table


def rref_inplace(M: np.ndarray, p: int) -> np.ndarray:
    """Row-reduce ``M`` (int64, values in [0, p)) to RREF in place.

    Pivot choice is deterministic: lowest column first, then the lowest row
    index holding a nonzero entry in that column.  Returns pivot columns.
    """
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), -1, p)
        if inv != 1:
            M[r] = M[r] * inv % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            M[hit] = (M[hit] - np.outer(col[hit], M[r])) % p
        pivots.append(c)
        r += 1
    M[r:] = 0
    return np.asarray(pivots, dtype=np.int64)


class SparseEliminator:
    """Incremental row reduction over F_p with a fixed column count.

    Rows are fed in CSR batches; the accumulated row space is kept in RREF.
    ``rank == ncols`` means the nullspace is already trivial, so callers may
    stop feeding rows.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = int(ncols)
        self.p = int(p)
        self._rows = np.zeros((0, self.ncols), dtype=np.int64)
        self._piv = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return int(self._piv.size)

    def add_rows(self, indptr, indices, data) -> int:
        indptr = np.asarray(indptr, dtype=np.int64)
        nrows = indptr.size - 1
        if nrows <= 0 or self.rank == self.ncols:
            return self.rank
        chunk = max(256, 2 * self.ncols)
        for start in range(0, nrows, chunk):
            stop = min(nrows, start + chunk)
            lo, hi = indptr[start], indptr[stop]
            X = np.zeros((stop - start, self.ncols), dtype=np.int64)
            rr = np.repeat(np.arange(stop - start), np.diff(indptr[start : stop + 1]))
            np.add.at(X, (rr, np.asarray(indices[lo:hi], dtype=np.int64)), np.asarray(data[lo:hi], dtype=np.int64))
            self.add_dense(X % self.p)
            if self.rank == self.ncols:
                break
        return self.rank

    def add_dense(self, X: np.ndarray) -> int:
        p = self.p
        X = np.array(X, dtype=np.int64) % p
        if self._piv.size:
            X = (X - matmul_mod(X[:, self._piv], self._rows, p)) % p
        X = X[np.any(X, axis=1)]
        if not X.shape[0]:
            return self.rank
        newpiv = rref_inplace(X, p)
        if not newpiv.size:
            return self.rank
        Q = X[: newpiv.size]
        if self._piv.size:
            self._rows = (self._rows - matmul_mod(self._rows[:, newpiv], Q, p)) % p
        rows = np.vstack([self._rows, Q])
        piv = np.concatenate([self._piv, newpiv])
        order = np.argsort(piv, kind="stable")
        self._rows, self._piv = rows[order], piv[order]
        return self.rank

    def pivots(self) -> np.ndarray:
        return self._piv.copy()

    def row_space(self) -> np.ndarray:
        """RREF basis of the accumulated rows."""
        return self._rows.copy()

    def nullspace(self) -> np.ndarray:
        """RREF basis of ``{x : row . x = 0 for every accumulated row}``."""
        p = self.p
        free = np.setdiff1d(np.arange(self.ncols), self._piv)
        N = np.zeros((free.size, self.ncols), dtype=np.int64)
        N[np.arange(free.size), free] = 1
        if self._piv.size and free.size:
            N[:, self._piv] = (-self._rows[:, free].T) % p
        if free.size:
            rref_inplace(N, p)
        return N
