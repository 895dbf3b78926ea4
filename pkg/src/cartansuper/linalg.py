"""Exact linear algebra over F_p on int64 residue arrays."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .kernels import SparseEliminator, matmul_mod, rref_inplace


def as_residues(M, p: int) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(M, dtype=np.int64) % p)


def rref(M, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(R, pivots)`` with R the nonzero rows of the RREF of M."""
    A = as_residues(np.atleast_2d(M), p).copy()
    if A.size == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64), np.zeros(0, dtype=np.int64)
    piv = rref_inplace(A, p)
    return A[: piv.size].copy(), piv


def rank(M, p: int) -> int:
    return int(rref(M, p)[1].size)


def nullspace(M, p: int) -> np.ndarray:
    """RREF basis (as rows) of the right nullspace ``{x : M x = 0}``."""
    A = np.atleast_2d(as_residues(M, p))
    elim = SparseEliminator(A.shape[1], p)
    if A.shape[0]:
        elim.add_dense(A)
    return elim.nullspace()


@dataclass(frozen=True, eq=False)
class LinearSubspace:
    """Subspace of F_p^n stored by its RREF basis rows."""

    ambient_dim: int
    basis_rows: np.ndarray
    pivot_columns: tuple[int, ...]
    p: int

    @classmethod
    def span(cls, vectors, ambient_dim: int, p: int) -> "LinearSubspace":
        V = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim)
        R, piv = rref(V, p) if V.shape[0] else (np.zeros((0, ambient_dim), np.int64), np.zeros(0, np.int64))
        return cls(ambient_dim, R, tuple(int(c) for c in piv), p)

    @classmethod
    def from_rref(cls, R: np.ndarray, p: int) -> "LinearSubspace":
        R = as_residues(R, p).reshape(-1, R.shape[-1])
        piv = tuple(int(np.flatnonzero(row)[0]) for row in R)
        return cls(R.shape[1], R, piv, p)

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "LinearSubspace":
        return cls(ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64), (), p)

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "LinearSubspace":
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.int64), tuple(range(ambient_dim)), p)

    @property
    def dim(self) -> int:
        return len(self.pivot_columns)

    def reduce(self, v) -> np.ndarray:
        """Residual of ``v`` (1-d or stacked rows) after reduction by the basis."""
        V = as_residues(v, self.p)
        if not self.dim:
            return V
        piv = np.asarray(self.pivot_columns)
        if V.ndim == 1:
            return (V - matmul_mod(V[piv][None, :], self.basis_rows, self.p)[0]) % self.p
        return (V - matmul_mod(V[:, piv], self.basis_rows, self.p)) % self.p

    def contains(self, v) -> bool:
        return not np.any(self.reduce(v))

    def contains_space(self, other: "LinearSubspace") -> bool:
        return other.dim == 0 or self.contains(other.basis_rows)

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of members w.r.t. the RREF basis; raises if not inside."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        V = as_residues(v, self.p)
        piv = np.asarray(self.pivot_columns, dtype=np.int64)
        return V[..., piv]

    def __eq__(self, other):
        if not isinstance(other, LinearSubspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.p == other.p
            and self.pivot_columns == other.pivot_columns
            and np.array_equal(self.basis_rows, other.basis_rows)
        )

    __hash__ = None

    def __repr__(self):
        return f"LinearSubspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"


class IncrementalSpan:
    """Greedy independence test for vectors arriving one at a time."""

    def __init__(self, ambient_dim: int, p: int):
        self.p = p
        self.n = ambient_dim
        self._rows: dict[int, np.ndarray] = {}

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = as_residues(v, self.p).copy()
        for c in sorted(self._rows):
            if v[c]:
                v = (v - v[c] * self._rows[c]) % self.p
        return v

    def add(self, v) -> bool:
        """Add ``v``; return True when it was independent of the span so far."""
        r = self.reduce(v)
        nz = np.flatnonzero(r)
        if not nz.size:
            return False
        c = int(nz[0])
        r = r * pow(int(r[c]), -1, self.p) % self.p
        for k, row in self._rows.items():
            if row[c]:
                self._rows[k] = (row - row[c] * r) % self.p
        self._rows[c] = r
        return True

    def subspace(self) -> LinearSubspace:
        if not self._rows:
            return LinearSubspace.zero(self.n, self.p)
        piv = sorted(self._rows)
        return LinearSubspace(self.n, np.array([self._rows[c] for c in piv]), tuple(piv), self.p)


class SparseSubspace:
    """Subspace of a large F_p^n with RREF basis rows held as a CSR matrix.

    Used for derivation (n = d^2) and bilinear-map (n = d^3) spaces, where
    dense rows would not fit comfortably in memory.
    """

    def __init__(self, ambient_dim: int, basis_rows: sp.csr_matrix, pivot_columns, p: int):
        self.ambient_dim = int(ambient_dim)
        self.basis_rows = sp.csr_matrix(basis_rows, dtype=np.int64)
        self.basis_rows.sort_indices()
        self.pivot_columns = tuple(int(c) for c in pivot_columns)
        self.p = p

    @classmethod
    def from_dense(cls, space: LinearSubspace) -> "SparseSubspace":
        return cls(space.ambient_dim, sp.csr_matrix(space.basis_rows), space.pivot_columns, space.p)

    @classmethod
    def from_rows(cls, rows: sp.spmatrix, p: int) -> "SparseSubspace":
        """RREF of arbitrary sparse rows (restricted to their joint support)."""
        rows = sp.csr_matrix(rows, dtype=np.int64)
        n = rows.shape[1]
        support = np.unique(rows.indices)
        if not support.size:
            return cls(n, sp.csr_matrix((0, n), dtype=np.int64), (), p)
        R, piv = rref(rows[:, support].toarray(), p)
        coo = sp.coo_matrix(R)
        full = sp.csr_matrix((coo.data, (coo.row, support[coo.col])), shape=(R.shape[0], n), dtype=np.int64)
        return cls(n, full, support[piv], p)

    @property
    def dim(self) -> int:
        return len(self.pivot_columns)

    def reduce(self, v) -> sp.csr_matrix:
        """Residual rows of ``v`` (sparse or dense, 1-d or stacked)."""
        V = sp.csr_matrix(np.atleast_2d(v) if not sp.issparse(v) else v, dtype=np.int64)
        V.data %= self.p
        if not self.dim:
            V.eliminate_zeros()
            return V
        coef = V[:, list(self.pivot_columns)]
        out = V - coef @ self.basis_rows
        out = sp.csr_matrix(out)
        out.data %= self.p
        out.eliminate_zeros()
        return out

    def contains(self, v) -> bool:
        return self.reduce(v).nnz == 0

    def contains_space(self, other) -> bool:
        return other.dim == 0 or self.contains(other.basis_rows)

    def coordinates(self, v) -> np.ndarray:
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        V = sp.csr_matrix(np.atleast_2d(v) if not sp.issparse(v) else v, dtype=np.int64)
        return V[:, list(self.pivot_columns)].toarray() % self.p

    def to_dense(self) -> LinearSubspace:
        return LinearSubspace(self.ambient_dim, self.basis_rows.toarray() % self.p, self.pivot_columns, self.p)

    def __eq__(self, other):
        if not isinstance(other, SparseSubspace):
            return NotImplemented
        if (self.ambient_dim, self.p, self.pivot_columns) != (other.ambient_dim, other.p, other.pivot_columns):
            return False
        diff = self.basis_rows - other.basis_rows
        diff.data %= self.p
        return diff.count_nonzero() == 0

    __hash__ = None

    def __repr__(self):
        return f"SparseSubspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"
