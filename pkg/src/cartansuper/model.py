"""Finite-dimensional Lie superalgebras given by structure constants over F_p."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

import numpy as np
import scipy.sparse as sp

from .fp import check_modulus
from .linalg import LinearSubspace, as_residues
from .kernels import SparseEliminator

DEFAULT_MAX_DIM = 2000


class ModelError(ValueError):
    """Malformed structure data."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed (must not happen on valid input)."""


class ResourceError(RuntimeError):
    """Requested model exceeds the configured dimension guard."""


def max_dim() -> int:
    env = os.environ.get("CARTANSUPER_MAX_DIM")
    return int(env) if env else DEFAULT_MAX_DIM


def check_dim(dim: int) -> None:
    cap = max_dim()
    if dim > cap:
        raise ResourceError(f"model dimension {dim} exceeds the guard {cap} (set CARTANSUPER_MAX_DIM)")


def sum_mod_by_key(keys: np.ndarray, vals: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Collapse duplicate keys, summing values mod p; drops zero sums."""
    if keys.size == 0:
        return keys.astype(np.int64), vals.astype(np.int64)
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    v = vals[order]
    starts = np.flatnonzero(np.concatenate([[True], k[1:] != k[:-1]]))
    sums = np.add.reduceat(v, starts) % p
    uk = k[starts]
    keep = sums != 0
    return uk[keep], sums[keep]


@dataclass(eq=False)
class AlgebraModel:
    """Ordered basis, gradings and sparse structure constants of a Lie superalgebra.

    ``struct`` holds ``(a, b, k, c)`` rows meaning ``[e_a, e_b]`` has
    coefficient ``c`` on ``e_k``, for every ordered pair.
    """

    p: int
    labels: tuple[str, ...]
    parity: np.ndarray
    zdegree: np.ndarray
    struct: np.ndarray
    kind: str = "custom"
    name: str = ""
    shape: Any = None
    torus: np.ndarray | None = None
    weights: np.ndarray | None = None
    basis_data: tuple | None = None
    embedding: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.p = check_modulus(self.p)
        self.labels = tuple(self.labels)
        d = len(self.labels)
        self.parity = np.asarray(self.parity, dtype=np.int64).reshape(d) % 2
        self.zdegree = np.asarray(self.zdegree, dtype=np.int64).reshape(d)
        s = np.asarray(self.struct, dtype=np.int64).reshape(-1, 4)
        if s.size and (s[:, :3].min() < 0 or s[:, :3].max() >= d):
            raise ModelError("structure index out of range")
        keys = (s[:, 0] * d + s[:, 1]) * d + s[:, 2]
        keys, vals = sum_mod_by_key(keys, s[:, 3], self.p)
        self.struct = np.column_stack([keys // (d * d), keys // d % d, keys % d, vals]) if keys.size else np.zeros((0, 4), np.int64)
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=np.int64).reshape(d, -1) % self.p
        if self.torus is not None:
            self.torus = np.asarray(self.torus, dtype=np.int64).reshape(-1, d) % self.p

    @classmethod
    def from_canonical(cls, p: int, labels, parity, zdegree, rows, **kw) -> "AlgebraModel":
        """Build from rows on canonical pairs (a<b, or a=b odd); skew images added."""
        parity = np.asarray(parity, dtype=np.int64) % 2
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, 4)
        a, b, k, c = rows.T
        if np.any(a > b) or np.any((a == b) & (parity[a] == 0)):
            raise ModelError("canonical rows need a<b, or a=b with e_a odd")
        off = a != b
        sign = np.where(parity[a] * parity[b] == 1, 1, -1)  # -(-1)^{|a||b|}
        mirror = np.column_stack([b[off], a[off], k[off], (sign[off] * c[off]) % p])
        return cls(p, labels, parity, zdegree, np.vstack([rows, mirror]), **kw)

    # --- basic accessors -------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    def canonical_rows(self) -> np.ndarray:
        s = self.struct
        a, b = s[:, 0], s[:, 1]
        keep = (a < b) | ((a == b) & (self.parity[a] == 1))
        return s[keep]

    @cached_property
    def table(self) -> sp.csr_matrix:
        """Structure constants as a (d*d) x d sparse matrix, row ``a*d + b``."""
        d = self.dim
        s = self.struct
        return sp.csr_matrix((s[:, 3], (s[:, 0] * d + s[:, 1], s[:, 2])), shape=(d * d, d), dtype=np.int64)

    @cached_property
    def ad_mats(self) -> list[sp.csr_matrix]:
        """``ad(e_x)`` as d x d sparse matrices (target row, source column)."""
        d = self.dim
        s = self.struct
        out = []
        bounds = np.searchsorted(s[:, 0], np.arange(d + 1))
        for x in range(d):
            blk = s[bounds[x] : bounds[x + 1]]
            out.append(sp.csr_matrix((blk[:, 3], (blk[:, 2], blk[:, 1])), shape=(d, d), dtype=np.int64))
        return out

    def ad(self, x) -> sp.csr_matrix:
        """ad of a basis index or of a coefficient vector."""
        if np.ndim(x) == 0:
            return self.ad_mats[int(x)]
        v = as_residues(x, self.p)
        out = sp.csr_matrix((self.dim, self.dim), dtype=np.int64)
        for i in np.flatnonzero(v):
            out = out + int(v[i]) * self.ad_mats[i]
        out.data %= self.p
        out.eliminate_zeros()
        return out

    def dense_table(self) -> np.ndarray:
        d = self.dim
        C = np.zeros((d, d, d), dtype=np.int64)
        s = self.struct
        C[s[:, 0], s[:, 1], s[:, 2]] = s[:, 3]
        return C

    def basis_vector(self, a: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[a] = 1
        return v

    def bracket(self, x, y) -> np.ndarray:
        """Bracket of two coefficient vectors."""
        return self.bracket_many(np.atleast_2d(x), np.atleast_2d(y))[0]

    def bracket_many(self, X, Y) -> np.ndarray:
        """Row-wise brackets ``[X_n, Y_n]`` for stacked coefficient vectors."""
        X = sp.csr_matrix(as_residues(X, self.p)) if not sp.issparse(X) else X.tocsr()
        Y = sp.csr_matrix(as_residues(Y, self.p)) if not sp.issparse(Y) else Y.tocsr()
        return (row_kron(X, Y, self.dim) @ self.table).toarray() % self.p

    def is_abelian(self) -> bool:
        return self.struct.shape[0] == 0

    def sign(self, a, b):
        """(-1)^{|a||b|} for basis indices (vectorized)."""
        return np.where(self.parity[a] * self.parity[b] == 1, -1, 1)

    # --- structural subspaces --------------------------------------------

    def derived_subalgebra(self) -> LinearSubspace:
        """Span of all brackets of basis elements."""
        d, p = self.dim, self.p
        if self.is_abelian():
            return LinearSubspace.zero(d, p)
        elim = SparseEliminator(d, p)
        T = self.table
        elim.add_rows(T.indptr, T.indices, T.data % p)
        return LinearSubspace.from_rref(elim.row_space(), p) if elim.rank else LinearSubspace.zero(d, p)

    def center(self) -> LinearSubspace:
        """``{x : [x, e_a] = 0 for all a}``."""
        return self.centralizer(LinearSubspace.full(self.dim, self.p))

    def centralizer(self, subspace: LinearSubspace) -> LinearSubspace:
        """``{x : [x, v] = 0 for all v in subspace}``."""
        d, p = self.dim, self.p
        elim = SparseEliminator(d, p)
        if subspace.dim and not self.is_abelian():
            # column c of the constraint block for v is ad(v)-image of e_c: [e_c, v]
            for v in subspace.basis_rows:
                M = sp.csr_matrix((d, d), dtype=np.int64)
                for b in np.flatnonzero(v):
                    # [e_c, e_b] as a (k, c) matrix
                    M = M + int(v[b]) * self._right_mult(b)
                M = M.tocsr()
                M.data %= p
                M.eliminate_zeros()
                M.sort_indices()
                elim.add_rows(M.indptr, M.indices, M.data)
                if elim.rank == d:
                    break
        N = elim.nullspace()
        return LinearSubspace.from_rref(N, p) if N.shape[0] else LinearSubspace.zero(d, p)

    def _right_mult(self, b: int) -> sp.csr_matrix:
        """Matrix of x -> [x, e_b] (target row, source column)."""
        d = self.dim
        s = self.struct
        sel = s[:, 1] == b
        blk = s[sel]
        return sp.csr_matrix((blk[:, 3], (blk[:, 2], blk[:, 0])), shape=(d, d), dtype=np.int64)

    def __repr__(self):
        return f"AlgebraModel({self.kind!r}, dim={self.dim}, p={self.p}, nnz={self.struct.shape[0]})"


def row_kron(X: sp.csr_matrix, Y: sp.csr_matrix, d: int) -> sp.csr_matrix:
    """Row-wise Kronecker product: row n is ``X_n (x) Y_n`` flattened (i*d + j)."""
    X = X.tocoo()
    Y = Y.tocoo()
    n = X.shape[0]
    xo = np.lexsort((X.col, X.row))
    yo = np.lexsort((Y.col, Y.row))
    xr, xc, xv = X.row[xo], X.col[xo], X.data[xo]
    yr, yc, yv = Y.row[yo], Y.col[yo], Y.data[yo]
    xcount = np.bincount(xr, minlength=n)
    ycount = np.bincount(yr, minlength=n)
    ystart = np.concatenate([[0], np.cumsum(ycount)])
    # every x entry pairs with every y entry in the same row
    rep = ycount[xr]
    total = int(rep.sum())
    if total == 0:
        return sp.csr_matrix((n, d * d), dtype=np.int64)
    xi = np.repeat(np.arange(xr.size), rep)
    offs = np.arange(total) - np.repeat(np.cumsum(rep) - rep, rep)
    yi = ystart[xr[xi]] + offs
    rows = xr[xi]
    cols = xc[xi].astype(np.int64) * d + yc[yi]
    vals = xv[xi].astype(np.int64) * yv[yi]
    del xcount
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, d * d), dtype=np.int64)


# --- structure verification ------------------------------------------------


@dataclass
class StructureReport:
    ok: bool
    pairs_checked: int
    triples_checked: int
    skew_ok: bool
    jacobi_ok: bool
    grading_ok: bool
    violation: dict | None = None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "pairs_checked": self.pairs_checked,
            "triples_checked": self.triples_checked,
            "skew_ok": self.skew_ok,
            "jacobi_ok": self.jacobi_ok,
            "grading_ok": self.grading_ok,
            "violation": self.violation,
        }


def check_skew(model: AlgebraModel) -> dict | None:
    """First pair violating ``c_ab^k = -(-1)^{|a||b|} c_ba^k``, or None."""
    d, p = model.dim, model.p
    s = model.struct
    a, b, k, c = s.T
    keys = np.concatenate([(a * d + b) * d + k, (b * d + a) * d + k])
    sgn = np.where(model.parity[a] * model.parity[b] == 1, -1, 1)
    vals = np.concatenate([c, sgn * c])  # c_ab + (-1)^{|a||b|} c_ba must vanish
    uk, uv = sum_mod_by_key(keys, vals, p)
    if uk.size:
        key = int(uk[0])
        return {"kind": "skew", "a": key // (d * d), "b": key // d % d, "k": key % d}
    return None


def check_grading(model: AlgebraModel) -> dict | None:
    """Parity, Z-degree (and weight, when present) additivity of every bracket."""
    s = model.struct
    if not s.shape[0]:
        return None
    a, b, k = s[:, 0], s[:, 1], s[:, 2]
    bad = (model.parity[a] + model.parity[b] - model.parity[k]) % 2 != 0
    bad |= model.zdegree[a] + model.zdegree[b] != model.zdegree[k]
    if model.weights is not None:
        w = model.weights
        bad |= np.any((w[a] + w[b] - w[k]) % model.p != 0, axis=1)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        return {"kind": "grading", "a": int(a[i]), "b": int(b[i]), "k": int(k[i])}
    return None


def derivation_defects(model: AlgebraModel, maps: Sequence[sp.spmatrix], parities: Sequence[int]):
    """Yield ``(index, first_violation)`` for linear maps failing the super-Leibniz law.

    A map ``M`` of parity ``r`` must satisfy, for all basis y, z,
    ``M[y,z] = [My, z] + (-1)^{r|y|} [y, Mz]``.  Residues are compared as
    sparse keyed sums, so the sweep costs O(nnz) rather than O(d^4).
    """
    d, p = model.dim, model.p
    V = sp.vstack(model.ad_mats, format="csr")  # d^2 x d, row y*d+l
    T = model.table  # row y*d+z -> l
    par = model.parity
    for idx, (M, r) in enumerate(zip(maps, parities)):
        M = sp.csr_matrix(M, dtype=np.int64)
        # M([y,z]) : rows (y,z) of T composed with M
        P1 = (T @ M.T).tocoo()  # (y*d+z, l)
        k1 = P1.row.astype(np.int64) * d + P1.col
        v1 = P1.data.astype(np.int64)
        # [My, z] = sum_j M[j,y] [e_j, e_z]
        P2 = (sp.csr_matrix(M.T) @ model.table.reshape(d, d * d)).tocoo()  # (y, z*d+l)
        k2 = (P2.row.astype(np.int64) * d + P2.col // d) * d + P2.col % d
        v2 = -P2.data.astype(np.int64)
        # (-1)^{r|y|} [y, Mz] = A_y M : rows (y, l), cols z
        P3 = (V @ M).tocoo()
        y3 = P3.row // d
        k3 = (y3.astype(np.int64) * d + P3.col) * d + P3.row % d
        s3 = np.where((r * par[y3]) % 2 == 1, -1, 1)
        v3 = -s3 * P3.data.astype(np.int64)
        uk, _ = sum_mod_by_key(np.concatenate([k1, k2, k3]), np.concatenate([v1, v2, v3]), p)
        if uk.size:
            key = int(uk[0])
            yield idx, {"y": key // (d * d), "z": key // d % d, "k": key % d}


def verify_structure(model: AlgebraModel) -> StructureReport:
    """Exhaustive super skew-symmetry (all pairs) and graded Jacobi (all triples).

    Jacobi is checked in the equivalent form "each ad(e_x) is a
    superderivation of parity |e_x|", triple by triple.
    """
    d = model.dim
    skew = check_skew(model)
    grading = check_grading(model)
    violation = skew or grading
    jacobi_ok = True
    if skew is None:
        for x, bad in derivation_defects(model, model.ad_mats, model.parity.tolist()):
            jacobi_ok = False
            violation = {"kind": "jacobi", "x": x, "y": bad["y"], "z": bad["z"], "k": bad["k"]}
            break
    else:
        jacobi_ok = False
    return StructureReport(
        ok=skew is None and jacobi_ok and grading is None,
        pairs_checked=d * d,
        triples_checked=d**3 if skew is None else 0,
        skew_ok=skew is None,
        jacobi_ok=jacobi_ok,
        grading_ok=grading is None,
        violation=violation,
    )
