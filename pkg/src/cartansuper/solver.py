"""Superderivations and skew-symmetric super-biderivations as exact F_p linear systems.

Both systems are split into independent blocks by homogeneous key
(parity, torus weight when available, Z-degree): structure constants are
additive in the key, so a constraint row only ever touches unknowns whose
key shift matches the row's.  Each block is eliminated separately with the
compiled sparse eliminator, which stops as soon as a block reaches full rank.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .kernels import SparseEliminator
from .linalg import IncrementalSpan, SparseSubspace
from .model import AlgebraModel, ConsistencyError

# --- homogeneous keys ---------------------------------------------------------


class GradingKeys:
    """Per-basis key vectors and an integer encoding of key differences."""

    def __init__(self, model: AlgebraModel):
        p = model.p
        cols = [model.parity[:, None]]
        mods = [2]
        if model.weights is not None and model.weights.size:
            cols.append(model.weights)
            mods += [p] * model.weights.shape[1]
        cols.append(model.zdegree[:, None])
        mods.append(0)
        K = np.hstack(cols).astype(np.int64)
        s = model.struct
        keep = []
        for c, m in enumerate(mods):
            if s.shape[0]:
                diff = K[s[:, 0], c] + K[s[:, 1], c] - K[s[:, 2], c]
                ok = not np.any(diff % m if m else diff)
            else:
                ok = True
            if ok:
                keep.append(c)
            elif c == 0:
                raise ConsistencyError("structure constants are not parity-additive")
        self.K = K[:, keep]
        self.mods = [mods[c] for c in keep]
        span = int(np.abs(self.K[:, -1]).max()) if self.mods[-1] == 0 and self.K.size else 0
        self.offset = 4 * span + 4
        self.radices = [m if m else 2 * self.offset + 1 for m in self.mods]

    def encode(self, K: np.ndarray) -> np.ndarray:
        """Encode key (difference) rows as int64 codes."""
        K = np.atleast_2d(K)
        code = np.zeros(K.shape[0], dtype=np.int64)
        for c, (m, r) in enumerate(zip(self.mods, self.radices)):
            v = K[:, c] % m if m else K[:, c] + self.offset
            code = code * r + v
        return code

    def codes(self) -> np.ndarray:
        return self.encode(self.K)


# --- block elimination ------------------------------------------------------------


@dataclass
class Block:
    code: int
    unknowns: np.ndarray  # sorted global unknown ids
    rows: int
    nullspace: np.ndarray  # RREF rows over the local unknowns


def solve_blocks(unknown_ids, unknown_codes, rows, cols, vals, p: int) -> list[Block]:
    """Eliminate each key block of a sparse system; return all blocks with their nullspaces.

    ``rows``/``cols``/``vals`` are COO entries; ``cols`` are global unknown ids.
    """
    unknown_ids = np.asarray(unknown_ids, dtype=np.int64)
    order = np.lexsort((unknown_ids, unknown_codes))
    uid = unknown_ids[order]
    ucode = np.asarray(unknown_codes, dtype=np.int64)[order]
    bcodes, bstart = np.unique(ucode, return_index=True)
    bend = np.append(bstart[1:], uid.size)
    # block index of every entry via its unknown
    pos_sorted = np.argsort(uid, kind="stable")
    uid_sorted = uid[pos_sorted]
    loc = np.searchsorted(uid_sorted, cols)
    if cols.size and (np.any(loc >= uid_sorted.size) or np.any(uid_sorted[np.minimum(loc, uid_sorted.size - 1)] != cols)):
        raise ConsistencyError("constraint entry refers to an unknown outside the system")
    entry_pos = pos_sorted[loc]  # position within uid (block-ordered)
    entry_block = np.searchsorted(bstart, entry_pos, side="right") - 1
    keep = vals % p != 0
    rows, entry_pos, vals, entry_block = rows[keep], entry_pos[keep], vals[keep] % p, entry_block[keep]
    eorder = np.lexsort((entry_pos, rows, entry_block))
    rows, entry_pos, vals, entry_block = rows[eorder], entry_pos[eorder], vals[eorder], entry_block[eorder]
    ebounds = np.searchsorted(entry_block, np.arange(bcodes.size + 1))
    out = []
    for bi in range(bcodes.size):
        lo, hi = bstart[bi], bend[bi]
        n = int(hi - lo)
        e0, e1 = ebounds[bi], ebounds[bi + 1]
        r = rows[e0:e1]
        c = entry_pos[e0:e1] - lo
        v = vals[e0:e1]
        elim = SparseEliminator(n, p)
        nrows = 0
        if r.size:
            starts = np.flatnonzero(np.concatenate([[True], r[1:] != r[:-1]]))
            nrows = int(starts.size)
            local_row = np.repeat(np.arange(nrows), np.diff(np.append(starts, r.size)))
            M = sp.csr_matrix((v, (local_row, c)), shape=(nrows, n), dtype=np.int64)
            M.sum_duplicates()
            M.data %= p
            M.eliminate_zeros()
            M.sort_indices()
            elim.add_rows(M.indptr.astype(np.int64), M.indices.astype(np.int64), M.data.astype(np.int64))
        N = elim.nullspace() if elim.rank < n else np.zeros((0, n), dtype=np.int64)
        out.append(Block(int(bcodes[bi]), uid[lo:hi].copy(), nrows, N))
    return out


# --- generating sets ----------------------------------------------------------


def generating_set(model: AlgebraModel, keys: GradingKeys | None = None) -> list[int]:
    """Greedy set of basis elements generating the model as an algebra.

    Basis elements are tried in order of increasing Z-degree; each one not
    yet in the generated subalgebra is added and the subalgebra is re-closed
    under ad of the chosen generators.
    """
    d, p = model.dim, model.p
    if d == 0:
        return []
    keys = keys or GradingKeys(model)
    code = keys.codes()
    groups: dict[int, np.ndarray] = {int(c): np.flatnonzero(code == c) for c in np.unique(code)}
    local = np.zeros(d, dtype=np.int64)
    for idx in groups.values():
        local[idx] = np.arange(idx.size)
    spans = {c: IncrementalSpan(idx.size, p) for c, idx in groups.items()}
    vecs: list[np.ndarray] = []
    A = model.ad_mats
    gens: list[int] = []

    def add(v: np.ndarray) -> bool:
        nz = np.flatnonzero(v)
        if not nz.size:
            return False
        c = int(code[nz[0]])
        idx = groups[c]
        if np.any(code[nz] != c):
            raise ConsistencyError("bracket of homogeneous elements is not homogeneous")
        if spans[c].add(v[idx]):
            vecs.append(v)
            return True
        return False

    order = sorted(range(d), key=lambda a: (int(model.zdegree[a]), a))
    for a in order:
        c = int(code[a])
        e = np.zeros(groups[c].size, dtype=np.int64)
        e[local[a]] = 1
        if not spans[c].reduce(e).any():
            continue
        gens.append(a)
        n_old = len(vecs)
        queue = []
        if add(model.basis_vector(a)):
            queue.append(len(vecs) - 1)
        for i in range(n_old):
            if add((A[a] @ vecs[i]) % p):
                queue.append(len(vecs) - 1)
        while queue:
            w = vecs[queue.pop()]
            for h in gens:
                if add((A[h] @ w) % p):
                    queue.append(len(vecs) - 1)
        if len(vecs) == d:
            break
    return gens


# --- superderivations ---------------------------------------------------------------


class DerivationSpace:
    """Parity-homogeneous superderivations, stored block-wise.

    Coordinates of a linear map M are its d x d matrix (target row, source
    column) flattened row-major: index ``j*d + c``.
    """

    def __init__(self, model: AlgebraModel, parity: int, blocks: list[Block], keys: GradingKeys, stats: dict):
        self.model = model
        self.parity = parity
        self.blocks = blocks
        self.keys = keys
        self.stats = stats
        d = model.dim
        rows, cols, vals, shift_of = [], [], [], []
        pivots = []
        n = 0
        for blk in blocks:
            N = blk.nullspace
            if not N.shape[0]:
                continue
            r, c = np.nonzero(N)
            rows.append(r + n)
            cols.append(blk.unknowns[c])
            vals.append(N[r, c])
            for row in N:
                pivots.append(int(blk.unknowns[np.flatnonzero(row)[0]]))
            shift_of += [blk.code] * N.shape[0]
            n += N.shape[0]
        if n:
            M = sp.csr_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, d * d), dtype=np.int64
            )
        else:
            M = sp.csr_matrix((0, d * d), dtype=np.int64)
        order = np.argsort(pivots, kind="stable") if n else np.zeros(0, dtype=np.int64)
        self.basis = M[order] if n else M
        self.pivots = [pivots[i] for i in order]
        self.shift_codes = np.array([shift_of[i] for i in order], dtype=np.int64)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def subspace(self) -> SparseSubspace:
        return SparseSubspace(self.model.dim**2, self.basis, self.pivots, self.model.p)

    def matrices(self) -> list[sp.csr_matrix]:
        d = self.model.dim
        return [self.basis[i].reshape(d, d).tocsr() for i in range(self.dim)]

    def contains(self, M) -> bool:
        """Membership of a d x d matrix (dense or sparse)."""
        d = self.model.dim
        v = sp.csr_matrix(M, dtype=np.int64).reshape(1, d * d)
        return self.subspace().contains(v)


def _derivation_system(model: AlgebraModel, q: int, gens: list[int]):
    """COO entries of the super-Leibniz rows for generators ``gens``.

    Row ``(g, k, b)`` expresses the e_k-coefficient of
    ``D[g,b] - [Dg, b] - (-1)^{q|g|} [g, Db]``; unknown ``j*d + c`` is D[j,c].
    """
    d = model.dim
    par = model.parity
    s = model.struct
    J = [np.flatnonzero(par == r) for r in (0, 1)]
    bounds = np.searchsorted(s[:, 0], np.arange(d + 1))
    src_par = par[s[:, 0]] if s.shape[0] else np.zeros(0, dtype=np.int64)
    R, C, V = [], [], []
    for gpos, g in enumerate(gens):
        E = s[bounds[g] : bounds[g + 1]]
        eb, ek, ev = E[:, 1], E[:, 2], E[:, 3]
        base = gpos * d
        for r in (0, 1):
            Jr = J[r]
            if not Jr.size:
                continue
            # D applied to [g, b] = sum_c c_{gb}^c e_c ; unknown D[j, c], row (g, j, b)
            sel = (par[ek] + q) % 2 == r
            b, c, v = eb[sel], ek[sel], ev[sel]
            R.append(((base + Jr[None, :]) * d + b[:, None]).ravel())
            C.append((Jr[None, :] * d + c[:, None]).ravel())
            V.append(np.broadcast_to(v[:, None], (v.size, Jr.size)).ravel())
            # -(-1)^{q|g|} [g, D b] ; unknown D[j, b] with j the middle index of c_{gj}^k
            sel = (par[eb] + q) % 2 == r  # parity class of the source column b
            j, k, v = eb[sel], ek[sel], ev[sel]
            sg = -1 if (q * par[g]) % 2 else 1
            R.append(((base + k[:, None]) * d + Jr[None, :]).ravel())
            C.append((j[:, None] * d + Jr[None, :]).ravel())
            V.append(np.broadcast_to((-sg * v)[:, None], (v.size, Jr.size)).ravel())
        # -[D g, b] = -sum_j D[j, g] c_{jb}^k ; unknown D[j, g] with |j| = |g| + q
        sel = src_par == (par[g] + q) % 2
        F = s[sel]
        R.append((base + F[:, 2]) * d + F[:, 1])
        C.append(F[:, 0] * d + g)
        V.append(-F[:, 3])
    if not R:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z
    return np.concatenate(R), np.concatenate(C), np.concatenate(V)


def _derivation_unknowns(model: AlgebraModel, q: int, keys: GradingKeys):
    d = model.dim
    par = model.parity
    j, c = np.nonzero((par[:, None] - par[None, :] - q) % 2 == 0)
    ids = j.astype(np.int64) * d + c
    codes = keys.encode(keys.K[j] - keys.K[c]) if ids.size else np.zeros(0, dtype=np.int64)
    return ids, codes


def solve_superderivations(model: AlgebraModel, parity: int, generators: list[int] | None = None) -> DerivationSpace:
    """All superderivations of the given parity.

    The Leibniz law is imposed only for a generating set: the elements x for
    which ``D[x,y] = [Dx,y] + (-1)^{|D||x|}[x,Dy]`` holds for all y form a
    subalgebra, so a generating set suffices.
    """
    t0 = time.perf_counter()
    q = int(parity) % 2
    keys = GradingKeys(model)
    gens = generating_set(model, keys) if generators is None else list(generators)
    ids, codes = _derivation_unknowns(model, q, keys)
    R, C, V = _derivation_system(model, q, gens)
    blocks = solve_blocks(ids, codes, R, C, V, model.p)
    stats = {
        "unknowns": int(ids.size),
        "rows": int(sum(b.rows for b in blocks)),
        "blocks": len(blocks),
        "generators": len(gens),
        "wall_time": time.perf_counter() - t0,
    }
    return DerivationSpace(model, q, blocks, keys, stats)


# --- bilinear maps ------------------------------------------------------------------


class BilinearMap:
    """Bilinear map ``phi(e_a, e_b) = sum_k t[a,b,k] e_k`` of a fixed parity.

    Stored as a 1 x d^3 sparse row with flat index ``(a*d + b)*d + k``.
    """

    def __init__(self, dim: int, p: int, parity: int, flat: sp.spmatrix):
        self.dim = dim
        self.p = p
        self.parity = int(parity) % 2
        f = sp.csr_matrix(flat, dtype=np.int64).reshape(1, dim**3).tocsr()
        f.data %= p
        f.eliminate_zeros()
        f.sort_indices()
        self.flat = f

    @classmethod
    def from_entries(cls, dim: int, p: int, parity: int, a, b, k, v) -> "BilinearMap":
        a, b, k = (np.asarray(x, dtype=np.int64) for x in (a, b, k))
        flat = sp.csr_matrix((np.asarray(v, dtype=np.int64), (np.zeros_like(a), (a * dim + b) * dim + k)), shape=(1, dim**3))
        return cls(dim, p, parity, flat)

    def entries(self) -> np.ndarray:
        d = self.dim
        idx = self.flat.indices.astype(np.int64)
        return np.column_stack([idx // (d * d), idx // d % d, idx % d, self.flat.data])

    def is_zero(self) -> bool:
        return self.flat.nnz == 0

    def pair_matrix(self) -> sp.csr_matrix:
        """(d*d) x d matrix, row ``a*d + b`` holding phi(e_a, e_b)."""
        d = self.dim
        e = self.entries()
        return sp.csr_matrix((e[:, 3], (e[:, 0] * d + e[:, 1], e[:, 2])), shape=(d * d, d), dtype=np.int64)

    def left_matrix(self, x: int) -> sp.csr_matrix:
        """Matrix of phi(e_x, .) (target row, source column)."""
        d = self.dim
        e = self.entries()
        e = e[e[:, 0] == x]
        return sp.csr_matrix((e[:, 3], (e[:, 2], e[:, 1])), shape=(d, d), dtype=np.int64)

    def left_matrices(self) -> list[sp.csr_matrix]:
        d = self.dim
        e = self.entries()
        bounds = np.searchsorted(e[:, 0], np.arange(d + 1))
        return [
            sp.csr_matrix((e[lo:hi, 3], (e[lo:hi, 2], e[lo:hi, 1])), shape=(d, d), dtype=np.int64)
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]

    def right_matrices(self) -> list[sp.csr_matrix]:
        """Matrices of phi(., e_z) for every z."""
        d = self.dim
        e = self.entries()
        e = e[np.lexsort((e[:, 0], e[:, 1]))]
        bounds = np.searchsorted(e[:, 1], np.arange(d + 1))
        return [
            sp.csr_matrix((e[lo:hi, 3], (e[lo:hi, 2], e[lo:hi, 0])), shape=(d, d), dtype=np.int64)
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]

    def __call__(self, x, y) -> np.ndarray:
        """phi on coefficient vectors."""
        from .model import row_kron

        X = sp.csr_matrix(np.atleast_2d(np.asarray(x, dtype=np.int64) % self.p))
        Y = sp.csr_matrix(np.atleast_2d(np.asarray(y, dtype=np.int64) % self.p))
        return (row_kron(X, Y, self.dim) @ self.pair_matrix()).toarray()[0] % self.p

    def scale(self, c: int) -> "BilinearMap":
        return BilinearMap(self.dim, self.p, self.parity, self.flat * (int(c) % self.p))

    def __add__(self, other: "BilinearMap") -> "BilinearMap":
        if other.parity != self.parity:
            raise ValueError("cannot add bilinear maps of different parity")
        return BilinearMap(self.dim, self.p, self.parity, self.flat + other.flat)

    def __eq__(self, other):
        if not isinstance(other, BilinearMap):
            return NotImplemented
        diff = self.flat - other.flat
        diff.data %= self.p
        return self.dim == other.dim and self.parity == other.parity and diff.count_nonzero() == 0

    __hash__ = None

    def __repr__(self):
        return f"BilinearMap(dim={self.dim}, parity={self.parity}, nnz={self.flat.nnz})"


def inner_bider(model: AlgebraModel, lam: int = 1) -> BilinearMap:
    """``phi_lambda(x, y) = lambda [x, y]``."""
    lam = int(getattr(lam, "value", lam)) % model.p
    s = model.struct
    return BilinearMap.from_entries(model.dim, model.p, 0, s[:, 0], s[:, 1], s[:, 2], lam * s[:, 3])


# --- super-biderivations ----------------------------------------------------------------


def skew_factor(model: AlgebraModel, q: int, a, b):
    """``(-1)^{q|a| + q|b| + |a||b|}``: phi(a,b) + factor * phi(b,a) = 0 for skew maps."""
    pa, pb = model.parity[a], model.parity[b]
    return np.where((q * pa + q * pb + pa * pb) % 2 == 1, -1, 1)


@dataclass
class BiderSystem:
    """Reduced unknowns ``(a, i)``: phi(e_a, .) = sum_i c_{a,i} delta_i with delta_i in Der."""

    q: int
    ders: tuple  # (Der_0, Der_1)
    starts: np.ndarray  # unknown offset of slot a
    unknown_codes: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @property
    def unknowns(self) -> int:
        return int(self.starts[-1])

    def slot_space(self, a: int, model: AlgebraModel) -> DerivationSpace:
        return self.ders[(self.q + int(model.parity[a])) % 2]

    def matrix(self) -> sp.csr_matrix:
        """Global constraint matrix (rows compacted in order of first appearance key)."""
        if not self.rows.size:
            return sp.csr_matrix((0, self.unknowns), dtype=np.int64)
        ur, inv = np.unique(self.rows, return_inverse=True)
        M = sp.csr_matrix((self.vals, (inv, self.cols)), shape=(ur.size, self.unknowns), dtype=np.int64)
        M.sum_duplicates()
        return M


def _build_bider_system(model: AlgebraModel, parity: int, ders=None) -> BiderSystem:
    d = model.dim
    q = int(parity) % 2
    if ders is None:
        ders = (solve_superderivations(model, 0), solve_superderivations(model, 1))
    par = model.parity
    dims = np.array([ders[(q + int(par[a])) % 2].dim for a in range(d)], dtype=np.int64)
    starts = np.concatenate([[0], np.cumsum(dims)])
    keys = ders[0].keys
    R, C, V, codes = [], [], [], []
    for r in (0, 1):
        A = np.flatnonzero(par == r)
        D = ders[(q + r) % 2]
        if not A.size or not D.dim:
            continue
        # unknown codes: shift(delta_i) - key(a); shifts are stored as codes, so decode via keys
        shiftK = _decode_codes(keys, D.shift_codes)
        ucodes = keys.encode((shiftK[None, :, :] - keys.K[A][:, None, :]).reshape(-1, keys.K.shape[1]))
        codes.append((A, ucodes))
        coo = D.basis.tocoo()
        vi = coo.row.astype(np.int64)
        kk = coo.col // d
        bb = coo.col % d
        vv = coo.data.astype(np.int64)
        a = np.repeat(A, vi.size)
        i = np.tile(vi, A.size)
        k = np.tile(kk, A.size)
        b = np.tile(bb, A.size)
        v = np.tile(vv, A.size)
        x = np.minimum(a, b)
        y = np.maximum(a, b)
        fac = np.where(a < b, 1, skew_factor(model, q, a, b))
        fac = np.where(a == b, 1 + skew_factor(model, q, a, a), fac)
        R.append((x * d + y) * d + k)
        C.append(starts[a] + i)
        V.append(v * fac)
    ucode = np.zeros(int(starts[-1]), dtype=np.int64)
    for A, uc in codes:
        n = uc.size // A.size
        pos = (starts[A][:, None] + np.arange(n)[None, :]).ravel()
        ucode[pos] = uc
    z = np.zeros(0, dtype=np.int64)
    return BiderSystem(
        q,
        tuple(ders),
        starts,
        ucode,
        np.concatenate(R) if R else z,
        np.concatenate(C) if C else z,
        np.concatenate(V) if V else z,
    )


def _decode_codes(keys: GradingKeys, codes: np.ndarray) -> np.ndarray:
    out = np.zeros((codes.size, len(keys.mods)), dtype=np.int64)
    rest = codes.copy()
    for c in range(len(keys.mods) - 1, -1, -1):
        r = keys.radices[c]
        v = rest % r
        rest //= r
        out[:, c] = v if keys.mods[c] else v - keys.offset
    return out


def assemble_bider_system(model: AlgebraModel, parity: int, ders=None) -> sp.csr_matrix:
    """Skew rows over the reduced unknowns ``(a, i)`` (slot-wise derivation constraint built in)."""
    return _build_bider_system(model, parity, ders).matrix()


class BiderivationSpace:
    """Solved skew-symmetric super-biderivations of one parity, in tensor coordinates."""

    def __init__(self, model: AlgebraModel, parity: int, maps: list[BilinearMap]):
        self.model = model
        self.parity = parity
        d = model.dim
        if maps:
            rows = sp.vstack([m.flat for m in maps], format="csr")
        else:
            rows = sp.csr_matrix((0, d**3), dtype=np.int64)
        self.space = SparseSubspace.from_rows(rows, model.p)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> list[BilinearMap]:
        M = self.space.basis_rows
        return [BilinearMap(self.model.dim, self.model.p, self.parity, M[i]) for i in range(self.dim)]

    def contains(self, phi: BilinearMap) -> bool:
        return self.space.contains(phi.flat)


def _lift(model: AlgebraModel, system: BiderSystem, block: Block) -> list[BilinearMap]:
    """Tensors of the nullspace vectors of one block."""
    d = model.dim
    starts = system.starts
    uids = block.unknowns
    a = np.searchsorted(starts, uids, side="right") - 1
    i = uids - starts[a]
    out = []
    for row in block.nullspace:
        acc = sp.csr_matrix((1, d**3), dtype=np.int64)
        for pos in np.flatnonzero(row):
            D = system.slot_space(int(a[pos]), model)
            coo = D.basis[int(i[pos])].tocoo()
            k = coo.col // d
            b = coo.col % d
            flat = (int(a[pos]) * d + b) * d + k
            acc = acc + sp.csr_matrix((coo.data * int(row[pos]), (np.zeros_like(flat), flat)), shape=(1, d**3))
        out.append(BilinearMap(d, model.p, system.q, acc))
    return out


@dataclass
class SolverReport:
    model_id: str
    parity: int
    unknowns: int
    rows: int
    blocks: int
    nullspace_dim: int
    der_dims: tuple
    verdict: str | None = None
    lam: int | None = None
    wall_time: float = 0.0
    postchecks: dict = field(default_factory=dict)
    witness: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "parity": self.parity,
            "unknowns": self.unknowns,
            "rows": self.rows,
            "blocks": self.blocks,
            "nullspace_dim": self.nullspace_dim,
            "der_dims": list(self.der_dims),
            "verdict": self.verdict,
            "lambda": self.lam,
            "wall_time": self.wall_time,
            "postchecks": self.postchecks,
            "witness": self.witness,
        }


def solve_super_biderivations(model: AlgebraModel, parity: int, ders=None, postcheck: bool = True):
    """Skew-symmetric super-biderivations of the given parity.

    Returns ``(BiderivationSpace, SolverReport)``.  Every basis vector is
    re-checked against the left derivation law, the right derivation law
    and the skew rule on all basis triples/pairs; a failure raises
    :class:`ConsistencyError`.
    """
    from .identities import check_left_law, check_right_law, check_skew_rule

    t0 = time.perf_counter()
    q = int(parity) % 2
    if ders is None:
        ders = (solve_superderivations(model, 0), solve_superderivations(model, 1))
    system = _build_bider_system(model, q, ders)
    uids = np.arange(system.unknowns, dtype=np.int64)
    blocks = solve_blocks(uids, system.unknown_codes, system.rows, system.cols, system.vals, model.p)
    maps: list[BilinearMap] = []
    for blk in blocks:
        if blk.nullspace.shape[0]:
            maps += _lift(model, system, blk)
    space = BiderivationSpace(model, q, maps)
    report = SolverReport(
        model_id=model_id(model),
        parity=q,
        unknowns=system.unknowns,
        rows=int(sum(b.rows for b in blocks)),
        blocks=len(blocks),
        nullspace_dim=space.dim,
        der_dims=(ders[0].dim, ders[1].dim),
    )
    if postcheck:
        for n, phi in enumerate(space.basis):
            for check in (check_left_law, check_right_law, check_skew_rule):
                res = check(phi, model)
                report.postchecks.setdefault(res.name, True)
                if not res.ok:
                    report.postchecks[res.name] = False
                    raise ConsistencyError(f"solved biderivation {n} fails {res.name}: {res.counterexample}")
    report.witness = [m.entries().tolist() for m in space.basis]
    report.wall_time = time.perf_counter() - t0
    return space, report


def model_id(model: AlgebraModel) -> str:
    import hashlib

    h = hashlib.sha256()
    h.update(str(model.p).encode())
    h.update(model.parity.astype(np.int64).tobytes())
    h.update(model.canonical_rows().astype(np.int64).tobytes())
    tag = model.name or model.kind
    return f"{tag} [{h.hexdigest()[:12]}]"


# --- comparison with inner maps -----------------------------------------------------


@dataclass
class Comparison:
    verdict: str  # "equal" | "proper superset" | "disjoint"
    lam: int | None
    bder_dim: int
    inner_dim: int
    witness: list | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "lambda": self.lam,
            "bder_dim": self.bder_dim,
            "inner_dim": self.inner_dim,
            "witness": self.witness,
        }


def compare_with_inner(bder: BiderivationSpace, model: AlgebraModel) -> Comparison:
    """Compare a solved even space with ``{lambda [.,.]}``.

    ``lam`` is the scalar with ``basis vector = lam * [.,.]`` when equal.
    """
    C = inner_bider(model, 1)
    space = bder.space
    inner_dim = 0 if C.is_zero() else 1
    if C.is_zero():
        if space.dim == 0:
            return Comparison("equal", None, 0, 0)
        return Comparison("proper superset", None, space.dim, 0, bder.basis[0].entries()[:8].tolist())
    if not space.contains(C.flat):
        res = space.reduce(C.flat)
        return Comparison("disjoint", None, space.dim, 1, [int(x) for x in res.indices[:8]])
    if space.dim == 1:
        b = space.basis_rows
        piv = space.pivot_columns[0]
        c = int(C.flat[0, piv])
        lam = int(b[0, piv]) * pow(c, -1, model.p) % model.p
        return Comparison("equal", lam, 1, 1)
    inner_span = SparseSubspace.from_rows(C.flat, model.p)
    for phi in bder.basis:
        if not inner_span.contains(phi.flat):
            return Comparison("proper superset", None, space.dim, 1, phi.entries()[:8].tolist())
    raise ConsistencyError("basis vectors all inside a 1-dim span but space has dim > 1")
