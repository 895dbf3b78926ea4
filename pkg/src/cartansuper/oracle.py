"""Independent slow paths used to cross-check the block solvers.

Nothing here shares assembly code with :mod:`cartansuper.solver`: rows are
generated one basis pair (or triple) at a time from plain nested dicts.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from .kernels import SparseEliminator, python_backend
from .linalg import LinearSubspace
from .model import AlgebraModel

BRUTE_FORCE_MAX_DIM = 12


def _bracket_dict(model: AlgebraModel) -> list[list[dict[int, int]]]:
    d = model.dim
    br = [[{} for _ in range(d)] for _ in range(d)]
    for a, b, k, c in model.struct.tolist():
        br[a][b][k] = c
    return br


def naive_derivation_space(model: AlgebraModel, parity: int) -> LinearSubspace:
    """Superderivations of one parity from the Leibniz rows of every basis pair.

    Unknown ``j*d + c`` is the matrix entry D[j, c]; only parity-compatible
    entries are unknowns.  Rows are grouped by Z-degree shift only (no
    torus weights) before elimination.
    """
    d, p = model.dim, model.p
    q = int(parity) % 2
    par = model.parity.tolist()
    deg = model.zdegree.tolist()
    br = _bracket_dict(model)
    J = [[j for j in range(d) if par[j] == r] for r in (0, 1)]
    blocks: dict[int, dict[tuple, dict[int, int]]] = defaultdict(lambda: defaultdict(lambda: defaultdict(int)))
    for x in range(d):
        for y in range(d):
            shift_base = -deg[x] - deg[y]
            s = -1 if (q * par[x]) % 2 else 1
            # D([x, y])
            for c, v in br[x][y].items():
                for j in J[(par[c] + q) % 2]:
                    blocks[deg[j] + shift_base][(x, y, j)][j * d + c] += v
            # -[D x, y]
            for j in J[(par[x] + q) % 2]:
                for k, v in br[j][y].items():
                    blocks[deg[k] + shift_base][(x, y, k)][j * d + x] -= v
            # -(-1)^{q|x|} [x, D y]
            for j in J[(par[y] + q) % 2]:
                for k, v in br[x][j].items():
                    blocks[deg[k] + shift_base][(x, y, k)][j * d + y] -= s * v
    unknowns: dict[int, list[int]] = defaultdict(list)
    for j in range(d):
        for c in J[(par[j] + q) % 2]:
            unknowns[deg[j] - deg[c]].append(j * d + c)
    basis = []
    for shift, cols in unknowns.items():
        cols.sort()
        where = {c: i for i, c in enumerate(cols)}
        elim = SparseEliminator(len(cols), p)
        indptr, indices, data = [0], [], []
        for _, row in sorted(blocks.get(shift, {}).items()):
            ent = sorted((where[c], v % p) for c, v in row.items() if v % p)
            indices += [c for c, _ in ent]
            data += [v for _, v in ent]
            indptr.append(len(indices))
        if len(indptr) > 1:
            elim.add_rows(np.array(indptr, np.int64), np.array(indices, np.int64), np.array(data, np.int64))
        N = elim.nullspace()
        for row in N:
            full = np.zeros(d * d, dtype=np.int64)
            full[cols] = row
            basis.append(full)
    return LinearSubspace.span(basis, d * d, p) if basis else LinearSubspace.zero(d * d, p)


def brute_force_biderivations(model: AlgebraModel, parity: int) -> LinearSubspace:
    """Skew-symmetric super-biderivations from the full d^3-unknown system.

    Unknown ``(a*d + b)*d + k`` is the coefficient of e_k in phi(e_a, e_b).
    Rows: the left derivation law on every basis triple, the skew rule on
    every pair, and vanishing of parity-forbidden coefficients.  Solved by
    dense elimination with the pure numpy kernel.
    """
    d, p = model.dim, model.p
    if d > BRUTE_FORCE_MAX_DIM:
        raise ValueError(f"brute force limited to dim <= {BRUTE_FORCE_MAX_DIM}")
    q = int(parity) % 2
    par = model.parity.tolist()
    br = _bracket_dict(model)
    n = d**3

    def u(a, b, k):
        return (a * d + b) * d + k

    rows = []
    for x in range(d):
        for y in range(d):
            for z in range(d):
                acc = defaultdict(lambda: np.zeros(n, dtype=np.int64))
                # phi(x, [y, z])
                for c, v in br[y][z].items():
                    for k in range(d):
                        acc[k][u(x, c, k)] += v
                # -[phi(x, y), z]
                for j in range(d):
                    for k, v in br[j][z].items():
                        acc[k][u(x, y, j)] -= v
                # -(-1)^{(q+|x|)|y|} [y, phi(x, z)]
                s = -1 if ((q + par[x]) * par[y]) % 2 else 1
                for j in range(d):
                    for k, v in br[y][j].items():
                        acc[k][u(x, z, j)] -= s * v
                rows += [r for r in acc.values() if np.any(r % p)]
    for a in range(d):
        for b in range(d):
            f = -1 if (q * par[a] + q * par[b] + par[a] * par[b]) % 2 else 1
            for k in range(d):
                r = np.zeros(n, dtype=np.int64)
                r[u(a, b, k)] += 1
                r[u(b, a, k)] += f
                if np.any(r % p):
                    rows.append(r)
                if (par[a] + par[b] + q + par[k]) % 2:
                    r = np.zeros(n, dtype=np.int64)
                    r[u(a, b, k)] = 1
                    rows.append(r)
    M = np.array(rows, dtype=np.int64).reshape(-1, n) % p
    elim = python_backend.SparseEliminator(n, p)
    if M.shape[0]:
        elim.add_dense(M)
    N = elim.nullspace()
    return LinearSubspace.from_rref(N, p) if N.shape[0] else LinearSubspace.zero(n, p)
