# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled elimination kernels over F_p (same API as ``_pykernels``)."""

import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector

cnp.import_array()

BACKEND = "cython"

ctypedef long long i64


cdef inline i64 _inv(i64 a, i64 p) nogil:
    cdef i64 t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def matmul_mod(a, b, long p):
    from ._pykernels import matmul_mod as _mm
    return _mm(a, b, p)


def rref_inplace(i64[:, ::1] M, i64 p):
    """Row-reduce ``M`` (int64 residues) to RREF in place; returns pivots."""
    cdef Py_ssize_t rows = M.shape[0], cols = M.shape[1]
    cdef Py_ssize_t r = 0, c, k, j, i
    cdef i64 inv, f, tmp
    piv_arr = np.zeros(min(rows, cols), dtype=np.int64)
    cdef i64[::1] pivots = piv_arr
    with nogil:
        for c in range(cols):
            if r == rows:
                break
            k = -1
            for i in range(r, rows):
                if M[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(cols):
                    tmp = M[r, j]
                    M[r, j] = M[k, j]
                    M[k, j] = tmp
            inv = _inv(M[r, c], p)
            if inv != 1:
                for j in range(c, cols):
                    M[r, j] = M[r, j] * inv % p
            for i in range(rows):
                if i != r and M[i, c] != 0:
                    f = M[i, c]
                    for j in range(c, cols):
                        if M[r, j] != 0:
                            M[i, j] = (M[i, j] - f * M[r, j]) % p
                            if M[i, j] < 0:
                                M[i, j] += p
            pivots[r] = c
            r += 1
        for i in range(r, rows):
            for j in range(cols):
                M[i, j] = 0
    return piv_arr[:r].copy()


cdef class SparseEliminator:
    """Incremental sparse row reduction over F_p.

    Pivot rows are stored sparsely in fully reduced form (pivot 1, zero in
    every other pivot column), so reducing an incoming row costs one pass
    over its entries plus the free columns of the pivot rows it touches.
    """

    cdef readonly Py_ssize_t ncols
    cdef readonly i64 p
    cdef vector[vector[int]] pcols
    cdef vector[vector[i64]] pvals
    cdef vector[char] has
    cdef vector[i64] acc
    cdef Py_ssize_t _rank

    def __init__(self, Py_ssize_t ncols, i64 p):
        self.ncols = ncols
        self.p = p
        self.pcols.resize(ncols)
        self.pvals.resize(ncols)
        self.has.assign(ncols, 0)
        self.acc.assign(ncols, 0)
        self._rank = 0

    @property
    def rank(self):
        return self._rank

    cdef void _reduce_acc(self, Py_ssize_t start) nogil:
        cdef Py_ssize_t j, t, n
        cdef i64 f, v, p = self.p
        cdef i64* acc = self.acc.data()
        cdef int* cols
        cdef i64* vals
        for j in range(start, self.ncols):
            if acc[j] != 0 and self.has[j]:
                f = acc[j]
                n = self.pcols[j].size()
                cols = self.pcols[j].data()
                vals = self.pvals[j].data()
                for t in range(n):
                    v = (acc[cols[t]] - f * vals[t]) % p
                    if v < 0:
                        v += p
                    acc[cols[t]] = v

    cdef void _absorb(self) nogil:
        # acc is reduced; promote its first nonzero to a new pivot row and
        # clear that column from the older pivot rows to stay fully reduced
        cdef Py_ssize_t j, lead = -1, t, u, nr, ni
        cdef i64 inv, f, v, p = self.p
        cdef i64* acc = self.acc.data()
        cdef vector[int] nc
        cdef vector[i64] nv
        for j in range(self.ncols):
            if acc[j] != 0:
                lead = j
                break
        if lead < 0:
            return
        inv = _inv(acc[lead], p)
        for j in range(lead, self.ncols):
            if acc[j] != 0:
                self.pcols[lead].push_back(<int>j)
                self.pvals[lead].push_back(acc[j] * inv % p)
                acc[j] = 0
        nr = self.pcols[lead].size()
        for j in range(lead):
            if not self.has[j]:
                continue
            ni = self.pcols[j].size()
            f = 0
            for t in range(ni):
                if self.pcols[j][t] == lead:
                    f = self.pvals[j][t]
                    break
                if self.pcols[j][t] > lead:
                    break
            if f == 0:
                continue
            nc.clear()
            nv.clear()
            t = 0
            u = 0
            while t < ni or u < nr:
                if u >= nr or (t < ni and self.pcols[j][t] < self.pcols[lead][u]):
                    nc.push_back(self.pcols[j][t])
                    nv.push_back(self.pvals[j][t])
                    t += 1
                elif t >= ni or self.pcols[lead][u] < self.pcols[j][t]:
                    v = (p - f * self.pvals[lead][u] % p) % p
                    if v != 0:
                        nc.push_back(self.pcols[lead][u])
                        nv.push_back(v)
                    u += 1
                else:
                    v = (self.pvals[j][t] - f * self.pvals[lead][u]) % p
                    if v < 0:
                        v += p
                    if v != 0:
                        nc.push_back(self.pcols[j][t])
                        nv.push_back(v)
                    t += 1
                    u += 1
            self.pcols[j].swap(nc)
            self.pvals[j].swap(nv)
        self.has[lead] = 1
        self._rank += 1

    def add_rows(self, indptr, indices, data):
        cdef i64[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
        cdef i64[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
        cdef i64[::1] dv = np.ascontiguousarray(data, dtype=np.int64)
        cdef Py_ssize_t nrows = ip.shape[0] - 1, r, t, start
        cdef i64 p = self.p, v
        cdef i64* acc = self.acc.data()
        with nogil:
            for r in range(nrows):
                if self._rank == self.ncols:
                    break
                start = self.ncols
                for t in range(ip[r], ip[r + 1]):
                    v = (acc[ix[t]] + dv[t]) % p
                    if v < 0:
                        v += p
                    acc[ix[t]] = v
                    if ix[t] < start:
                        start = ix[t]
                self._reduce_acc(start)
                self._absorb()
        return self._rank

    def add_dense(self, X):
        X = np.ascontiguousarray(X, dtype=np.int64) % self.p
        nz = X != 0
        indptr = np.concatenate([[0], np.cumsum(nz.sum(axis=1))]).astype(np.int64)
        rows, cols = np.nonzero(nz)
        return self.add_rows(indptr, cols.astype(np.int64), X[rows, cols])

    def pivots(self):
        return np.asarray([j for j in range(self.ncols) if self.has[j]], dtype=np.int64)

    def row_space(self):
        piv = self.pivots()
        R = np.zeros((piv.size, self.ncols), dtype=np.int64)
        cdef Py_ssize_t i, t
        for i in range(piv.size):
            for t in range(self.pcols[piv[i]].size()):
                R[i, self.pcols[piv[i]][t]] = self.pvals[piv[i]][t]
        rref_inplace(R, self.p)
        return R

    def nullspace(self):
        """RREF basis of the nullspace via back substitution per free column."""
        cdef Py_ssize_t n = self.ncols, j, t, k, nfree
        cdef i64 p = self.p, s
        free = [j for j in range(n) if not self.has[j]]
        nfree = len(free)
        out = np.zeros((nfree, n), dtype=np.int64)
        cdef i64[:, ::1] N = out
        cdef int* cols
        cdef i64* vals
        for k in range(nfree):
            N[k, free[k]] = 1
            with nogil:
                j = n - 1
                while j >= 0:
                    if self.has[j]:
                        s = 0
                        cols = self.pcols[j].data()
                        vals = self.pvals[j].data()
                        for t in range(1, self.pcols[j].size()):
                            s = (s + vals[t] * N[k, cols[t]]) % p
                        N[k, j] = (p - s) % p
                    j -= 1
        if nfree:
            rref_inplace(out, p)
        return out
