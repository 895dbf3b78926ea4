from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from cartansuper.kernels import compiled_backend, python_backend
from cartansuper.linalg import IncrementalSpan, LinearSubspace, SparseSubspace, nullspace, rank, rref

BACKENDS = [python_backend] + ([compiled_backend] if compiled_backend is not None else [])


@st.composite
def matrices(draw, max_rows=9, max_cols=9):
    p = draw(st.sampled_from([3, 5, 7]))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # sparse-ish entries so that rank deficiency is common
    M = draw(arrays(np.int64, (r, c), elements=st.sampled_from([0, 0, 0, 1, 2, p - 1])))
    return M % p, p


def sympy_rank(M, p):
    F = GF(p)
    return DomainMatrix([[F(int(x)) for x in row] for row in M], M.shape, F).rank()


def is_rref(R, piv, p):
    if R.shape[0] != len(piv):
        return False
    if list(piv) != sorted(set(int(c) for c in piv)):
        return False
    for r, c in enumerate(piv):
        if R[r, c] != 1 or np.any(R[:r, c]) or np.any(R[r + 1 :, c]) or np.any(R[r, :c]):
            return False
    return True


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rref_properties(Mp):
    M, p = Mp
    R, piv = rref(M, p)
    assert is_rref(R, piv, p)
    assert len(piv) == sympy_rank(M, p)
    # same row space
    assert LinearSubspace.span(np.vstack([R, M]), M.shape[1], p).dim == len(piv)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_nullspace_properties(Mp):
    M, p = Mp
    N = nullspace(M, p)
    assert N.shape[0] + rank(M, p) == M.shape[1]
    assert not np.any((M @ N.T) % p)
    if N.shape[0]:
        _, piv = rref(N, p)
        assert is_rref(N, piv, p)


@settings(max_examples=150, deadline=None)
@given(matrices(max_rows=12, max_cols=10))
def test_backends_agree(Mp):
    M, p = Mp
    outs = []
    for be in BACKENDS:
        A = np.ascontiguousarray(M.copy())
        piv = be.rref_inplace(A, p)
        el = be.SparseEliminator(M.shape[1], p)
        S = sp.csr_matrix(M)
        el.add_rows(S.indptr, S.indices, S.data)
        outs.append((A[: len(piv)].tolist(), list(piv), np.asarray(el.row_space()).tolist(), np.asarray(el.nullspace()).tolist()))
    assert all(o == outs[0] for o in outs)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_incremental_span_matches_span(Mp, data):
    M, p = Mp
    inc = IncrementalSpan(M.shape[1], p)
    flags = [inc.add(row) for row in M]
    assert sum(flags) == rank(M, p)
    assert inc.subspace() == LinearSubspace.span(M, M.shape[1], p)


@settings(max_examples=100, deadline=None)
@given(matrices(), matrices())
def test_sparse_subspace_matches_dense(Mp, Np):
    M, p = Mp
    N = Np[0] % p
    n = M.shape[1]
    dense = LinearSubspace.span(M, n, p)
    sparse = SparseSubspace.from_rows(sp.csr_matrix(M), p)
    assert sparse.dim == dense.dim
    assert np.array_equal(sparse.to_dense().basis_rows, dense.basis_rows)
    assert sparse == SparseSubspace.from_dense(dense)
    if N.shape[1] == n:
        for row in N:
            assert sparse.contains(sp.csr_matrix(row)) == dense.contains(row)


def test_subspace_membership_and_coordinates():
    p = 5
    V = LinearSubspace.span([[1, 2, 0, 1], [0, 0, 1, 3]], 4, p)
    v = (2 * np.array([1, 2, 0, 1]) + 3 * np.array([0, 0, 1, 3])) % p
    assert V.contains(v)
    assert np.array_equal(V.coordinates(v), [2, 3])
    assert not V.contains([0, 1, 0, 0])
    with pytest.raises(ValueError):
        V.coordinates([0, 1, 0, 0])
    assert V.contains_space(LinearSubspace.span([v], 4, p))
    assert LinearSubspace.zero(4, p).dim == 0 and LinearSubspace.full(4, p).dim == 4


def test_eliminator_early_stop():
    p = 3
    el = python_backend.SparseEliminator(2, p)
    S = sp.csr_matrix(np.eye(2, dtype=np.int64))
    assert el.add_rows(S.indptr, S.indices, S.data) == 2
    assert el.nullspace().shape == (0, 2)
