"""Witt type W(m,n;t) and special type S(m,n;t) as explicit structure-constant models."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import IncrementalSpan, LinearSubspace, as_residues, rref
from .model import AlgebraModel, ConsistencyError, ModelError, check_dim
from .superpoly import (
    ShapeError,
    ShapeParams,
    SuperMonomial,
    SuperPolynomial,
    apply_D,
    arithmetic,
)

WeightVector = tuple  # (m*n) residues, index (k0-1)*n + (k1-m-1)


class WittVector:
    """``sum_i f_i D_i`` with ``f_i`` in Lambda(m,n;t).

    Stored sparsely as ``{(monomial_index, i): coefficient}``.
    """

    __slots__ = ("shape", "_c")

    def __init__(self, shape: ShapeParams, components: Sequence[SuperPolynomial] | None = None):
        self.shape = shape
        self._c: dict[tuple[int, int], int] = {}
        if components is not None:
            if len(components) != shape.s:
                raise ShapeError(f"expected {shape.s} components, got {len(components)}")
            for i, f in enumerate(components, start=1):
                if f.shape != shape:
                    raise ShapeError("component shape mismatch")
                for k, v in f.items():
                    self._c[(k, i)] = v

    @classmethod
    def _raw(cls, shape: ShapeParams, c: dict) -> "WittVector":
        obj = cls.__new__(cls)
        obj.shape = shape
        obj._c = {k: v for k, v in c.items() if v % shape.p}
        return obj

    @classmethod
    def basis(cls, shape: ShapeParams, mono: int, j: int) -> "WittVector":
        return cls._raw(shape, {(mono, j): 1})

    @classmethod
    def partial(cls, shape: ShapeParams, j: int) -> "WittVector":
        """The constant vector field D_j."""
        shape.check_var(j)
        return cls.basis(shape, 0, j)

    def component(self, i: int) -> SuperPolynomial:
        return SuperPolynomial._raw(self.shape, {k: v for (k, j), v in self._c.items() if j == i})

    @property
    def components(self) -> list[SuperPolynomial]:
        return [self.component(i) for i in range(1, self.shape.s + 1)]

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    @property
    def parity(self) -> int:
        sh = self.shape
        ps = {(sh.mono_parity(k) + sh.tau(j)) % 2 for (k, j) in self._c}
        if len(ps) > 1:
            raise ValueError("vector field is not Z2-homogeneous")
        return ps.pop() if ps else 0

    def coords(self) -> np.ndarray:
        """Coordinates in the W basis (index ``monomial * (m+n) + j - 1``)."""
        s = self.shape.s
        v = np.zeros(self.shape.n_monomials * s, dtype=np.int64)
        for (k, j), c in self._c.items():
            v[k * s + j - 1] = c
        return v

    @classmethod
    def from_coords(cls, shape: ShapeParams, v) -> "WittVector":
        v = as_residues(v, shape.p)
        s = shape.s
        return cls._raw(shape, {(int(i) // s, int(i) % s + 1): int(v[i]) for i in np.flatnonzero(v)})

    def _combine(self, other: "WittVector", sign: int) -> "WittVector":
        if not isinstance(other, WittVector) or other.shape != self.shape:
            raise ShapeError("shape mismatch between vector fields")
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = (out.get(k, 0) + sign * v) % self.shape.p
        return WittVector._raw(self.shape, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c: int) -> "WittVector":
        p = self.shape.p
        return WittVector._raw(self.shape, {k: v * c % p for k, v in self._c.items()})

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.shape == other.shape and self._c == other._c

    def __hash__(self):
        return hash((self.shape, tuple(sorted(self._c.items()))))

    def apply(self, f: SuperPolynomial) -> SuperPolynomial:
        """Act on Lambda as the operator ``sum_i f_i D_i``."""
        out = SuperPolynomial(self.shape)
        for i in range(1, self.shape.s + 1):
            fi = self.component(i)
            if fi:
                out = out + fi * apply_D(i, f)
        return out

    def __repr__(self):
        if not self._c:
            return "0"
        m = self.shape.m
        return " + ".join(
            f"{v}*{SuperMonomial.from_index(self.shape, k).label(m)}*D{j}" for (k, j), v in self.items()
        )


def _basis_bracket(shape: ShapeParams, f: int, i: int, g: int, j: int) -> list[tuple[int, int, int]]:
    """``[x^f D_i, x^g D_j]`` as ``[(monomial, var, coef)]`` (unreduced)."""
    ar = arithmetic(shape)
    out = []
    c1, m1 = ar.deriv(i, g)
    if c1:
        c2, m2 = ar.mul(f, m1)
        if c2:
            out.append((m2, j, c1 * c2))
    c3, m3 = ar.deriv(j, f)
    if c3:
        c4, m4 = ar.mul(g, m3)
        if c4:
            pa = shape.mono_parity(f) + shape.tau(i)
            pb = shape.mono_parity(g) + shape.tau(j)
            sign = -1 if pa * pb % 2 else 1
            out.append((m4, i, -sign * c3 * c4))
    return out


def witt_bracket(a: WittVector, b: WittVector) -> WittVector:
    """``[fD_i, gD_j] = f D_i(g) D_j - (-1)^{|fD_i||gD_j|} g D_j(f) D_i``, bilinearly."""
    if a.shape != b.shape:
        raise ShapeError("shape mismatch between vector fields")
    shape = a.shape
    p = shape.p
    out: dict[tuple[int, int], int] = defaultdict(int)
    for (f, i), x in a._c.items():
        for (g, j), y in b._c.items():
            for mono, var, c in _basis_bracket(shape, f, i, g, j):
                out[(mono, var)] = (out[(mono, var)] + c * x * y) % p
    return WittVector._raw(shape, out)


def special_generator(i: int, j: int, f: SuperPolynomial) -> WittVector:
    """``D_ij(f) = f_i D_i + f_j D_j`` with
    ``f_i = -(-1)^{|f|(tau(i)+tau(j))} D_j(f)`` and ``f_j = (-1)^{tau(i)tau(j)} D_i(f)``.

    For i == j both terms land on the same partial and are summed.
    """
    shape = f.shape
    ti, tj = shape.tau(i), shape.tau(j)
    df = f.parity
    si = 1 if df * (ti + tj) % 2 else -1
    sj = -1 if ti * tj else 1
    comps = [SuperPolynomial(shape) for _ in range(shape.s)]
    comps[i - 1] = comps[i - 1] + apply_D(j, f).scale(si)
    comps[j - 1] = comps[j - 1] + apply_D(i, f).scale(sj)
    return WittVector(shape, comps)


def _special_coords(shape: ShapeParams, i: int, j: int, mono: int) -> dict[int, int]:
    """Sparse W-coordinates of ``D_ij(x^mono)``."""
    ar = arithmetic(shape)
    p, s = shape.p, shape.s
    ti, tj = shape.tau(i), shape.tau(j)
    df = shape.mono_parity(mono)
    out: dict[int, int] = defaultdict(int)
    c, k = ar.deriv(j, mono)
    if c:
        sign = 1 if df * (ti + tj) % 2 else -1
        out[k * s + i - 1] += sign * c
    c, k = ar.deriv(i, mono)
    if c:
        sign = -1 if ti * tj else 1
        out[k * s + j - 1] += sign * c
    return {key: v % p for key, v in out.items() if v % p}


# --- weights -----------------------------------------------------------------


def torus_pairs(shape: ShapeParams) -> list[tuple[int, int]]:
    return [(k0, k1) for k0 in shape.even_vars for k1 in shape.odd_vars]


def special_weight(shape: ShapeParams, alpha: Sequence[int], u: Sequence[int], i: int, j: int) -> WeightVector:
    """Eigenvalues of ``ad D_{k0k1}(x_{k0}x_{k1})`` on ``D_ij(x^(alpha) x^u)``, mod p."""
    us = set(u)
    out = []
    for k0, k1 in torus_pairs(shape):
        w = alpha[k0 - 1] + (k1 in us) - (i == k0) - (j == k0) - (i == k1) - (j == k1)
        out.append(w % shape.p)
    return tuple(out)


def witt_weight(shape: ShapeParams, alpha: Sequence[int], u: Sequence[int], j: int) -> WeightVector:
    """Torus eigenvalues on the W basis element ``x^(alpha) x^u D_j``."""
    us = set(u)
    return tuple(
        (alpha[k0 - 1] + (k1 in us) - (j == k0) - (j == k1)) % shape.p for k0, k1 in torus_pairs(shape)
    )


def _torus_witt_coords(shape: ShapeParams) -> list[dict[int, int]]:
    out = []
    for k0, k1 in torus_pairs(shape):
        alpha = [0] * shape.m
        alpha[k0 - 1] = 1
        mono = shape.encode(alpha, shape.mask_of([k1]))
        out.append(_special_coords(shape, k0, k1, mono))
    return out


# --- model construction ---------------------------------------------------


def _witt_label(shape: ShapeParams, mono: int, j: int) -> str:
    lab = SuperMonomial.from_index(shape, mono).label(shape.m)
    return f"D{j}" if lab == "1" else f"{lab}*D{j}"


def build_witt_model(shape: ShapeParams, with_torus: bool = True) -> AlgebraModel:
    """W(m,n;t) in the monomial basis ``x^(alpha) x^u D_j`` (index ``mono*(m+n) + j-1``)."""
    s = shape.s
    nm = shape.n_monomials
    d = nm * s
    check_dim(d)
    labels, parity, zdeg, data, weights = [], [], [], [], []
    for mono in range(nm):
        alpha, mask = shape.decode(mono)
        u = shape.word_of(mask)
        for j in range(1, s + 1):
            labels.append(_witt_label(shape, mono, j))
            parity.append((shape.mono_parity(mono) + shape.tau(j)) % 2)
            zdeg.append(shape.mono_degree(mono) - 1)
            data.append((alpha, u, j))
            weights.append(witt_weight(shape, alpha, u, j))
    rows = []
    for a in range(d):
        f, i = divmod(a, s)
        for b in range(a, d):
            if a == b and parity[a] == 0:
                continue
            g, j = divmod(b, s)
            acc: dict[int, int] = defaultdict(int)
            for mono, var, c in _basis_bracket(shape, f, i + 1, g, j + 1):
                acc[mono * s + var - 1] += c
            for k, c in acc.items():
                if c % shape.p:
                    rows.append((a, b, k, c % shape.p))
    torus = None
    if with_torus:
        torus = np.zeros((shape.m * shape.n, d), dtype=np.int64)
        for r, coords in enumerate(_torus_witt_coords(shape)):
            for k, c in coords.items():
                torus[r, k] = c
    return AlgebraModel.from_canonical(
        shape.p,
        labels,
        parity,
        zdeg,
        rows,
        kind="witt",
        name=f"W({shape.m},{shape.n};{','.join(map(str, shape.t))}) over F_{shape.p}",
        shape=shape,
        torus=torus,
        weights=np.array(weights, dtype=np.int64) if with_torus else None,
        basis_data=tuple(data),
    )


@dataclass(frozen=True)
class SpecialDatum:
    """Defining data ``D_ij(x^(alpha) x^u)`` of an S basis element."""

    i: int
    j: int
    alpha: tuple[int, ...]
    u: tuple[int, ...]

    def label(self, m: int) -> str:
        return f"D{self.i}{self.j}({SuperMonomial(self.alpha, self.u).label(m)})"


class _KeyedExpresser:
    """Expresses vectors of a fixed homogeneous key in a small set of basis rows."""

    def __init__(self, indices: list[int], rows: np.ndarray, p: int):
        self.indices = np.array(indices, dtype=np.int64)
        self.p = p
        support = np.flatnonzero(np.any(rows != 0, axis=0))
        self.support = support
        B = rows[:, support] % p
        k = B.shape[0]
        # invert B restricted to its pivot columns
        _, piv = rref(B, p)
        if len(piv) != k:
            raise ConsistencyError("S basis rows are dependent")
        self.cols = support[piv]
        R, pv = rref(np.hstack([B[:, piv].T, np.eye(k, dtype=np.int64)]), p)
        self.inv_t = R[:, k:]  # inverse of B[:, piv]^T
        self.rows = rows

    def express(self, v: np.ndarray) -> np.ndarray:
        c = (self.inv_t @ v[self.cols]) % self.p
        if np.any((c @ self.rows - v) % self.p):
            raise ConsistencyError("bracket left the span of S")
        return c


def _special_spanning(shape: ShapeParams):
    """Spanning set of S in lexicographic (i, j, alpha, u) order, i <= j.

    ``D_ji`` is a scalar multiple of ``D_ij``, so i > j adds nothing, but the
    odd diagonal ``D_ii(f) = -2 D_i(f) D_i`` is needed for closure.
    """
    for i in range(1, shape.s + 1):
        for j in range(i, shape.s + 1):
            for mono in range(shape.n_monomials):
                coords = _special_coords(shape, i, j, mono)
                if coords:
                    yield i, j, mono, coords


def _witt_key(shape: ShapeParams, widx: int, wdata) -> tuple:
    alpha, u, j = wdata[widx]
    mono = widx // shape.s
    return (
        (shape.mono_parity(mono) + shape.tau(j)) % 2,
        shape.mono_degree(mono) - 1,
        witt_weight(shape, alpha, u, j),
    )


def build_special_model(shape: ShapeParams, with_torus: bool = True) -> AlgebraModel:
    """S(m,n;t): greedy basis from the spanning set ``D_ij(x^(alpha)x^u)``, i <= j.

    Spanning vectors are homogeneous for (parity, Z-degree, torus weight), and
    the W monomial basis is too, so greedy independence is decided inside each
    key class; the resulting basis is the same as a global greedy pass.
    """
    s = shape.s
    dW = shape.n_monomials * s
    check_dim(dW)
    wdata = []
    for mono in range(shape.n_monomials):
        alpha, mask = shape.decode(mono)
        for j in range(1, s + 1):
            wdata.append((alpha, shape.word_of(mask), j))
    spans: dict[tuple, IncrementalSpan] = {}
    chosen = []  # (key, datum, coords)
    for i, j, mono, coords in _special_spanning(shape):
        key = _witt_key(shape, next(iter(coords)), wdata)
        span = spans.get(key)
        if span is None:
            span = spans[key] = IncrementalSpan(dW, shape.p)
        vec = np.zeros(dW, dtype=np.int64)
        for k, c in coords.items():
            vec[k] = c
        if span.add(vec):
            alpha, mask = shape.decode(mono)
            chosen.append((key, SpecialDatum(i, j, alpha, shape.word_of(mask)), vec))
    d = len(chosen)
    check_dim(d)
    emb = np.array([v for _, _, v in chosen], dtype=np.int64).reshape(d, dW)
    by_key: dict[tuple, list[int]] = defaultdict(list)
    for idx, (key, _, _) in enumerate(chosen):
        by_key[key].append(idx)
    expressers = {key: _KeyedExpresser(idx, emb[idx], shape.p) for key, idx in by_key.items()}

    witt_terms = [
        [(k // s, k % s + 1, c) for k, c in zip(np.flatnonzero(v), v[np.flatnonzero(v)])] for v in emb
    ]
    keys = [key for key, _, _ in chosen]
    rows = []
    p = shape.p
    par = [key[0] for key in keys]
    for a in range(d):
        for b in range(a, d):
            if a == b and par[a] == 0:
                continue
            acc: dict[int, int] = defaultdict(int)
            for f, i, x in witt_terms[a]:
                for g, j, y in witt_terms[b]:
                    for mono, var, c in _basis_bracket(shape, f, i, g, j):
                        acc[mono * s + var - 1] += c * int(x) * int(y)
            acc = {k: c % p for k, c in acc.items() if c % p}
            if not acc:
                continue
            ka, kb = keys[a], keys[b]
            target = (
                (ka[0] + kb[0]) % 2,
                ka[1] + kb[1],
                tuple((x + y) % p for x, y in zip(ka[2], kb[2])),
            )
            ex = expressers.get(target)
            if ex is None:
                raise ConsistencyError(f"bracket of S basis elements {a},{b} has no S component of its key")
            v = np.zeros(dW, dtype=np.int64)
            for k, c in acc.items():
                v[k] = c
            coef = ex.express(v)
            for pos in np.flatnonzero(coef):
                rows.append((a, b, int(ex.indices[pos]), int(coef[pos])))
    data = tuple(datum for _, datum, _ in chosen)
    model = AlgebraModel.from_canonical(
        p,
        [datum.label(shape.m) for datum in data],
        par,
        [key[1] for key in keys],
        rows,
        kind="special",
        name=f"S({shape.m},{shape.n};{','.join(map(str, shape.t))}) over F_{p}",
        shape=shape,
        weights=np.array([key[2] for key in keys], dtype=np.int64) if with_torus else None,
        basis_data=data,
        embedding=emb,
    )
    model.meta["expressers"] = expressers
    if with_torus:
        model.torus = np.array([express_in_special(model, c) for c in _torus_witt_coords(shape)], dtype=np.int64)
    return model


def attach_special_embedding(model: AlgebraModel) -> AlgebraModel:
    """Recompute the W-embedding of a loaded S model from its ``basis_data``."""
    if model.kind != "special" or model.shape is None or model.basis_data is None:
        raise ModelError("model has no special basis data")
    shape = model.shape
    dW = shape.n_monomials * shape.s
    wdata = _witt_data(shape)
    emb = np.zeros((model.dim, dW), dtype=np.int64)
    by_key: dict[tuple, list[int]] = defaultdict(list)
    for idx, dat in enumerate(model.basis_data):
        mono = shape.encode(dat.alpha, shape.mask_of(dat.u))
        coords = _special_coords(shape, dat.i, dat.j, mono)
        if not coords:
            raise ModelError(f"basis element {model.labels[idx]} is zero")
        for k, c in coords.items():
            emb[idx, k] = c
        by_key[_witt_key(shape, next(iter(coords)), wdata)].append(idx)
    model.embedding = emb
    model.meta["expressers"] = {key: _KeyedExpresser(idx, emb[idx], shape.p) for key, idx in by_key.items()}
    return model


def express_in_special(model: AlgebraModel, witt_coords) -> np.ndarray:
    """S-basis coordinates of an element of S given by W coordinates (dense or sparse dict)."""
    if model.kind != "special":
        raise ModelError("model was not built by build_special_model")
    shape = model.shape
    dW = shape.n_monomials * shape.s
    if isinstance(witt_coords, dict):
        v = np.zeros(dW, dtype=np.int64)
        for k, c in witt_coords.items():
            v[k] = c
    else:
        v = as_residues(witt_coords, shape.p)
    out = np.zeros(model.dim, dtype=np.int64)
    if not v.any():
        return out
    # split by W key: each homogeneous part is expressed separately
    wdata = model.meta.setdefault("wdata", _witt_data(shape))
    parts: dict[tuple, np.ndarray] = {}
    for k in np.flatnonzero(v):
        key = _witt_key(shape, int(k), wdata)
        part = parts.setdefault(key, np.zeros(dW, dtype=np.int64))
        part[k] = v[k]
    for key, part in parts.items():
        ex = model.meta["expressers"].get(key)
        if ex is None:
            raise ConsistencyError("vector is not in S")
        out[ex.indices] = (out[ex.indices] + ex.express(part)) % shape.p
    return out


def _witt_data(shape: ShapeParams):
    out = []
    for mono in range(shape.n_monomials):
        alpha, mask = shape.decode(mono)
        for j in range(1, shape.s + 1):
            out.append((alpha, shape.word_of(mask), j))
    return out


def torus_basis(model: AlgebraModel) -> list[np.ndarray]:
    """Coordinates of the torus generators ``D_{k0k1}(x_{k0}x_{k1})`` in the model basis."""
    if model.torus is None:
        raise ModelError("model has no torus attached")
    return [row.copy() for row in model.torus]


def weight_of(model: AlgebraModel, elem) -> WeightVector:
    """Torus weight of a basis index, or of ``(alpha, u, i, j)`` data of ``D_ij(x^(alpha)x^u)``."""
    shape = model.shape
    if shape is None:
        raise ModelError("weights need a model built from shape parameters")
    if isinstance(elem, (int, np.integer)):
        if model.kind == "special":
            dat = model.basis_data[int(elem)]
            return special_weight(shape, dat.alpha, dat.u, dat.i, dat.j)
        if model.kind == "witt":
            alpha, u, j = model.basis_data[int(elem)]
            return witt_weight(shape, alpha, u, j)
        raise ModelError("basis data unavailable for this model")
    alpha, u, i, j = elem
    return special_weight(shape, tuple(alpha), tuple(u), int(i), int(j))


def weight_decomposition(model: AlgebraModel) -> dict[WeightVector, LinearSubspace]:
    """Group basis vectors by torus weight after checking they are simultaneous eigenvectors."""
    if model.torus is None or model.weights is None:
        raise ModelError("model has no torus attached")
    d, p = model.dim, model.p
    for r, h in enumerate(model.torus):
        H = model.ad(h).tocsc()
        # ad(h) e_a must equal w_r(a) e_a
        diag = H.diagonal() % p
        off = H.copy()
        off.setdiag(0)
        off.data %= p
        off.eliminate_zeros()
        if off.nnz:
            col = int(off.tocoo().col[0])
            raise ConsistencyError(f"basis vector {model.labels[col]} is not an eigenvector of torus generator {r}")
        bad = np.flatnonzero((diag - model.weights[:, r]) % p)
        if bad.size:
            raise ConsistencyError(f"weight table disagrees with ad(torus {r}) on {model.labels[bad[0]]}")
    groups: dict[WeightVector, list[int]] = defaultdict(list)
    for a in range(d):
        groups[tuple(int(x) for x in model.weights[a])].append(a)
    out = {}
    for w, idx in sorted(groups.items()):
        rows = np.zeros((len(idx), d), dtype=np.int64)
        rows[np.arange(len(idx)), idx] = 1
        out[w] = LinearSubspace(d, rows, tuple(idx), p)
    return out
