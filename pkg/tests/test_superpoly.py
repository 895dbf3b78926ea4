from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartansuper.fp import FpScalar
from cartansuper.superpoly import (
    ShapeError,
    ShapeParams,
    SuperMonomial,
    SuperPolynomial,
    apply_D,
    basis_monomials,
    mul_divided,
    mul_grassmann,
    mul_poly,
)

DESK = ShapeParams(2, 2, (1, 1), 3)


def mono(shape, alpha=None, u=(), c=1):
    return SuperPolynomial.monomial(shape, alpha, u, c)


# --- shape ---------------------------------------------------------------


def test_shape_derived_quantities():
    sh = ShapeParams(2, 2, (1, 2), 3)
    assert sh.pi == (2, 8)
    assert sh.xi == 12
    assert sh.s == 4
    assert list(sh.even_vars) == [1, 2] and list(sh.odd_vars) == [3, 4]
    assert sh.n_monomials == 3 * 9 * 4


@pytest.mark.parametrize(
    "kw,msg",
    [
        (dict(m=2, n=2, t=(1, 1), p=2), "p>2 required"),
        (dict(m=1, n=2, t=(1,), p=3), "m,n ≥ 2"),
        (dict(m=2, n=1, t=(1, 1), p=3), "m,n ≥ 2"),
        (dict(m=2, n=2, t=(1,), p=3), "entries"),
        (dict(m=2, n=2, t=(0, 1), p=3), "t_i"),
    ],
)
def test_shape_rejects(kw, msg):
    with pytest.raises(ShapeError, match=msg):
        ShapeParams(**kw)


def test_monomial_parity_and_degree():
    m = SuperMonomial((2, 1), (3, 4))
    assert m.parity == 0 and m.zdegree == 5
    assert SuperMonomial((0, 0), (4,)).parity == 1
    with pytest.raises(ShapeError):
        SuperMonomial((0, 0), (4, 3))


def test_index_round_trip():
    for k in range(DESK.n_monomials):
        assert SuperMonomial.from_index(DESK, k).index(DESK) == k


# --- divided powers -----------------------------------------------------------


def test_mul_divided_examples():
    sh1 = ShapeParams(1, 1, (1,), 3, allow_small=True)
    assert mul_divided((1,), (1,), sh1) == (FpScalar(2, 3), (2,))
    c, _ = mul_divided((2,), (1,), sh1)
    assert c.value == 0
    sh2 = ShapeParams(1, 1, (2,), 3, allow_small=True)
    c, idx = mul_divided((4,), (4,), sh2)
    assert (c.value, idx) == (math.comb(8, 4) % 3, (8,))
    assert c.value == 1


# --- Grassmann ---------------------------------------------------------------


def _perm_sign(word):
    # bubble sort swap count
    w, swaps = list(word), 0
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                w[j], w[j + 1] = w[j + 1], w[j]
                swaps += 1
    return -1 if swaps % 2 else 1


def test_mul_grassmann_examples():
    assert mul_grassmann((4,), (3,)) == (-1, (3, 4))
    assert mul_grassmann((3,), (3,))[0] == 0
    assert mul_grassmann((3, 4), (5, 6)) == (1, (3, 4, 5, 6))


def test_mul_grassmann_permutation_oracle():
    letters = range(3, 8)
    words = [w for r in range(4) for w in itertools.combinations(letters, r)]
    for u, v in itertools.product(words, repeat=2):
        sign, w = mul_grassmann(u, v)
        if set(u) & set(v):
            assert sign == 0
        else:
            assert w == tuple(sorted(u + v)) and sign == _perm_sign(u + v)


# --- products --------------------------------------------------------------


def test_mul_poly_examples():
    f = mono(DESK, (1, 0), (3,))
    g = mono(DESK, (1, 0), (4,))
    assert f * g == mono(DESK, (2, 0), (3, 4), 2)
    one = SuperPolynomial.one(DESK)
    h = mono(DESK, (1, 2), (4,)) + mono(DESK, (0, 1), (), 2)
    assert one * h == h and h * one == h
    assert mono(DESK, None, (3, 4)) * mono(DESK, None, (3,)) == SuperPolynomial(DESK)


def _reference_product(shape, a: SuperMonomial, b: SuperMonomial):
    """Factorial-formula product, valid at t = (1,...,1) where all alpha_i < p."""
    top = tuple(x + y for x, y in zip(a.alpha, b.alpha))
    if any(x > q for x, q in zip(top, shape.pi)):
        return SuperPolynomial(shape)
    coef = math.prod(math.comb(x, y) for x, y in zip(top, a.alpha))
    if set(a.u) & set(b.u):
        return SuperPolynomial(shape)
    coef *= _perm_sign(a.u + b.u)
    return mono(shape, top, tuple(sorted(a.u + b.u)), coef)


def test_mul_poly_matches_reference_exhaustive():
    basis = [SuperMonomial.from_index(DESK, k) for k in range(DESK.n_monomials)]
    for a, b in itertools.product(basis, repeat=2):
        got = mono(DESK, a.alpha, a.u) * mono(DESK, b.alpha, b.u)
        assert got == _reference_product(DESK, a, b), (a, b)


def test_supercommutative_and_closed_exhaustive():
    for shape in (DESK, ShapeParams(2, 3, (1, 2), 3)):
        basis = basis_monomials(shape)
        for f, g in itertools.product(basis, repeat=2):
            fg, gf = f * g, g * f
            sign = -1 if f.parity * g.parity else 1
            assert fg == gf.scale(sign)
            assert all(0 <= k < shape.n_monomials for k, _ in fg.items())


def test_associative_exhaustive():
    basis = basis_monomials(DESK)
    for f, g, h in itertools.product(basis, repeat=3):
        assert (f * g) * h == f * (g * h)


def test_shape_mismatch():
    other = ShapeParams(2, 2, (1, 1), 5)
    with pytest.raises(ShapeError):
        SuperPolynomial.one(DESK) * SuperPolynomial.one(other)


# --- derivations -----------------------------------------------------------------


def test_apply_D_examples():
    sh = ShapeParams(2, 2, (1, 1), 3)
    assert apply_D(1, mono(sh, (2, 0), (3,))) == mono(sh, (1, 0), (3,))
    assert apply_D(3, mono(sh, None, (3, 4))) == mono(sh, None, (4,))
    assert apply_D(4, mono(sh, None, (3, 4))) == mono(sh, None, (3,), -1)
    assert apply_D(3, mono(sh, None, (4,))).is_zero()
    assert apply_D(2, SuperPolynomial(sh)).is_zero()
    with pytest.raises(ShapeError):
        apply_D(5, SuperPolynomial.one(sh))


def _leibniz(i, f, g):
    shape = f.shape
    sign = -1 if shape.tau(i) * f.parity else 1
    return apply_D(i, f * g) == apply_D(i, f) * g + (f * apply_D(i, g)).scale(sign)


def test_super_leibniz_exhaustive():
    basis = basis_monomials(DESK)
    for i in range(1, DESK.s + 1):
        for f, g in itertools.product(basis, repeat=2):
            assert _leibniz(i, f, g)


def test_derivations_supercommute_exhaustive():
    for f in basis_monomials(DESK):
        for i, j in itertools.product(range(1, DESK.s + 1), repeat=2):
            sign = -1 if DESK.tau(i) * DESK.tau(j) else 1
            assert apply_D(i, apply_D(j, f)) == apply_D(j, apply_D(i, f)).scale(sign)


SHAPE_L = ShapeParams(2, 3, (1, 2), 5)


@st.composite
def homogeneous_poly(draw, shape=SHAPE_L):
    parity = draw(st.integers(0, 1))
    idx = [k for k in range(shape.n_monomials) if shape.mono_parity(k) == parity]
    terms = draw(st.dictionaries(st.sampled_from(idx), st.integers(1, shape.p - 1), max_size=4))
    return SuperPolynomial(shape, terms)


@settings(max_examples=1000, deadline=None)
@given(homogeneous_poly(), homogeneous_poly(), st.integers(1, SHAPE_L.s))
def test_super_leibniz_random(f, g, i):
    assert _leibniz(i, f, g)
