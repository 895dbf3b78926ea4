from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cartansuper.fp import FieldError, FpScalar, binom_mod_p, check_modulus, fp_add, fp_inv, fp_mul, fp_neg


@pytest.mark.parametrize("p,a,b,out", [(3, 2, 2, 1), (5, 0, 4, 4), (3, 1, 2, 0)])
def test_add_examples(p, a, b, out):
    assert fp_add(FpScalar(a, p), FpScalar(b, p)) == FpScalar(out, p)


@pytest.mark.parametrize("p,a,out", [(5, 2, 3), (3, 2, 2), (7, 3, 5)])
def test_inv_examples(p, a, out):
    assert fp_inv(FpScalar(a, p)) == FpScalar(out, p)


def test_inv_example_search_oracle():
    # exhaustive search for x with 3x = 1 mod 7
    (x,) = [x for x in range(7) if 3 * x % 7 == 1]
    assert fp_inv(FpScalar(3, 7)).value == x


def test_inv_zero_raises():
    with pytest.raises(ZeroDivisionError):
        fp_inv(FpScalar(0, 5))


def test_modulus_mismatch():
    with pytest.raises(FieldError):
        fp_add(FpScalar(1, 3), FpScalar(1, 5))
    with pytest.raises(FieldError):
        fp_mul(FpScalar(1, 3), FpScalar(1, 5))


@pytest.mark.parametrize("p", [2, 4, 9, 1, 0, -3])
def test_bad_modulus(p):
    with pytest.raises(FieldError, match="p>2 required"):
        check_modulus(p)


def test_value_is_canonical():
    assert FpScalar(7, 5).value == 2
    assert FpScalar(-1, 5).value == 4


@pytest.mark.parametrize("p", [3, 5, 7])
def test_field_axioms_exhaustive(p):
    els = [FpScalar(v, p) for v in range(p)]
    zero, one = FpScalar(0, p), FpScalar(1, p)
    for a in els:
        assert fp_add(a, zero) == a and fp_mul(a, one) == a
        assert fp_add(a, fp_neg(a)) == zero
        if a.value:
            assert fp_mul(a, fp_inv(a)) == one
    for a, b in itertools.product(els, repeat=2):
        assert fp_add(a, b) == fp_add(b, a)
        assert fp_mul(a, b) == fp_mul(b, a)
    for a, b, c in itertools.product(els, repeat=3):
        assert fp_add(fp_add(a, b), c) == fp_add(a, fp_add(b, c))
        assert fp_mul(fp_mul(a, b), c) == fp_mul(a, fp_mul(b, c))
        assert fp_mul(a, fp_add(b, c)) == fp_add(fp_mul(a, b), fp_mul(a, c))


@pytest.mark.parametrize("p,top,bottom,out", [(3, 2, 1, 2), (3, 3, 1, 0), (3, 4, 2, 0)])
def test_binom_examples(p, top, bottom, out):
    assert binom_mod_p((top,), (bottom,), p).value == out
    assert math.comb(top, bottom) % p == out


def test_binom_bottom_exceeds_top():
    assert binom_mod_p((1, 5), (2, 0), 5).value == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_binom_factorial_oracle(p):
    for a in range(13):
        for b in range(13 - a):
            top, bottom = a + b, a
            assert binom_mod_p((top,), (bottom,), p).value == math.comb(top, bottom) % p


def _digits(x, p):
    out = []
    while x:
        out.append(x % p)
        x //= p
    return out


@given(st.sampled_from([3, 5, 7, 11]), st.integers(0, 500), st.integers(0, 500))
def test_lucas_digit_criterion(p, a, b):
    da, db = _digits(a, p), _digits(b, p)
    da += [0] * (len(db) - len(da))
    carry = b > a or any(y > x for x, y in zip(da, db))
    assert (binom_mod_p((a,), (b,), p).value == 0) == carry


@given(
    st.sampled_from([3, 5, 7]),
    st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), min_size=1, max_size=4),
)
def test_multi_index_is_product(p, pairs):
    top = tuple(a + b for a, b in pairs)
    bottom = tuple(a for a, _ in pairs)
    want = math.prod(math.comb(t, b) for t, b in zip(top, bottom)) % p
    assert binom_mod_p(top, bottom, p).value == want
