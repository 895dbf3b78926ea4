"""Prime field arithmetic and modular binomial coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence


class FieldError(ValueError):
    """Raised on invalid moduli or mixed-modulus arithmetic."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_modulus(p: int) -> int:
    """Validate that ``p`` is an odd prime and return it."""
    p = int(p)
    if p <= 2 or not is_prime(p):
        raise FieldError(f"p>2 required and p must be prime (got {p})")
    return p


@dataclass(frozen=True, slots=True)
class FpScalar:
    """An element of F_p, stored as its canonical residue."""

    value: int
    p: int

    def __post_init__(self):
        check_modulus(self.p)
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise FieldError(f"modulus mismatch: {self.p} vs {other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar((self.value + v) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar((self.value - v) % self.p, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar((v - self.value) % self.p, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar((self.value * v) % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar((-self.value) % self.p, self.p)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * fp_inv(FpScalar(v, self.p))

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpScalar({self.value}, p={self.p})"


def fp_add(a: FpScalar, b: FpScalar) -> FpScalar:
    if a.p != b.p:
        raise FieldError(f"modulus mismatch: {a.p} vs {b.p}")
    return FpScalar((a.value + b.value) % a.p, a.p)


def fp_mul(a: FpScalar, b: FpScalar) -> FpScalar:
    if a.p != b.p:
        raise FieldError(f"modulus mismatch: {a.p} vs {b.p}")
    return FpScalar((a.value * b.value) % a.p, a.p)


def fp_neg(a: FpScalar) -> FpScalar:
    return FpScalar((-a.value) % a.p, a.p)


def fp_inv(a: FpScalar) -> FpScalar:
    if a.value % a.p == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{a.p}")
    return FpScalar(pow(a.value, -1, a.p), a.p)


def inv_mod(a: int, p: int) -> int:
    """Inverse of an integer residue; raises ZeroDivisionError on 0."""
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{p}")
    return pow(a, -1, p)


@lru_cache(maxsize=None)
def _small_binom_table(p: int) -> tuple[tuple[int, ...], ...]:
    # Pascal's triangle mod p for 0 <= k <= n < p
    rows = [(1,)]
    for n in range(1, p):
        prev = rows[-1]
        row = [1] + [(prev[k - 1] + prev[k]) % p for k in range(1, n)] + [1]
        rows.append(tuple(row))
    return tuple(rows)


def binom_int_mod_p(top: int, bottom: int, p: int) -> int:
    """C(top, bottom) mod p via Lucas' theorem (digit-wise in base p)."""
    if bottom < 0 or top < 0 or bottom > top:
        return 0
    table = _small_binom_table(p)
    result = 1
    while bottom:
        t, b = top % p, bottom % p
        if b > t:
            return 0
        result = (result * table[t][b]) % p
        top //= p
        bottom //= p
    return result


def binom_mod_p(top: Sequence[int], bottom: Sequence[int], p: int) -> FpScalar:
    """Multi-index binomial prod_i C(top_i, bottom_i) reduced mod p.

    Zero whenever some ``bottom_i > top_i`` or a base-p digit of
    ``bottom_i`` exceeds the matching digit of ``top_i``.
    """
    if len(top) != len(bottom):
        raise ValueError("multi-index length mismatch")
    p = check_modulus(p)
    result = 1
    for t, b in zip(top, bottom):
        if t < 0 or b < 0:
            raise ValueError("multi-indices must be nonnegative")
        result = (result * binom_int_mod_p(t, b, p)) % p
        if result == 0:
            break
    return FpScalar(result, p)
