"""The truncated divided-power Grassmann superalgebra Lambda(m, n; t).

Basis monomials ``x^(alpha) x^u`` are packed into dense integer indices:
``alpha`` in mixed radix (radices ``pi_i + 1``, first variable most
significant) times ``2**n``, plus ``u`` as an n-bit mask where bit ``k``
stands for the odd variable ``x_{m+1+k}``.  Index order is the canonical
basis order used everywhere else in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .fp import FpScalar, binom_int_mod_p, check_modulus


class ShapeError(ValueError):
    """Invalid algebra parameters or mismatched shapes."""


@dataclass(frozen=True)
class ShapeParams:
    """Parameters (m, n, t, p) of Lambda(m,n;t), W(m,n;t) and S(m,n;t).

    Variables are numbered 1..m (even) and m+1..m+n (odd).
    """

    m: int
    n: int
    t: tuple[int, ...]
    p: int
    allow_small: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(int(x) for x in self.t))
        try:
            check_modulus(self.p)
        except ValueError as exc:
            raise ShapeError(str(exc)) from None
        lo = 1 if self.allow_small else 2
        if self.m < lo or self.n < lo:
            raise ShapeError(f"m,n ≥ {lo} required (got m={self.m}, n={self.n})")
        if len(self.t) != self.m:
            raise ShapeError(f"t must have m={self.m} entries (got {len(self.t)})")
        if any(x < 1 for x in self.t):
            raise ShapeError("t_i >= 1 required")

    @property
    def s(self) -> int:
        return self.m + self.n

    @cached_property
    def pi(self) -> tuple[int, ...]:
        return tuple(self.p**ti - 1 for ti in self.t)

    @property
    def xi(self) -> int:
        return sum(self.pi) + self.n

    @property
    def even_vars(self) -> range:
        return range(1, self.m + 1)

    @property
    def odd_vars(self) -> range:
        return range(self.m + 1, self.s + 1)

    def tau(self, i: int) -> int:
        """Parity of the partial derivative D_i."""
        self.check_var(i)
        return 0 if i <= self.m else 1

    def check_var(self, i: int) -> None:
        if not 1 <= i <= self.s:
            raise ShapeError(f"variable index {i} outside 1..{self.s}")

    @cached_property
    def radices(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self.pi)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        acc = 1
        for r in reversed(self.radices):
            out.append(acc)
            acc *= r
        return tuple(reversed(out))

    @cached_property
    def n_alpha(self) -> int:
        out = 1
        for r in self.radices:
            out *= r
        return out

    @property
    def n_monomials(self) -> int:
        return self.n_alpha << self.n

    def alpha_index(self, alpha: Sequence[int]) -> int:
        return sum(a * s for a, s in zip(alpha, self.strides))

    @cached_property
    def alphas(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(r) for r in self.radices)))

    @cached_property
    def _tables(self):
        # per-monomial decoded data, indexed by dense monomial index
        alphas, masks, parity, degree = [], [], [], []
        for a in self.alphas:
            for u in range(1 << self.n):
                alphas.append(a)
                masks.append(u)
                pc = bin(u).count("1")
                parity.append(pc & 1)
                degree.append(sum(a) + pc)
        return tuple(alphas), tuple(masks), tuple(parity), tuple(degree)

    def decode(self, idx: int) -> tuple[tuple[int, ...], int]:
        tab = self._tables
        return tab[0][idx], tab[1][idx]

    def mono_parity(self, idx: int) -> int:
        return self._tables[2][idx]

    def mono_degree(self, idx: int) -> int:
        return self._tables[3][idx]

    def encode(self, alpha: Sequence[int], umask: int) -> int:
        return (self.alpha_index(alpha) << self.n) | umask

    def mask_of(self, u: Iterable[int]) -> int:
        mask = 0
        for i in u:
            if not self.m < i <= self.s:
                raise ShapeError(f"odd variable index {i} outside {self.m + 1}..{self.s}")
            mask |= 1 << (i - self.m - 1)
        return mask

    def word_of(self, mask: int) -> tuple[int, ...]:
        return tuple(self.m + 1 + k for k in range(self.n) if mask >> k & 1)


@dataclass(frozen=True, order=True)
class SuperMonomial:
    """A basis monomial ``x^(alpha) x^u``; ``u`` is a strictly increasing word."""

    alpha: tuple[int, ...]
    u: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        object.__setattr__(self, "u", tuple(int(i) for i in self.u))
        if any(a < 0 for a in self.alpha):
            raise ShapeError("alpha must be nonnegative")
        if any(x >= y for x, y in zip(self.u, self.u[1:])):
            raise ShapeError(f"odd word {self.u} must be strictly increasing")

    @property
    def parity(self) -> int:
        return len(self.u) % 2

    @property
    def zdegree(self) -> int:
        return sum(self.alpha) + len(self.u)

    def validate(self, shape: ShapeParams) -> None:
        if len(self.alpha) != shape.m:
            raise ShapeError("alpha length does not match m")
        if any(a > b for a, b in zip(self.alpha, shape.pi)):
            raise ShapeError(f"alpha {self.alpha} outside A(m,t) with pi={shape.pi}")
        shape.mask_of(self.u)

    def index(self, shape: ShapeParams) -> int:
        self.validate(shape)
        return shape.encode(self.alpha, shape.mask_of(self.u))

    @classmethod
    def from_index(cls, shape: ShapeParams, idx: int) -> "SuperMonomial":
        alpha, mask = shape.decode(idx)
        return cls(alpha, shape.word_of(mask))

    def label(self, m: int) -> str:
        parts = []
        if len(self.alpha) and any(self.alpha):
            parts.append("x^(" + ",".join(map(str, self.alpha)) + ")")
        parts += [f"x{i}" for i in self.u]
        return "".join(parts) if parts else "1"


# --- index-level kernels ---------------------------------------------------


def grassmann_sign(u: int, v: int) -> int:
    """Sign of x^u x^v = sign * x^(u|v) for bit masks; 0 if they overlap."""
    if u & v:
        return 0
    inversions = 0
    w = v
    while w:
        low = w & -w
        # elements of u sitting above this element of v must hop over it
        inversions += bin(u & ~((low << 1) - 1)).count("1")
        w ^= low
    return -1 if inversions & 1 else 1


def mul_grassmann(u: Sequence[int], v: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Product of odd words ``x^u x^v``.

    Returns ``(sign, merged_word)``; sign is 0 (with an empty word) when the
    words share an index.
    """
    if set(u) & set(v):
        return 0, ()
    inv = sum(1 for a in u for b in v if a > b)
    return (-1 if inv & 1 else 1), tuple(sorted((*u, *v)))


def mul_divided(
    a: Sequence[int], b: Sequence[int], shape: ShapeParams
) -> tuple[FpScalar, tuple[int, ...]]:
    """``x^(a) x^(b) = C(a+b, a) x^(a+b)``, coefficient reduced mod p.

    Outside A(m,t) the coefficient vanishes by a base-p carry; the returned
    index is then clamped into A(m,t).
    """
    total = tuple(x + y for x, y in zip(a, b))
    coef = 1
    for x, y in zip(total, a):
        coef = coef * binom_int_mod_p(x, y, shape.p) % shape.p
    if any(x > q for x, q in zip(total, shape.pi)):
        assert coef == 0, "Lucas carry must kill truncated products"
        return FpScalar(0, shape.p), tuple(min(x, q) for x, q in zip(total, shape.pi))
    return FpScalar(coef, shape.p), total


class MonomialArithmetic:
    """Cached index-level product and partial-derivative tables for a shape."""

    def __init__(self, shape: ShapeParams):
        self.shape = shape
        self._mul: dict[tuple[int, int], tuple[int, int]] = {}
        self._d: dict[tuple[int, int], tuple[int, int]] = {}

    def mul(self, i: int, j: int) -> tuple[int, int]:
        """Return ``(coef, index)`` of the product of two basis monomials."""
        key = (i, j)
        hit = self._mul.get(key)
        if hit is not None:
            return hit
        sh = self.shape
        a, u = sh.decode(i)
        b, v = sh.decode(j)
        sign = grassmann_sign(u, v)
        if sign == 0:
            out = (0, 0)
        else:
            coef = 1
            for x, y in zip(a, b):
                coef = coef * binom_int_mod_p(x + y, x, sh.p) % sh.p
                if coef == 0:
                    break
            if coef == 0:
                out = (0, 0)
            else:
                out = ((sign * coef) % sh.p, sh.encode(tuple(x + y for x, y in zip(a, b)), u | v))
        self._mul[key] = out
        return out

    def deriv(self, var: int, i: int) -> tuple[int, int]:
        """Return ``(coef, index)`` of D_var applied to a basis monomial."""
        key = (var, i)
        hit = self._d.get(key)
        if hit is not None:
            return hit
        sh = self.shape
        sh.check_var(var)
        a, u = sh.decode(i)
        if var <= sh.m:
            k = var - 1
            if a[k] == 0:
                out = (0, 0)
            else:
                b = a[:k] + (a[k] - 1,) + a[k + 1 :]
                out = (1, sh.encode(b, u))
        else:
            bit = 1 << (var - sh.m - 1)
            if not u & bit:
                out = (0, 0)
            else:
                before = bin(u & (bit - 1)).count("1")
                out = ((-1) ** before % sh.p, sh.encode(a, u ^ bit))
        self._d[key] = out
        return out


class SuperPolynomial:
    """Sparse F_p-linear combination of basis monomials of Lambda(m,n;t).

    Coefficients are kept as integer residues keyed by dense monomial index;
    zero coefficients are never stored.
    """

    __slots__ = ("shape", "_terms")

    def __init__(self, shape: ShapeParams, terms: Mapping | None = None):
        self.shape = shape
        self._terms: dict[int, int] = {}
        if terms:
            for key, c in terms.items():
                idx = key.index(shape) if isinstance(key, SuperMonomial) else int(key)
                if not 0 <= idx < shape.n_monomials:
                    raise ShapeError(f"monomial index {idx} out of range")
                c = int(c) % shape.p
                if c:
                    self._terms[idx] = (self._terms.get(idx, 0) + c) % shape.p
                    if not self._terms[idx]:
                        del self._terms[idx]

    @classmethod
    def monomial(cls, shape: ShapeParams, alpha=None, u=(), coef: int = 1) -> "SuperPolynomial":
        alpha = tuple(alpha) if alpha is not None else (0,) * shape.m
        return cls(shape, {SuperMonomial(alpha, tuple(u)): coef})

    @classmethod
    def one(cls, shape: ShapeParams) -> "SuperPolynomial":
        return cls(shape, {0: 1})

    @classmethod
    def var(cls, shape: ShapeParams, i: int) -> "SuperPolynomial":
        """The generator x_i (x^(eps_i) for even i)."""
        shape.check_var(i)
        if i <= shape.m:
            alpha = [0] * shape.m
            alpha[i - 1] = 1
            return cls.monomial(shape, alpha)
        return cls.monomial(shape, None, (i,))

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._terms.items()))

    @property
    def terms(self) -> dict[SuperMonomial, FpScalar]:
        return {
            SuperMonomial.from_index(self.shape, k): FpScalar(v, self.shape.p)
            for k, v in sorted(self._terms.items())
        }

    def coeff(self, mono: SuperMonomial) -> FpScalar:
        return FpScalar(self._terms.get(mono.index(self.shape), 0), self.shape.p)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def parities(self) -> set[int]:
        return {self.shape.mono_parity(k) for k in self._terms}

    @property
    def parity(self) -> int:
        """Parity of a homogeneous element (0 for the zero polynomial)."""
        ps = self.parities()
        if len(ps) > 1:
            raise ValueError("polynomial is not Z2-homogeneous")
        return ps.pop() if ps else 0

    def _check(self, other: "SuperPolynomial") -> None:
        if not isinstance(other, SuperPolynomial) or other.shape != self.shape:
            raise ShapeError("shape mismatch between superpolynomials")

    def __add__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        self._check(other)
        out = dict(self._terms)
        p = self.shape.p
        for k, v in other._terms.items():
            s = (out.get(k, 0) + v) % p
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return SuperPolynomial._raw(self.shape, out)

    def __neg__(self) -> "SuperPolynomial":
        p = self.shape.p
        return SuperPolynomial._raw(self.shape, {k: (-v) % p for k, v in self._terms.items()})

    def __sub__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        return self + (-other)

    def scale(self, c: int) -> "SuperPolynomial":
        p = self.shape.p
        c = int(c) % p
        if not c:
            return SuperPolynomial(self.shape)
        return SuperPolynomial._raw(self.shape, {k: v * c % p for k, v in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return self.shape == other.shape and self._terms == other._terms

    def __hash__(self):
        return hash((self.shape, tuple(sorted(self._terms.items()))))

    def __mul__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        return mul_poly(self, other)

    @classmethod
    def _raw(cls, shape, terms: dict[int, int]) -> "SuperPolynomial":
        obj = cls.__new__(cls)
        obj.shape = shape
        obj._terms = terms
        return obj

    def __repr__(self):
        if not self._terms:
            return "0"
        m = self.shape.m
        parts = []
        for k, v in sorted(self._terms.items()):
            parts.append(f"{v}*{SuperMonomial.from_index(self.shape, k).label(m)}")
        return " + ".join(parts)


_ARITH: dict[ShapeParams, MonomialArithmetic] = {}


def arithmetic(shape: ShapeParams) -> MonomialArithmetic:
    """Shared per-shape cache of monomial products and derivatives."""
    arith = _ARITH.get(shape)
    if arith is None:
        arith = _ARITH[shape] = MonomialArithmetic(shape)
    return arith


def mul_poly(f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
    """Bilinear product in Lambda(m,n;t)."""
    f._check(g)
    shape = f.shape
    p = shape.p
    mul = arithmetic(shape).mul
    out: dict[int, int] = {}
    for i, a in f._terms.items():
        for j, b in g._terms.items():
            c, k = mul(i, j)
            if c:
                s = (out.get(k, 0) + c * a * b) % p
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
    return SuperPolynomial._raw(shape, out)


def apply_D(i: int, f: SuperPolynomial) -> SuperPolynomial:
    """Apply the partial superderivation D_i (parity tau(i)) to ``f``."""
    shape = f.shape
    shape.check_var(i)
    p = shape.p
    deriv = arithmetic(shape).deriv
    out: dict[int, int] = {}
    for k, a in f._terms.items():
        c, j = deriv(i, k)
        if c:
            s = (out.get(j, 0) + c * a) % p
            if s:
                out[j] = s
            else:
                out.pop(j, None)
    return SuperPolynomial._raw(shape, out)


def basis_monomials(shape: ShapeParams) -> list[SuperPolynomial]:
    """All basis monomials of Lambda(m,n;t) in canonical index order."""
    return [SuperPolynomial._raw(shape, {k: 1}) for k in range(shape.n_monomials)]
