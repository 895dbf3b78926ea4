"""Compare computed torus weight spaces of S(m,n;t) with explicitly listed spanning families.

Four families of weight functionals are covered, each named by the data
``(alpha, u, i, j)`` of the functional it uses:

* ``even_pair``   (eps_{i0}, -, k0, i0)         with k0 != i0 even
* ``odd_pair``    (0, <i1>, k1, i1)             with k1 != i1 odd
* ``even_mixed``  (eps_{j0}, <k1>, i0, j0)      with i0 != j0 even, k1 odd
* ``odd_mixed``   (eps_{k0}, <j1>, i1, j1)      with i1 != j1 odd, k0 even

Exponents in the listed elements range over every value in [0, pi_r] of
the required residue (0 or 1) mod p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cartan import express_in_special, special_generator, special_weight, weight_decomposition
from .linalg import LinearSubspace
from .model import AlgebraModel, ModelError
from .superpoly import SuperPolynomial


def _residue_exponents(pi: int, residue: int, p: int) -> list[int]:
    return [a for a in range(pi + 1) if a % p == residue]


def _alphas(shape, one_at: int | None) -> list[tuple[int, ...]]:
    """All alpha in A(m,t) with alpha_r = 1 mod p at ``one_at`` and 0 mod p elsewhere."""
    choices = [
        _residue_exponents(shape.pi[r - 1], 1 if r == one_at else 0, shape.p) for r in shape.even_vars
    ]
    return list(itertools.product(*choices))


def _poly(shape, alpha, odd_word) -> SuperPolynomial:
    """``x^(alpha)`` times the odd variables of ``odd_word`` multiplied in the given order."""
    f = SuperPolynomial.monomial(shape, alpha)
    for t in odd_word:
        f = f * SuperPolynomial.var(shape, t)
    return f


def listed_elements(shape, family: str, idx: dict) -> list[tuple[str, int, int, SuperPolynomial]]:
    """Listed spanning elements ``(tag, i, j, f)`` meaning ``D_ij(f)``."""
    Y0, Y1 = list(shape.even_vars), list(shape.odd_vars)
    out = []
    if family == "even_pair":
        k0 = idx["k0"]
        for t in Y0:
            if t != k0:
                out += [("a", k0, t, _poly(shape, al, ())) for al in _alphas(shape, t)]
        for t in Y1:
            out += [("b", k0, t, _poly(shape, al, (t,))) for al in _alphas(shape, None)]
    elif family == "odd_pair":
        k1 = idx["k1"]
        for t in Y1:
            out += [("a", k1, t, _poly(shape, al, (t,))) for al in _alphas(shape, None)]
    elif family == "even_mixed":
        i0, k1 = idx["i0"], idx["k1"]
        for t in Y0:
            if t != i0:
                out += [("a", i0, t, _poly(shape, al, (k1,))) for al in _alphas(shape, t)]
        for t in Y1:
            if t != k1:
                out += [("b", i0, t, _poly(shape, al, (t, k1))) for al in _alphas(shape, None)]
    elif family == "odd_mixed":
        k0, i1 = idx["k0"], idx["i1"]
        for t in Y1:
            out += [("a", i1, t, _poly(shape, al, (t,))) for al in _alphas(shape, k0)]
    else:
        raise ValueError(f"unknown family {family!r}")
    return out


def integer_weight(shape, alpha, u, i: int, j: int) -> tuple:
    """The weight formula evaluated in Z, before reduction mod p."""
    us = set(u)
    return tuple(
        alpha[k0 - 1] + (k1 in us) - (i == k0) - (j == k0) - (i == k1) - (j == k1)
        for k0 in shape.even_vars
        for k1 in shape.odd_vars
    )


def _functional_data(shape, family: str, idx: dict) -> tuple:
    eps = lambda r: tuple(1 if v == r else 0 for v in shape.even_vars)  # noqa: E731
    if family == "even_pair":
        return eps(idx["i0"]), (), idx["k0"], idx["i0"]
    if family == "odd_pair":
        return (0,) * shape.m, (idx["i1"],), idx["k1"], idx["i1"]
    if family == "even_mixed":
        return eps(idx["j0"]), (idx["k1"],), idx["i0"], idx["j0"]
    if family == "odd_mixed":
        return eps(idx["k0"]), (idx["j1"],), idx["i1"], idx["j1"]
    raise ValueError(f"unknown family {family!r}")


def functional(shape, family: str, idx: dict) -> tuple:
    return special_weight(shape, *_functional_data(shape, family, idx))


def index_choices(shape, family: str) -> list[dict]:
    Y0, Y1 = list(shape.even_vars), list(shape.odd_vars)
    if family == "even_pair":
        return [{"k0": a, "i0": b} for a in Y0 for b in Y0 if a != b]
    if family == "odd_pair":
        return [{"k1": a, "i1": b} for a in Y1 for b in Y1 if a != b]
    if family == "even_mixed":
        return [{"i0": a, "j0": b, "k1": c} for a in Y0 for b in Y0 for c in Y1 if a != b]
    if family == "odd_mixed":
        return [{"k0": c, "i1": a, "j1": b} for c in Y0 for a in Y1 for b in Y1 if a != b]
    raise ValueError(f"unknown family {family!r}")


FAMILIES = ("even_pair", "odd_pair", "even_mixed", "odd_mixed")


@dataclass
class WeightSpaceCase:
    family: str
    indices: dict
    weight: tuple
    computed_dim: int
    listed_dim: int
    listed_inside: bool
    computed_inside: bool
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.listed_inside and self.computed_inside

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "indices": self.indices,
            "weight": list(self.weight),
            "computed_dim": self.computed_dim,
            "listed_dim": self.listed_dim,
            "listed_inside_computed": self.listed_inside,
            "computed_inside_listed": self.computed_inside,
            "counterexamples": self.counterexamples,
        }


@dataclass
class WeightSpaceReport:
    cases: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def failures(self) -> list:
        return [c for c in self.cases if not c.ok]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "cases": [c.to_dict() for c in self.cases]}


def _basis_integer_weight(model: AlgebraModel, a: int) -> tuple:
    dat = model.basis_data[a]
    return integer_weight(model.shape, dat.alpha, dat.u, dat.i, dat.j)


def verify_listed_weight_spaces(model: AlgebraModel, max_counterexamples: int = 3) -> WeightSpaceReport:
    """Check both inclusions between each computed weight space and its listed span."""
    if model.kind != "special" or model.torus is None:
        raise ModelError("needs a special model with its torus")
    shape = model.shape
    spaces = weight_decomposition(model)
    d, p = model.dim, model.p
    cases = []
    for family in FAMILIES:
        for idx in index_choices(shape, family):
            lam = functional(shape, family, idx)
            computed = spaces.get(lam, LinearSubspace.zero(d, p))
            rows, bad_listed, listed_inside = [], [], True
            for tag, i, j, f in listed_elements(shape, family, idx):
                vec = express_in_special(model, special_generator(i, j, f).coords())
                if not vec.any():
                    continue
                rows.append(vec)
                if not computed.contains(vec):
                    listed_inside = False
                    if len(bad_listed) < max_counterexamples:
                        bad_listed.append({"kind": "listed element outside weight space", "element": f"D{i}{j}({f!r})"})
            listed = LinearSubspace.span(rows, d, p) if rows else LinearSubspace.zero(d, p)
            missing = []
            for a in computed.pivot_columns:
                if not listed.contains(model.basis_vector(a)):
                    missing.append(a)
            lam_int = integer_weight(shape, *_functional_data(shape, family, idx))
            cex = bad_listed + [
                {
                    "kind": "weight vector outside listed span",
                    "element": model.labels[a],
                    "weight": list(map(int, model.weights[a])),
                    "integer_weight": list(_basis_integer_weight(model, a)),
                    "integer_functional": list(lam_int),
                }
                for a in missing[:max_counterexamples]
            ]
            cases.append(
                WeightSpaceCase(
                    family,
                    idx,
                    lam,
                    computed.dim,
                    listed.dim,
                    listed_inside,
                    not missing,
                    cex,
                )
            )
    return WeightSpaceReport(cases)
