"""End-to-end check that every skew-symmetric super-biderivation of a model is inner."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .identities import (
    DEFAULT_SEED,
    check_commuting_centralizer,
    check_commuting_vanish,
    check_exchange_identity,
    check_self_bracket,
)
from .model import AlgebraModel, ConsistencyError, verify_structure
from .oracle import BRUTE_FORCE_MAX_DIM, brute_force_biderivations, naive_derivation_space
from .solver import compare_with_inner, model_id, solve_super_biderivations, solve_superderivations

VERIFIED = "THEOREM VERIFIED"
NOT_APPLICABLE = "NOT APPLICABLE"
NOT_VERIFIED = "THEOREM NOT VERIFIED"

EXIT_CODES = {VERIFIED: 0, NOT_VERIFIED: 1, NOT_APPLICABLE: 5}


@dataclass
class TheoremReport:
    verdict: str
    model_id: str
    dim: int
    p: int
    reason: str | None = None
    preconditions: dict = field(default_factory=dict)
    der_dims: list = field(default_factory=list)
    solver: list = field(default_factory=list)
    comparison: dict | None = None
    identities: list = field(default_factory=list)
    oracle: dict | None = None
    timings: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    @property
    def bder_dims(self) -> tuple:
        return tuple(r["nullspace_dim"] for r in self.solver)

    def to_dict(self) -> dict:
        return {
            "command": "verify-theorem",
            "verdict": self.verdict,
            "reason": self.reason,
            "model_id": self.model_id,
            "dim": self.dim,
            "p": self.p,
            "preconditions": self.preconditions,
            "der_dims": self.der_dims,
            "bder_dims": list(self.bder_dims),
            "solver": self.solver,
            "comparison": self.comparison,
            "identities": self.identities,
            "oracle": self.oracle,
            "timings": self.timings,
        }


def _run_oracle(model: AlgebraModel, ders, spaces) -> dict:
    out = {}
    for q in (0, 1):
        naive = naive_derivation_space(model, q)
        if naive != ders[q].subspace().to_dense():
            raise ConsistencyError(f"derivation oracle disagrees at parity {q}")
    out["derivations"] = "match"
    if model.dim <= BRUTE_FORCE_MAX_DIM:
        for q in (0, 1):
            brute = brute_force_biderivations(model, q)
            if brute != spaces[q].space.to_dense():
                raise ConsistencyError(f"brute-force biderivation oracle disagrees at parity {q}")
        out["biderivations"] = "match"
    else:
        out["biderivations"] = f"skipped (dim {model.dim} > {BRUTE_FORCE_MAX_DIM})"
    out["status"] = "match"
    return out


def verify_theorem(
    model: AlgebraModel,
    oracle: bool = False,
    samples: int | None = None,
    seed: int = DEFAULT_SEED,
    with_witness: bool = True,
) -> TheoremReport:
    """Solve both parities, compare with ``{lambda [.,.]}`` and run all identity suites.

    Preconditions (structure valid, trivial center, perfect) are checked
    first; any failure gives ``NOT APPLICABLE``.
    """
    t0 = time.perf_counter()
    rep = TheoremReport(NOT_APPLICABLE, model_id(model), model.dim, model.p)
    st = verify_structure(model)
    rep.preconditions["structure_ok"] = st.ok
    if not st.ok:
        rep.reason = f"structure check failed: {st.violation}"
        return rep
    center = model.center()
    derived = model.derived_subalgebra()
    rep.preconditions["center_dim"] = center.dim
    rep.preconditions["derived_dim"] = derived.dim
    rep.timings["preconditions"] = time.perf_counter() - t0
    if center.dim:
        rep.reason = f"center is nonzero (dim {center.dim})"
        return rep
    if derived.dim != model.dim:
        rep.reason = f"derived subalgebra is proper (dim {derived.dim} < {model.dim})"
        return rep

    t1 = time.perf_counter()
    ders = (solve_superderivations(model, 0), solve_superderivations(model, 1))
    rep.der_dims = [ders[0].dim, ders[1].dim]
    rep.timings["derivations"] = time.perf_counter() - t1
    spaces = []
    for q in (0, 1):
        t1 = time.perf_counter()
        space, sr = solve_super_biderivations(model, q, ders)
        if q == 0:
            comp = compare_with_inner(space, model)
            sr.verdict, sr.lam = comp.verdict, comp.lam
            rep.comparison = comp.to_dict()
        if not with_witness:
            sr.witness = []
        rep.solver.append(sr.to_dict())
        spaces.append(space)
        rep.timings[f"biderivations_{q}"] = time.perf_counter() - t1

    t1 = time.perf_counter()
    zl = model.centralizer(derived)
    identities_ok = True
    for q, space in enumerate(spaces):
        for n, phi in enumerate(space.basis):
            for res in (
                check_exchange_identity(phi, model, samples=samples, seed=seed),
                check_self_bracket(phi, model),
                check_commuting_centralizer(phi, model, zl),
                check_commuting_vanish(phi, model, simple=True),
            ):
                identities_ok &= res.ok
                rep.identities.append({"parity": q, "basis_index": n, **res.to_dict()})
    rep.timings["identities"] = time.perf_counter() - t1

    if oracle:
        t1 = time.perf_counter()
        rep.oracle = _run_oracle(model, ders, spaces)
        rep.timings["oracle"] = time.perf_counter() - t1

    if rep.comparison["verdict"] == "equal" and spaces[1].dim == 0 and identities_ok:
        rep.verdict = VERIFIED
    else:
        rep.verdict = NOT_VERIFIED
        reasons = []
        if rep.comparison["verdict"] != "equal":
            reasons.append(f"even space is {rep.comparison['verdict']} relative to the inner family")
        if spaces[1].dim:
            reasons.append(f"odd space has dim {spaces[1].dim}")
        if not identities_ok:
            reasons.append("an identity suite failed")
        rep.reason = "; ".join(reasons)
    rep.timings["total"] = time.perf_counter() - t0
    return rep
