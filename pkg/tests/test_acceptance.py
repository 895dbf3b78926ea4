"""End-to-end acceptance checks at the desk shape (2,2,(1,1)).

One test per criterion; ``conftest.py`` prints a PASS/FAIL line for each in
the terminal summary.
"""

from __future__ import annotations

import itertools
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from cartansuper.cartan import (
    WittVector,
    build_special_model,
    build_witt_model,
    special_generator,
    weight_of,
    weight_decomposition,
    witt_bracket,
)
from cartansuper.corpus import corpus
from cartansuper.identities import (
    check_commuting_centralizer,
    check_commuting_vanish,
    check_exchange_identity,
    check_self_bracket,
)
from cartansuper.model import verify_structure
from cartansuper.oracle import brute_force_biderivations
from cartansuper.serialization import dumps_model
from cartansuper.solver import solve_super_biderivations, solve_superderivations
from cartansuper.superpoly import apply_D, basis_monomials
from cartansuper.theorem import VERIFIED, verify_theorem
from cartansuper.weightspaces import verify_listed_weight_spaces

from conftest import DESK, DESK5

GOLDEN = Path(__file__).parent / "golden" / "S_2_2_11_3.json"
SEED = 20240917


def test_criterion_01_structure(S3, W3):
    for M in (W3, S3):
        rep = verify_structure(M)
        assert rep.ok, rep.violation
        assert rep.pairs_checked == M.dim**2 and rep.triples_checked == M.dim**3
    assert W3.dim == 144


def test_criterion_02_grading(S3):
    assert DESK.xi == 6
    assert S3.zdegree.min() >= -1 and S3.zdegree.max() <= DESK.xi - 2
    a, b, k, c = S3.struct.T
    assert np.all(c % 3 != 0)
    assert np.array_equal(S3.zdegree[a] + S3.zdegree[b], S3.zdegree[k])


@pytest.mark.parametrize("p", [3, 5])
def test_criterion_03_simplicity_prerequisites(p, S3, S5):
    M = S3 if p == 3 else S5
    assert M.derived_subalgebra().dim == M.dim
    assert M.center().dim == 0


def test_criterion_04_weight_formula(S3):
    assert len(S3.torus) == DESK.m * DESK.n
    weight_decomposition(S3)  # raises unless every basis vector is a simultaneous eigenvector
    for r, h in enumerate(S3.torus):
        H = S3.ad(h).toarray() % 3
        eig = np.diag(H)
        assert np.count_nonzero(H - np.diag(eig)) == 0
        for a in range(S3.dim):
            assert eig[a] == weight_of(S3, a)[r]


def test_criterion_05_listed_weight_spaces(S3):
    rep = verify_listed_weight_spaces(S3)
    assert len(rep.cases) == 12
    assert all(c.listed_inside for c in rep.cases)
    missing = [
        f"{c.family}{c.indices}: computed dim {c.computed_dim} vs listed {c.listed_dim}"
        for c in rep.cases
        if not c.computed_inside
    ]
    assert not missing, "computed weight space not inside listed span:\n" + "\n".join(missing)


@pytest.mark.parametrize("p", [3, 5])
def test_criterion_06_theorem(p, S3, S5):
    M = S3 if p == 3 else S5
    t0 = time.perf_counter()
    rep = verify_theorem(M)
    elapsed = time.perf_counter() - t0
    assert rep.verdict == VERIFIED
    assert rep.bder_dims == (1, 0)
    assert rep.comparison["verdict"] == "equal" and rep.comparison["inner_dim"] == 1
    assert elapsed < (300 if p == 3 else 1800)


def test_criterion_07_oracle_equivalence():
    small = [M for M in corpus() if M.dim <= 8]
    assert len(small) >= 10
    for M in small:
        for q in (0, 1):
            space, _ = solve_super_biderivations(M, q)
            assert brute_force_biderivations(M, q) == space.space.to_dense(), (M.name, q)


def test_criterion_08_identity_suites(S3):
    ders = (solve_superderivations(S3, 0), solve_superderivations(S3, 1))
    vectors = [phi for q in (0, 1) for phi in solve_super_biderivations(S3, q, ders)[0].basis]
    assert vectors
    for phi in vectors:
        ex = check_exchange_identity(phi, S3, samples=10**5, seed=SEED)
        assert ex.ok, ex.counterexample
        assert ex.mode == "sampled" and ex.seed == SEED and ex.checked >= 10**5
        for check in (check_self_bracket, check_commuting_centralizer, check_commuting_vanish):
            r = check(phi, S3)
            assert r.ok and r.mode == "exhaustive", r.to_dict()


def test_criterion_09_superderivation_sanity(S3, W3):
    for M in (W3, S3):
        ders = (solve_superderivations(M, 0), solve_superderivations(M, 1))
        for x in range(M.dim):
            assert ders[int(M.parity[x])].contains(M.ad(x)), (M.name, M.labels[x])
    ys = range(1, DESK.s + 1)
    for k in ys:
        Dk = WittVector.partial(DESK, k)
        for i, j in itertools.combinations(ys, 2):
            for f in basis_monomials(DESK):
                sign = -1 if DESK.tau(k) * DESK.tau(i) else 1
                assert witt_bracket(Dk, special_generator(i, j, f)) == special_generator(i, j, apply_D(k, f)).scale(sign)


_DUMP = (
    "import sys; from cartansuper.cartan import build_special_model; "
    "from cartansuper.superpoly import ShapeParams; from cartansuper.serialization import dumps_model; "
    "sys.stdout.write(dumps_model(build_special_model(ShapeParams(2, 2, (1, 1), 3))))"
)


def test_criterion_10_serialization(S3):
    runs = [subprocess.run([sys.executable, "-c", _DUMP], capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]
    assert runs[0] == GOLDEN.read_bytes()
    assert dumps_model(S3).encode() == runs[0]
