from __future__ import annotations

import numpy as np
import pytest

from cartansuper.cartan import express_in_special, special_generator, weight_decomposition
from cartansuper.superpoly import SuperPolynomial
from cartansuper.weightspaces import (
    FAMILIES,
    functional,
    index_choices,
    integer_weight,
    listed_elements,
    verify_listed_weight_spaces,
)

from conftest import DESK


@pytest.fixture(scope="module")
def report(S3):
    return verify_listed_weight_spaces(S3)


def test_index_choices_count():
    # k0 != i0 even: 2; k1 != i1 odd: 2; (i0 != j0, k1): 4; (k0, i1 != j1): 4
    assert [len(index_choices(DESK, f)) for f in FAMILIES] == [2, 2, 4, 4]


def test_listed_elements_lie_in_weight_space(report):
    assert len(report.cases) == 12
    for case in report.cases:
        assert case.listed_inside, case.to_dict()
        assert case.listed_dim >= 1


def test_listed_congruences(S3):
    for family in FAMILIES:
        for idx in index_choices(DESK, family):
            for _, i, j, f in listed_elements(DESK, family, idx):
                for k, _ in f.items():
                    alpha, _ = DESK.decode(k)
                    assert all(a % 3 in (0, 1) for a in alpha)


def test_pair_family_gap_is_modular_wraparound(S3, report):
    # D12(x^(2,0) x3 x4) has integer weight 2 where the functional is -1; equal mod 3
    case = next(c for c in report.cases if c.family == "even_pair" and c.indices == {"k0": 1, "i0": 2})
    f = SuperPolynomial.monomial(DESK, (2, 0), (3, 4))
    assert integer_weight(DESK, (2, 0), (3, 4), 1, 2)[0] == 2
    assert integer_weight(DESK, (1, 0)[::-1], (), 1, 2)[0] == -1
    spaces = weight_decomposition(S3)
    v = express_in_special(S3, special_generator(1, 2, f).coords())
    assert spaces[case.weight].contains(v)
    assert not case.computed_inside


def test_mixed_family_gap_over_integers(S3, report):
    # x2 D3 = D13(x1 x2) has exactly the functional's integer weight for (i0, j0, k1) = (1, 2, 4)
    idx = {"i0": 1, "j0": 2, "k1": 4}
    lam_int = integer_weight(DESK, (0, 1), (4,), 1, 2)
    assert integer_weight(DESK, (1, 1), (), 1, 3) == lam_int
    f = SuperPolynomial.monomial(DESK, (1, 1))
    v = express_in_special(S3, special_generator(1, 3, f).coords())
    spaces = weight_decomposition(S3)
    lam = functional(DESK, "even_mixed", idx)
    assert spaces[lam].contains(v)
    case = next(c for c in report.cases if c.family == "even_mixed" and c.indices == idx)
    assert not case.computed_inside


def test_report_serializes(report):
    d = report.to_dict()
    assert d["ok"] is report.ok
    assert all("counterexamples" in c for c in d["cases"])
