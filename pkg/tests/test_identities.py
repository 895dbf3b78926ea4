from __future__ import annotations

import numpy as np
import pytest

from cartansuper.corpus import abelian, sl2, takiff
from cartansuper.identities import (
    DEFAULT_SEED,
    check_commuting_centralizer,
    check_commuting_vanish,
    check_exchange_identity,
    check_left_law,
    check_parity,
    check_right_law,
    check_self_bracket,
    check_skew_rule,
)
from cartansuper.solver import BilinearMap, inner_bider, solve_super_biderivations


@pytest.fixture(scope="module")
def inner_S3(S3):
    return inner_bider(S3, 1)


def test_exchange_inner_sampled(S3, inner_S3):
    rep = check_exchange_identity(inner_S3, S3, samples=10**5)
    assert rep.ok
    assert rep.mode == "sampled" and rep.seed == DEFAULT_SEED
    assert rep.checked >= 10**5
    # the statement's alternative sign reading does not hold
    assert rep.extra["alternative_reading_holds"] is False


def test_exchange_is_reproducible(S3, inner_S3):
    a = check_exchange_identity(inner_S3, S3, samples=10**5, seed=5)
    b = check_exchange_identity(inner_S3, S3, samples=10**5, seed=5)
    assert a.to_dict() == b.to_dict()


def test_exchange_exhaustive_small():
    G = sl2(5)
    rep = check_exchange_identity(inner_bider(G, 3), G)
    assert rep.ok and rep.mode == "exhaustive" and rep.checked == 3**4


def test_identities_on_inner(S3, inner_S3):
    for check in (check_self_bracket, check_commuting_centralizer, check_commuting_vanish, check_parity):
        assert check(inner_S3, S3).ok, check.__name__


def test_centralizer_check_abelian():
    A = abelian(2, 3)
    space, _ = solve_super_biderivations(A, 0)
    for phi in space.basis:
        rep = check_commuting_centralizer(phi, A)
        assert rep.ok and rep.extra["centralizer_dim"] == 2
        # abelian models are not simple, so the vanishing check does not apply
        assert check_commuting_vanish(phi, A).extra["applicable"] is False


def test_checks_catch_bad_maps():
    G = sl2(5)
    # phi(h, h) = h: skew-violating, not a derivation, nonzero on a commuting pair
    bad = BilinearMap.from_entries(3, 5, 0, [0], [0], [0], [1])
    assert not check_left_law(bad, G).ok
    assert not check_right_law(bad, G).ok
    assert not check_commuting_vanish(bad, G).ok
    assert not check_commuting_centralizer(bad, G).ok
    # skew, but scaled differently on one pair
    twisted = inner_bider(G, 1) + BilinearMap.from_entries(3, 5, 0, [0, 1], [1, 0], [1, 1], [1, 4])
    assert check_skew_rule(twisted, G).ok
    assert not check_left_law(twisted, G).ok
    assert not check_exchange_identity(twisted, G).ok


def test_self_bracket_catches():
    G = sl2(5)
    # phi(e, f) = e, phi(f, e) = -e: [phi(e,f), [e,f]] = [e, h] = -2e != 0
    phi = BilinearMap.from_entries(3, 5, 0, [1, 2], [2, 1], [1, 1], [1, 4])
    assert not check_self_bracket(phi, G).ok


def test_non_inner_biderivations_satisfy_identities():
    T = takiff(5, odd=True)
    for q in (0, 1):
        space, _ = solve_super_biderivations(T, q)
        for phi in space.basis:
            assert check_exchange_identity(phi, T).ok
            assert check_self_bracket(phi, T).ok
            assert check_commuting_centralizer(phi, T).ok
            assert check_parity(phi, T).ok
