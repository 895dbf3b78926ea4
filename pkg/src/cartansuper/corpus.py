"""Small hand-written models used for brute-force cross-checks and examples."""

from __future__ import annotations

from .model import AlgebraModel


def _make(p, labels, parity, rows, name):
    return AlgebraModel.from_canonical(p, labels, parity, [0] * len(labels), rows, name=name)


def abelian(dim: int = 2, p: int = 3, odd: int = 0) -> AlgebraModel:
    """Zero bracket; the last ``odd`` basis vectors are odd."""
    parity = [0] * (dim - odd) + [1] * odd
    return _make(p, [f"e{i}" for i in range(dim)], parity, [], f"abelian({dim - odd}|{odd})")


def affine_line(p: int = 3) -> AlgebraModel:
    """[e0, e1] = e1."""
    return _make(p, ["e0", "e1"], [0, 0], [(0, 1, 1, 1)], "aff(1)")


def heisenberg(p: int = 3) -> AlgebraModel:
    """[e0, e1] = e2, e2 central."""
    return _make(p, ["x", "y", "z"], [0, 0, 0], [(0, 1, 2, 1)], "heisenberg(3|0)")


def odd_square(p: int = 3) -> AlgebraModel:
    """One odd element squaring to an even central one: [o, o] = z."""
    return _make(p, ["z", "o"], [0, 1], [(1, 1, 0, 1)], "odd-square(1|1)")


def super_heisenberg(p: int = 3) -> AlgebraModel:
    """Odd t1, t2 with [t1, t2] = z central."""
    return _make(p, ["z", "t1", "t2"], [0, 1, 1], [(1, 2, 0, 1)], "heisenberg(1|2)")


def sl2(p: int = 5) -> AlgebraModel:
    """[h,e] = 2e, [h,f] = -2f, [e,f] = h (basis h, e, f)."""
    return _make(p, ["h", "e", "f"], [0, 0, 0], [(0, 1, 1, 2), (0, 2, 2, -2 % p), (1, 2, 0, 1)], "sl2")


def osp12(p: int = 5) -> AlgebraModel:
    """The simple superalgebra osp(1|2): sl2 = <h,e,f> plus odd x, y."""
    m = -1 % p
    rows = [
        (0, 1, 1, 2), (0, 2, 2, -2 % p), (1, 2, 0, 1),
        (0, 3, 3, 1), (0, 4, 4, m),
        (1, 4, 3, m), (2, 3, 4, m),
        (3, 3, 1, 2), (4, 4, 2, -2 % p), (3, 4, 0, 1),
    ]
    return _make(p, ["h", "e", "f", "x", "y"], [0, 0, 0, 1, 1], rows, "osp(1|2)")


def _sl2_rows(p):
    return [(0, 1, 1, 2), (0, 2, 2, -2 % p), (1, 2, 0, 1)]


def sl2_ltimes_v2(p: int = 5, odd: bool = False) -> AlgebraModel:
    """sl2 acting on its 2-dim module V (abelian); V odd when ``odd``."""
    rows = _sl2_rows(p) + [(0, 3, 3, 1), (0, 4, 4, -1 % p), (1, 4, 3, 1), (2, 3, 4, 1)]
    par = [0, 0, 0, 1, 1] if odd else [0] * 5
    return _make(p, ["h", "e", "f", "v1", "v2"], par, rows, "sl2 x " + ("PiV2" if odd else "V2"))


def takiff(p: int = 5, odd: bool = False) -> AlgebraModel:
    """sl2 plus a copy of its adjoint module with zero bracket (odd copy when ``odd``)."""
    sl = _sl2_rows(p)
    rows = sl + [(a, b + 3, k + 3, c) for a, b, k, c in sl] + [(b, a + 3, k + 3, -c % p) for a, b, k, c in sl]
    par = [0, 0, 0] + ([1, 1, 1] if odd else [0, 0, 0])
    return _make(p, ["h", "e", "f", "h'", "e'", "f'"], par, rows, "takiff" + ("(odd)" if odd else ""))


def sl2_sum(p: int = 5) -> AlgebraModel:
    """sl2 + sl2 (two commuting copies)."""
    sl = _sl2_rows(p)
    rows = sl + [(a + 3, b + 3, k + 3, c) for a, b, k, c in sl]
    return _make(p, ["h", "e", "f", "H", "E", "F"], [0] * 6, rows, "sl2+sl2")


def witt1(p: int = 5) -> AlgebraModel:
    """The p-dimensional Witt algebra: [e_i, e_j] = (j - i) e_{i+j}, -1 <= i <= p-2."""
    rows = []
    for i in range(-1, p - 1):
        for j in range(i + 1, p - 1):
            if -1 <= i + j <= p - 2 and (j - i) % p:
                rows.append((i + 1, j + 1, i + j + 1, (j - i) % p))
    return _make(p, [f"e{i}" for i in range(-1, p - 1)], [0] * p, rows, f"W(1;1) over F_{p}")


def corpus() -> list[AlgebraModel]:
    return [
        abelian(2, 3),
        abelian(2, 3, odd=1),
        affine_line(3),
        odd_square(3),
        heisenberg(3),
        super_heisenberg(3),
        sl2(5),
        sl2(3),
        osp12(5),
        sl2_ltimes_v2(5),
        sl2_ltimes_v2(5, odd=True),
        takiff(5),
        takiff(5, odd=True),
        sl2_sum(5),
        witt1(5),
        witt1(7),
    ]


# name -> factory(p), used by the ``example`` CLI verb
EXAMPLES = {
    "abelian": lambda p: abelian(2, p),
    "abelian-odd": lambda p: abelian(2, p, odd=1),
    "affine-line": affine_line,
    "odd-square": odd_square,
    "heisenberg": heisenberg,
    "super-heisenberg": super_heisenberg,
    "sl2": sl2,
    "osp12": osp12,
    "sl2-v2": sl2_ltimes_v2,
    "sl2-piv2": lambda p: sl2_ltimes_v2(p, odd=True),
    "takiff": takiff,
    "takiff-odd": lambda p: takiff(p, odd=True),
    "sl2-sum": sl2_sum,
    "witt1": witt1,
}
