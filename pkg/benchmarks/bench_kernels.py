"""Compare the compiled and numpy elimination backends.

Usage: python benchmarks/bench_kernels.py [--repeat 3] [--full] [--theorem]

Times dense RREF on random matrices and incremental sparse elimination on the
bracket tables of W(2,2;1,1) and S(2,2;1,1) over F_3.  ``--full`` adds the
unsplit parity-0 biderivation system of S (the fallback needs minutes here;
the solver itself only ever eliminates the much smaller per-key blocks).
``--theorem`` times ``verify_theorem`` end to end in a subprocess per backend.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np
import scipy.sparse as sp

from cartansuper.cartan import build_special_model, build_witt_model
from cartansuper.kernels import compiled_backend, python_backend
from cartansuper.solver import assemble_bider_system
from cartansuper.superpoly import ShapeParams


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def dense_case(be, n: int, p: int, seed: int):
    M = np.random.default_rng(seed).integers(0, p, size=(n, n), dtype=np.int64)
    return lambda: be.rref_inplace(np.ascontiguousarray(M.copy()), p)


def mod_csr(A, p: int) -> sp.csr_matrix:
    A = sp.csr_matrix(A, dtype=np.int64)
    A.data %= p
    A.eliminate_zeros()
    return A


def sparse_case(be, A: sp.csr_matrix, p: int):
    def run():
        el = be.SparseEliminator(A.shape[1], p)
        el.add_rows(A.indptr, A.indices, A.data)
        return el.rank

    return run


def theorem_run(backend: str) -> float:
    env = dict(os.environ, CARTANSUPER_KERNELS=backend)
    code = (
        "from cartansuper.cartan import build_special_model; from cartansuper.superpoly import ShapeParams; "
        "from cartansuper.theorem import verify_theorem; "
        "verify_theorem(build_special_model(ShapeParams(2, 2, (1, 1), 3)))"
    )
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-c", code], env=env, check=True)
    return time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--full", action="store_true", help="include the unsplit biderivation system")
    ap.add_argument("--theorem", action="store_true", help="also time verify-theorem end to end")
    args = ap.parse_args()

    backends = [("python", python_backend)]
    if compiled_backend is not None:
        backends.insert(0, ("compiled", compiled_backend))
    else:
        print("compiled backend not built; timing the fallback only")

    shape = ShapeParams(2, 2, (1, 1), 3)
    S = build_special_model(shape)
    tables = {"W": build_witt_model(shape, with_torus=False).table, "S": S.table}
    cases = [
        ("dense rref 200x200 F_5", lambda be: dense_case(be, 200, 5, 0)),
        ("dense rref 400x400 F_3", lambda be: dense_case(be, 400, 3, 1)),
    ]
    for name, T in tables.items():
        T = mod_csr(T, 3)
        cases.append((f"sparse {name} table {T.shape[0]}x{T.shape[1]}", lambda be, T=T: sparse_case(be, T, 3)))
    if args.full:
        A = mod_csr(assemble_bider_system(S, 0), 3)
        cases.append((f"sparse bider {A.shape[0]}x{A.shape[1]}", lambda be: sparse_case(be, A, 3)))
    print(f"{'case':<42}" + "".join(f"{name:>12}" for name, _ in backends) + "   speedup")
    for label, make in cases:
        ts = [best_of(make(be), args.repeat) for _, be in backends]
        speed = f"{ts[-1] / ts[0]:8.1f}x" if len(ts) > 1 else ""
        print(f"{label:<42}" + "".join(f"{t:11.4f}s" for t in ts) + "   " + speed, flush=True)
    if args.theorem:
        ts = [theorem_run(name) for name, _ in backends]
        speed = f"{ts[-1] / ts[0]:8.1f}x" if len(ts) > 1 else ""
        print(f"{'verify-theorem S(2,2;1,1) p=3':<42}" + "".join(f"{t:11.4f}s" for t in ts) + "   " + speed)


if __name__ == "__main__":
    main()
