"""``cartansuper`` command line interface.

Exit codes: 0 success (for ``verify-theorem``: THEOREM VERIFIED), 1 theorem
not verified, 2 invalid input or shape, 3 structure violation, 4 no torus,
5 theorem not applicable, 6 internal consistency error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from pathlib import Path

import jsonschema
import numpy as np
import scipy.sparse as sp

from .cartan import build_special_model, build_witt_model, torus_pairs
from .corpus import EXAMPLES
from .fp import FieldError
from .identities import DEFAULT_SEED
from .linalg import SparseSubspace
from .model import ConsistencyError, ModelError, ResourceError, verify_structure
from .serialization import load_model, save_model, validate
from .solver import compare_with_inner, model_id, solve_super_biderivations, solve_superderivations
from .superpoly import ShapeError, ShapeParams
from .theorem import verify_theorem

EXIT_OK = 0
EXIT_NOT_VERIFIED = 1
EXIT_USAGE = 2
EXIT_STRUCTURE = 3
EXIT_NO_TORUS = 4
EXIT_NOT_APPLICABLE = 5
EXIT_CONSISTENCY = 6


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(obj: dict, out: str | None) -> None:
    validate(obj, "report")
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return load_model(path)
    except FileNotFoundError:
        raise CliError(EXIT_USAGE, f"no such model file: {path}") from None
    except (json.JSONDecodeError, jsonschema.ValidationError, ModelError, ShapeError, FieldError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        raise CliError(EXIT_USAGE, f"invalid model file {path}: {msg}") from None


def _parse_t(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise CliError(EXIT_USAGE, f"--t must be a comma list of integers (got {text!r})") from None


def _basis_index(model, token: str) -> int:
    if token.lstrip("-").isdigit():
        idx = int(token)
        if not 0 <= idx < model.dim:
            raise CliError(EXIT_USAGE, f"basis index {idx} outside 0..{model.dim - 1}")
        return idx
    try:
        return model.labels.index(token)
    except ValueError:
        raise CliError(EXIT_USAGE, f"unknown basis label {token!r}") from None


# --- verbs --------------------------------------------------------------------


def cmd_build(args) -> int:
    try:
        shape = ShapeParams(args.m, args.n, _parse_t(args.t), args.p)
    except (ShapeError, FieldError) as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    if args.type == "witt":
        model = build_witt_model(shape, with_torus=args.torus)
    else:
        model = build_special_model(shape)
    rep = verify_structure(model)
    if not rep.ok:
        raise CliError(EXIT_STRUCTURE, f"structure violation: {rep.violation}")
    save_model(model, args.out)
    print(f"wrote {model.name} (dim {model.dim}) to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_example(args) -> int:
    model = EXAMPLES[args.name](args.p)
    save_model(model, args.out)
    print(f"wrote {model.name} (dim {model.dim}) to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_info(args) -> int:
    model = _load(args.model)
    shape = model.shape
    degs = Counter(model.zdegree.tolist())
    _emit(
        {
            "command": "info",
            "model_id": model_id(model),
            "name": model.name,
            "kind": model.kind,
            "p": model.p,
            "shape": None if shape is None else {"m": shape.m, "n": shape.n, "t": list(shape.t)},
            "dim": model.dim,
            "even_dim": int((model.parity == 0).sum()),
            "odd_dim": int((model.parity == 1).sum()),
            "degree_dims": [[r, degs[r]] for r in sorted(degs)],
            "structure_rows": int(len(model.canonical_rows())),
            "has_torus": model.torus is not None,
        },
        args.out,
    )
    return EXIT_OK


def cmd_bracket(args) -> int:
    model = _load(args.model)
    a, b = _basis_index(model, args.a), _basis_index(model, args.b)
    v = model.bracket(model.basis_vector(a), model.basis_vector(b))
    terms = [{"index": int(k), "label": model.labels[k], "coef": int(v[k])} for k in np.flatnonzero(v)]
    _emit(
        {
            "command": "bracket",
            "left": {"index": a, "label": model.labels[a]},
            "right": {"index": b, "label": model.labels[b]},
            "result": terms,
        },
        args.out,
    )
    return EXIT_OK


def _weight_columns(model) -> list[str]:
    if model.shape is not None:
        return [f"w({k0},{k1})" for k0, k1 in torus_pairs(model.shape)]
    return [f"w{r}" for r in range(model.weights.shape[1])]


def cmd_weights(args) -> int:
    model = _load(args.model)
    if model.torus is None or model.weights is None:
        raise CliError(EXIT_NO_TORUS, f"model {model.name!r} has no torus attached")
    wcols = _weight_columns(model)
    columns = ["index", "label", "parity", "zdegree", *wcols]
    rows = [
        [a, model.labels[a], int(model.parity[a]), int(model.zdegree[a]), *map(int, model.weights[a])]
        for a in range(model.dim)
    ]
    counts = Counter(tuple(r[4:]) for r in rows)
    summary = [{"weight": list(w), "dim": counts[w]} for w in sorted(counts)]
    if args.format == "json":
        _emit({"command": "weights", "columns": columns, "rows": rows, "summary": summary, "total_dim": model.dim}, args.out)
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    print(f"{len(summary)} weight spaces, dims sum to {model.dim}", file=sys.stderr)
    for item in summary:
        print(f"  {tuple(item['weight'])}: {item['dim']}", file=sys.stderr)
    return EXIT_OK


def cmd_check_structure(args) -> int:
    model = _load(args.model)
    rep = verify_structure(model)
    _emit({"command": "check-structure", **rep.to_dict()}, args.out)
    return EXIT_OK if rep.ok else EXIT_STRUCTURE


def cmd_solve_der(args) -> int:
    model = _load(args.model)
    der = solve_superderivations(model, args.parity)
    ads = [model.ad(x) for x in range(model.dim) if model.parity[x] == args.parity]
    d = model.dim
    if ads:
        inner = SparseSubspace.from_rows(sp.vstack([A.reshape(1, d * d) for A in ads]).tocsr(), model.p)
        inner_dim = inner.dim
        contains = der.subspace().contains_space(inner)
    else:
        inner_dim, contains = 0, True
    if not contains:
        raise ConsistencyError("an inner derivation is missing from the solved space")
    _emit(
        {
            "command": "solve-der",
            "model_id": model_id(model),
            "parity": args.parity,
            "dim": der.dim,
            "inner_dim": inner_dim,
            "contains_inner": contains,
            "unknowns": der.stats["unknowns"],
            "rows": der.stats["rows"],
            "blocks": der.stats["blocks"],
            "wall_time": der.stats["wall_time"],
        },
        args.out,
    )
    return EXIT_OK


def cmd_solve_bider(args) -> int:
    model = _load(args.model)
    space, rep = solve_super_biderivations(model, args.parity)
    if args.parity == 0:
        comp = compare_with_inner(space, model)
        rep.verdict, rep.lam = comp.verdict, comp.lam
    _emit({"command": "solve-bider", **rep.to_dict()}, args.out)
    return EXIT_OK


def cmd_verify_theorem(args) -> int:
    model = _load(args.model)
    rep = verify_theorem(model, oracle=args.oracle, samples=args.samples, seed=args.seed, with_witness=not args.no_witness)
    _emit(rep.to_dict(), args.out)
    print(rep.verdict + (f": {rep.reason}" if rep.reason else ""), file=sys.stderr)
    if rep.solver:
        print(f"nullspace dims (even, odd): {rep.bder_dims}", file=sys.stderr)
    if rep.oracle is not None:
        print(f"oracle: {rep.oracle['status']}", file=sys.stderr)
    return rep.exit_code


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cartansuper", description="Exact computations with W(m,n;t) and S(m,n;t) over F_p.")
    sub = ap.add_subparsers(dest="verb", required=True)

    b = sub.add_parser("build", help="build a W or S model and write it to a file")
    b.add_argument("--type", choices=["witt", "special"], required=True)
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--t", required=True, help="comma list, e.g. 1,1")
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--torus", action="store_true", help="attach the torus to a Witt model (always attached for S)")
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("example", help="write one of the small hand-written models")
    e.add_argument("name", choices=sorted(EXAMPLES))
    e.add_argument("--p", type=int, default=5)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_example)

    def model_cmd(name, func, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("model", help="model file")
        s.add_argument("--out", help="write output here instead of stdout")
        s.set_defaults(func=func)
        return s

    model_cmd("info", cmd_info, "summary of a model file")
    br = model_cmd("bracket", cmd_bracket, "bracket of two basis elements (index or label)")
    br.add_argument("a")
    br.add_argument("b")
    w = model_cmd("weights", cmd_weights, "torus weight of every basis element")
    w.add_argument("--format", choices=["csv", "json"], default="csv")
    model_cmd("check-structure", cmd_check_structure, "verify skew-symmetry, Jacobi and grading")
    for name, func in (("solve-der", cmd_solve_der), ("solve-bider", cmd_solve_bider)):
        s = model_cmd(name, func, f"{name.split('-')[1]}ivations of one parity")
        s.add_argument("--parity", type=int, choices=[0, 1], default=0)
    v = model_cmd("verify-theorem", cmd_verify_theorem, "check that all skew-symmetric super-biderivations are inner")
    v.add_argument("--oracle", action="store_true", help="cross-check against the independent solvers")
    v.add_argument("--samples", type=int, default=None, help="quadruple budget for the sampled exchange check")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--no-witness", action="store_true", help="omit biderivation tensors from the report")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
