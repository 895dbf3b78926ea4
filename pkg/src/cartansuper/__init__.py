"""Exact F_p constructions of the Cartan-type Lie superalgebras W(m,n;t) and S(m,n;t).

The package builds both algebras as explicit structure-constant models,
computes gradings and torus weights, and solves the linear systems for
superderivations and skew-symmetric super-biderivations.
"""

from __future__ import annotations

from .cartan import (
    WittVector,
    build_special_model,
    build_witt_model,
    special_generator,
    torus_basis,
    weight_decomposition,
    weight_of,
    witt_bracket,
)
from .fp import FpScalar, binom_mod_p, fp_add, fp_inv, fp_mul, fp_neg
from .kernels import BACKEND
from .model import AlgebraModel, ConsistencyError, ModelError, ResourceError, verify_structure
from .serialization import dumps_model, load_model, loads_model, save_model
from .solver import (
    BilinearMap,
    compare_with_inner,
    inner_bider,
    solve_super_biderivations,
    solve_superderivations,
)
from .superpoly import ShapeError, ShapeParams, SuperMonomial, SuperPolynomial
from .theorem import TheoremReport, verify_theorem

__version__ = "0.1.0"

__all__ = [
    "AlgebraModel",
    "BACKEND",
    "BilinearMap",
    "ConsistencyError",
    "FpScalar",
    "ModelError",
    "ResourceError",
    "ShapeError",
    "ShapeParams",
    "SuperMonomial",
    "SuperPolynomial",
    "TheoremReport",
    "WittVector",
    "binom_mod_p",
    "build_special_model",
    "build_witt_model",
    "compare_with_inner",
    "dumps_model",
    "fp_add",
    "fp_inv",
    "fp_mul",
    "fp_neg",
    "inner_bider",
    "load_model",
    "loads_model",
    "save_model",
    "solve_super_biderivations",
    "solve_superderivations",
    "special_generator",
    "torus_basis",
    "verify_structure",
    "verify_theorem",
    "weight_decomposition",
    "weight_of",
    "witt_bracket",
]
