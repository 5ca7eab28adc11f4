"""Exact homological algebra over the first Weyl algebra.

Operators with rational-function coefficients, matrices over them,
chain complexes with a decidable model structure, and semifree
D-algebras with the weak-equivalence / fibration factorization.
"""
__version__ = "0.1.0"

from .ore import D, ONE, X, OreOperator, Poly, RationalFunction, RingMismatchError, left_divide, right_divide
from .rings import GF, QQ, QX, WEYL1, CoeffRing, ring_from_spec
from .linalg import OperatorMatrix, diagonal_form, kernel, rank, solve
from .chain import (ChainMap, FreeComplex, classify, colim_sequential, cone, disc, generating_sets,
                    homology, sphere)
from .lifting import LiftingSquare, factor_trivcof_fib, rlp_suite, solve_lift
from .dga import AlgebraMorphism, AlgElement, DGAPresentation, GenSet, adjunction_transpose, symmetrize
from .sullivan import acyclicity_probe, colim_enrichment_check, factorize, functorial_square

__all__ = [
    "D", "ONE", "X", "OreOperator", "Poly", "RationalFunction", "RingMismatchError",
    "left_divide", "right_divide",
    "GF", "QQ", "QX", "WEYL1", "CoeffRing", "ring_from_spec",
    "OperatorMatrix", "diagonal_form", "kernel", "rank", "solve",
    "ChainMap", "FreeComplex", "classify", "colim_sequential", "cone", "disc", "generating_sets",
    "homology", "sphere",
    "LiftingSquare", "factor_trivcof_fib", "rlp_suite", "solve_lift",
    "AlgebraMorphism", "AlgElement", "DGAPresentation", "GenSet", "adjunction_transpose", "symmetrize",
    "acyclicity_probe", "colim_enrichment_check", "factorize", "functorial_square",
]
