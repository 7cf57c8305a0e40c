"""Star-analogue SL(2) groups over finite involutive rings and their Weil
representations, constructed two independent ways and cross-verified."""

from .fields import FiniteField
from .groups import (
    BruhatWord,
    StarMatrix,
    bruhat_normal_form,
    doubling_projection,
    enumerate_group,
    sample_element,
    verify_relations,
    w_length,
)
from .bundle import FiberFunction, LagrangianBundle
from .rings import DoublingRing, MatrixRing, TruncatedPolynomialRing
from .scalars import TOL, approx_equal, root_of_unity, sqrt_nonneg_int
from .symplectic import (
    Lagrangian,
    LagrangianTable,
    SelfDualModule,
    enumerate_lagrangians,
    is_lagrangian,
    lagrangian_table,
)
from .weil import (
    BruhatWeilRepresentation,
    GeometricWeilRepresentation,
    character_inner_product,
    cocycle,
    compare_representations,
    delta,
    omega,
    quadratic_gauss_sum,
    rep_character,
    sign_character,
    w_comparison_constant,
)

__version__ = "0.1.0"

__all__ = [
    "TOL",
    "approx_equal",
    "root_of_unity",
    "sqrt_nonneg_int",
    "FiniteField",
    "TruncatedPolynomialRing",
    "MatrixRing",
    "DoublingRing",
    "StarMatrix",
    "BruhatWord",
    "bruhat_normal_form",
    "w_length",
    "sample_element",
    "enumerate_group",
    "verify_relations",
    "doubling_projection",
    "SelfDualModule",
    "Lagrangian",
    "LagrangianTable",
    "enumerate_lagrangians",
    "lagrangian_table",
    "is_lagrangian",
    "FiberFunction",
    "LagrangianBundle",
    "BruhatWeilRepresentation",
    "GeometricWeilRepresentation",
    "quadratic_gauss_sum",
    "sign_character",
    "omega",
    "w_comparison_constant",
    "cocycle",
    "delta",
    "compare_representations",
    "rep_character",
    "character_inner_product",
]
