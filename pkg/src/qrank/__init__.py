"""Quantum rank-metric codes for stacked quantum memories."""

from .gf2field import FieldSpec, Fe, BasisF2n, find_irreducible, find_self_dual_basis, find_normal_basis
from .f2linalg import MatF2
from .gabidulin import GabidulinCode, ExtVector, make_gabidulin, rank_weight
from .qconstruct import (
    BinarySymplecticCode,
    QuantumCodeParams,
    build_css_code,
    build_proposed_code,
    certify_distance,
    compare_table,
)
from .stacked_sim import PauliString, StackedError, CliffordSymplectic

__version__ = "0.1.0"

__all__ = [
    "BasisF2n",
    "BinarySymplecticCode",
    "CliffordSymplectic",
    "ExtVector",
    "Fe",
    "FieldSpec",
    "GabidulinCode",
    "MatF2",
    "PauliString",
    "QuantumCodeParams",
    "StackedError",
    "build_css_code",
    "build_proposed_code",
    "certify_distance",
    "compare_table",
    "find_irreducible",
    "find_normal_basis",
    "find_self_dual_basis",
    "make_gabidulin",
    "rank_weight",
]
