"""Exact dimensions of polynomial spline spaces with mixed smoothness on planar meshes."""
from .complexes import (
    SmoothnessDistribution,
    build_complexes,
    euler_characteristic,
    homology_dim,
    is_lower_acyclic,
    quotient_complex,
    spline_dim_kernel,
)
from .mesh import DegreeDistribution, Mesh, validate
from .polyspace import BIDEGREE, TOTAL, PolySpaceSpec
from .rules import ReductionStep, prune, pruned_dimension, reduce

__version__ = "0.1.0"

__all__ = [
    "BIDEGREE",
    "TOTAL",
    "DegreeDistribution",
    "Mesh",
    "PolySpaceSpec",
    "ReductionStep",
    "SmoothnessDistribution",
    "build_complexes",
    "euler_characteristic",
    "homology_dim",
    "is_lower_acyclic",
    "prune",
    "pruned_dimension",
    "quotient_complex",
    "reduce",
    "spline_dim_kernel",
    "validate",
]
