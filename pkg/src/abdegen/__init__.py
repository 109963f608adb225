"""Limit mixed Hodge structures of degenerating (1, p)-polarized abelian surfaces.

The main entry point is :func:`reconstruct`, which takes a corank-1 boundary
point and returns the degenerate fibre it determines: the number of
components, the base elliptic curve, the gluing shift and the constraint on
the line bundle.
"""
from .carlson import ExtensionProblem, build_retraction, extension_class
from .cycle import CycleData, build_cycle_mhs
from .degeneration import (BundleUpToTorsion, CentralPoint, DegenerateFiber, ExactBundle,
                           PeripheralPoint, count_components, family_from_boundary, reconstruct)
from .errors import DegenerationError, InvalidInput, NumericalFailure
from .exact_linalg import IntMatrix, smith_normal_form
from .hodge import PeriodPoint, build_hs, check_riemann
from .lattice import ComplexLattice, TorusPoint, lattices_equivalent, reduce_fundamental
from .mhs import MixedHS, limit_filtration, log_monodromy, weight_filtration

__all__ = [
    "BundleUpToTorsion", "CentralPoint", "ComplexLattice", "CycleData", "DegenerateFiber",
    "DegenerationError", "ExactBundle", "ExtensionProblem", "IntMatrix", "InvalidInput",
    "MixedHS", "NumericalFailure", "PeriodPoint", "PeripheralPoint", "TorusPoint",
    "build_cycle_mhs", "build_hs", "build_retraction", "check_riemann", "count_components",
    "extension_class", "family_from_boundary", "lattices_equivalent", "limit_filtration",
    "log_monodromy", "reconstruct", "reduce_fundamental", "smith_normal_form",
    "weight_filtration",
]
