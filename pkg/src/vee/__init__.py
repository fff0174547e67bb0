"""Exact verification of ∨-systems, their flat polynomial sections and
potentials, and freeness of the associated hyperplane arrangements."""

from .algebra import MultiPoly, PolyVectorField, RatMatrix, Rational
from .arrangements import (
    factorization_check,
    intersection_lattice,
    is_logarithmic,
    poincare_polynomial,
    restrict_arrangement,
    saito_criterion,
)
from .families import instantiate
from .flatsections import epd_check, flat_solve, harmonic_test, quasi_invariant_dim, section_properties
from .veesys import (
    CovectorSystem,
    DegenerateForm,
    WeightedCovector,
    canonical_form,
    holonomy_check,
    irreducible_components,
    load_system,
    vee_check,
    vee_dual,
    well_distributed_check,
)

__version__ = "0.1.0"

__all__ = [
    "MultiPoly", "PolyVectorField", "RatMatrix", "Rational",
    "CovectorSystem", "WeightedCovector", "DegenerateForm", "load_system",
    "canonical_form", "vee_dual", "vee_check", "holonomy_check", "well_distributed_check",
    "irreducible_components", "instantiate",
    "flat_solve", "harmonic_test", "quasi_invariant_dim", "section_properties", "epd_check",
    "intersection_lattice", "poincare_polynomial", "factorization_check",
    "is_logarithmic", "saito_criterion", "restrict_arrangement",
]
