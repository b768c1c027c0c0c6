"""Finite-field interactive proof toolkit.

Sumcheck and zero-knowledge sumcheck protocols, algebraic commitments,
a zero-knowledge proof system for oracle 3-SAT, plane-vs-point low
individual degree testing, query reduction via random curves, a two-prover
lifting transformation over simulated channels, and verification harnesses
for the underlying algebraic query-complexity facts.
"""

from .field import (
    Field,
    FieldElement,
    FieldError,
    SubsetSpec,
    enum_subfields,
    field_make,
    subfield_of_order,
    subgroup_of_order,
)
from .poly import Curve, MultiPoly, PlaneOrLine, bundle, lde, random_poly, restrict
from .sampler import ConstraintSet, InconsistentConstraint

__all__ = [
    "Field", "FieldElement", "FieldError", "SubsetSpec",
    "field_make", "enum_subfields", "subgroup_of_order", "subfield_of_order",
    "MultiPoly", "Curve", "PlaneOrLine", "bundle", "lde", "random_poly", "restrict",
    "ConstraintSet", "InconsistentConstraint",
]
