"""Pattern structures, Close-by-One, kernel-operator projections and
representation contexts, with a brute-force oracle."""

from .cbo import BACKEND, ConceptSet, close_by_one
from .descriptions import (
    TOP,
    AttributeSetSpace,
    ExplicitSpace,
    IntervalSpace,
    IntervalVector,
    aggregated_size,
)
from .order_core import FiniteLattice, lattice_from_covers, lattice_from_order, load_lattice, validate_lattice
from .pattern import PatternConcept, PatternStructure, closure, load_csv
from .projections import (
    KernelOperator,
    aggregated_length_kernel,
    fixed_point,
    kernel_from_fixed_point,
    o_project,
    proj_leq,
    proj_meet,
    validate_kernel,
)
from .representation import (
    FormalContext,
    interordinal_context,
    minimal_representation_context,
    projection_from_context,
    read_cxt,
    reduce_attributes,
    simpler_than,
    verify_representation,
    write_cxt,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConceptSet",
    "close_by_one",
    "TOP",
    "AttributeSetSpace",
    "ExplicitSpace",
    "IntervalSpace",
    "IntervalVector",
    "aggregated_size",
    "FiniteLattice",
    "lattice_from_covers",
    "lattice_from_order",
    "load_lattice",
    "validate_lattice",
    "PatternConcept",
    "PatternStructure",
    "closure",
    "load_csv",
    "KernelOperator",
    "aggregated_length_kernel",
    "fixed_point",
    "kernel_from_fixed_point",
    "o_project",
    "proj_leq",
    "proj_meet",
    "validate_kernel",
    "FormalContext",
    "interordinal_context",
    "minimal_representation_context",
    "projection_from_context",
    "read_cxt",
    "reduce_attributes",
    "simpler_than",
    "verify_representation",
    "write_cxt",
]
