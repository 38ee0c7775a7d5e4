"""Schur rings over rank-2 elementary abelian groups, built from
partitions of the line set of F_q x F_q, plus a census machinery that
cross-validates a non-schurianness criterion against an exact
automorphism-group oracle."""

from .errors import InconsistencyError, PartitionFormatError, SizingError
from .gf import Field, field_from_literal, make_field, parse_field_literal
from .lines import (
    LinePartition,
    condition_holds,
    enumerate_partitions,
    load_partition,
    mobius_normalize,
    one_class_partition,
    singleton_partition,
    singleton_slopes,
    wielandt_partition,
)
from .schur import SchurBasis, structure_constants, verify_line_sum_identities, \
    verify_schur_axioms
from .analysis import (
    SchurianReport,
    analyze_partition,
    census,
    cross_validate,
    invariant_slopes,
    nonschurian_criterion,
    partition_preserving_maps,
    schurian_test,
    verify_slope_closure,
)

__version__ = "0.1.0"

__all__ = [
    "Field",
    "InconsistencyError",
    "LinePartition",
    "PartitionFormatError",
    "SchurBasis",
    "SchurianReport",
    "SizingError",
    "analyze_partition",
    "census",
    "condition_holds",
    "cross_validate",
    "enumerate_partitions",
    "field_from_literal",
    "invariant_slopes",
    "load_partition",
    "make_field",
    "mobius_normalize",
    "nonschurian_criterion",
    "one_class_partition",
    "parse_field_literal",
    "partition_preserving_maps",
    "schurian_test",
    "singleton_partition",
    "singleton_slopes",
    "structure_constants",
    "verify_line_sum_identities",
    "verify_schur_axioms",
    "verify_slope_closure",
    "wielandt_partition",
    "__version__",
]
