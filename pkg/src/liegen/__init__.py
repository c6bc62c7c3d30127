"""Generation probabilities of matrix groups over finite fields.

The package computes, exactly where the group is enumerable and by
seeded Monte Carlo elsewhere, how often random pairs generate the
classical groups SL2(q), SL3(q), Sp4(q) and their central quotients,
using exact field tables, uniform samplers, subgroup closure and a
complete two-generator classification for the SL2 family.
"""

from .backend import DEFAULT_BACKEND, HAS_NUMBA, resolve_backend
from .errors import CapExceeded, InvalidConfig
from .ffield import (FiniteField, construct, field_generated,
                     format_element, format_field, minimal_degree,
                     parse_element, parse_field)
from .matgrp import (ConjClass, GroupSpec, SquareMatrix,
                     conjugacy_partition, element_order,
                     elements_of_order, enumerate_group, format_matrix,
                     identity, parse_group, parse_matrix, sample_of_order,
                     sample_uniform, standard_generators)
from .gentest import (GenVerdict, algebra_span, dickson_kind,
                      generation_verdict, is_irreducible,
                      subgroup_closure, trace_field, witness_category)
from .algdata import (AlgGroupType, ClassInfo, alg_group, audit_table1,
                      largest_class, scott_inequality, scott_precondition)
from .estimate import (EstimateReport, ExactResult, exact_P,
                       exact_P_classes, monte_carlo_P,
                       subfield_trace_decay, sweep, wilson_interval)
from .rng import Stream, derive_seed

__version__ = "0.1.0"

__all__ = [
    "AlgGroupType", "CapExceeded", "ClassInfo", "ConjClass",
    "DEFAULT_BACKEND", "EstimateReport", "ExactResult", "FiniteField",
    "GenVerdict", "GroupSpec", "HAS_NUMBA", "InvalidConfig",
    "SquareMatrix", "Stream", "alg_group", "algebra_span",
    "audit_table1", "conjugacy_partition", "construct", "derive_seed",
    "dickson_kind", "element_order", "elements_of_order",
    "enumerate_group", "exact_P", "exact_P_classes", "field_generated",
    "format_element", "format_field", "format_matrix",
    "generation_verdict", "identity", "is_irreducible", "largest_class",
    "minimal_degree", "monte_carlo_P", "parse_element", "parse_field",
    "parse_group", "parse_matrix", "resolve_backend", "sample_of_order",
    "sample_uniform", "scott_inequality", "scott_precondition",
    "standard_generators", "subfield_trace_decay", "subgroup_closure",
    "sweep", "trace_field", "wilson_interval", "witness_category",
]
