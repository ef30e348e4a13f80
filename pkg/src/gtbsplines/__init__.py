"""Tchebycheffian B-spline bases for mixed-family, mixed-degree spline spaces.

The package builds spline spaces whose pieces come from different extended
Tchebycheff section spaces (polynomial, trigonometric, exponential, or
custom generalized-polynomial pairs) of possibly different dimensions, and
represents their nonnegative, locally supported, partition-of-unity basis
through an extraction operator acting on the piecewise Bernstein basis.
Knot insertion, derivative evaluation, curve representation, unit-integral
scaling, and independent recurrence/Cox-de Boor oracles are included.
"""

from .bernstein import (
    BernsteinBasis,
    build_bernstein,
    closed_form_bernstein,
    endpoint_jump_table,
)
from .config import (
    SpaceConfig,
    conic_profile_demo_config,
    mixed_family_demo_config,
)
from .errors import (
    AdmissibilityWarning,
    BasisNonexistenceError,
    ConditioningWarning,
    ConfigError,
    DomainError,
    EctViolationError,
    GTBError,
    InsertionError,
    InvalidFamilyError,
    OracleUnsupportedError,
    OrderError,
)
from .extraction import (
    ExtractionMatrix,
    KnotVectors,
    SmoothnessConstraints,
    build_constraints,
    build_knot_vectors,
    constraint_band,
    extraction_operator,
    nullspace_step,
    supersmoothness,
)
from .sections import (
    ExponentialFamily,
    GeneralizedPolynomialFamily,
    Partition,
    PolynomialFamily,
    SectionSpace,
    TrigonometricFamily,
    eval_span_derivatives,
    gpb_weights,
    normalized_pair,
    validate_ect,
)
from .space import (
    GTSplineSpace,
    SplineCurve,
    build_space,
    eval_basis,
    eval_curve,
    insert_knot,
    jump,
    jump_vector,
    unit_integral_scaling,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityWarning",
    "BasisNonexistenceError",
    "BernsteinBasis",
    "ConditioningWarning",
    "ConfigError",
    "DomainError",
    "EctViolationError",
    "ExponentialFamily",
    "ExtractionMatrix",
    "GTBError",
    "GTSplineSpace",
    "GeneralizedPolynomialFamily",
    "InsertionError",
    "InvalidFamilyError",
    "KnotVectors",
    "OracleUnsupportedError",
    "OrderError",
    "Partition",
    "PolynomialFamily",
    "SectionSpace",
    "SmoothnessConstraints",
    "SpaceConfig",
    "SplineCurve",
    "TrigonometricFamily",
    "build_bernstein",
    "build_constraints",
    "build_knot_vectors",
    "build_space",
    "closed_form_bernstein",
    "conic_profile_demo_config",
    "constraint_band",
    "endpoint_jump_table",
    "eval_basis",
    "eval_curve",
    "eval_span_derivatives",
    "extraction_operator",
    "gpb_weights",
    "insert_knot",
    "jump",
    "jump_vector",
    "mixed_family_demo_config",
    "normalized_pair",
    "nullspace_step",
    "supersmoothness",
    "unit_integral_scaling",
    "validate_ect",
]
