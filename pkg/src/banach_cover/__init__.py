"""Metric projections, coderivatives and covering constants in l_p and L_p.

Finite truncations of l_p and step-function models of L_p(S), the closed-form
projections onto balls, cylinders and the positive cone, their coderivatives,
covering-constant estimation with exact witnesses, and stochastic fixed-point
solvers for the worked examples.
"""

from .lp_space import (
    DimensionMismatch,
    DualVector,
    ExponentMismatch,
    IndexMask,
    LpVector,
    duality_J,
    duality_J_on_subspace,
    duality_Jstar,
    mask_decompose,
    norm,
    pairing,
)
from .lp_function import (
    MeasureGrid,
    OrderedInterval,
    StepFunction,
    cone_membership,
    duality_JLp,
    interval_contains,
    normLp,
    pairingLp,
    pos_neg_parts,
)
from .projections import (
    Ball,
    Cylinder,
    Direction,
    Infeasible,
    KindMismatch,
    PositiveCone,
    classify_direction,
    membership,
    preimage_distance,
    project,
    project_ball,
    project_cone,
    project_cylinder,
    variational_check,
)
from .coderivative import (
    Empty,
    Interval,
    PredicateOnly,
    QuotientReport,
    ScaledIdentity,
    Singleton,
    coderivative_ball,
    coderivative_cone_at_origin,
    coderivative_cone_zero_membership,
    coderivative_cylinder,
    coderivative_scaled_identity,
    numeric_quotient_sup,
)
from .covering import (
    CoveringReport,
    UnsupportedTarget,
    covering_property_check,
    estimate_covering_constant,
    theoretical_covering_constant,
    witness_zero_ball,
    witness_zero_cone,
    witness_zero_cylinder,
)
from .fixpoint import (
    BadLambda,
    LeftDomain,
    NoConvergence,
    builtin_example,
    event_probability,
    hausdorff_excess,
    picard_solve,
    residual_bound_check,
    segment_contains,
    segment_selection_solve,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatch",
    "DualVector",
    "ExponentMismatch",
    "IndexMask",
    "LpVector",
    "duality_J",
    "duality_J_on_subspace",
    "duality_Jstar",
    "mask_decompose",
    "norm",
    "pairing",
    "MeasureGrid",
    "OrderedInterval",
    "StepFunction",
    "cone_membership",
    "duality_JLp",
    "interval_contains",
    "normLp",
    "pairingLp",
    "pos_neg_parts",
    "Ball",
    "Cylinder",
    "Direction",
    "Infeasible",
    "KindMismatch",
    "PositiveCone",
    "classify_direction",
    "membership",
    "preimage_distance",
    "project",
    "project_ball",
    "project_cone",
    "project_cylinder",
    "variational_check",
    "Empty",
    "Interval",
    "PredicateOnly",
    "QuotientReport",
    "ScaledIdentity",
    "Singleton",
    "coderivative_ball",
    "coderivative_cone_at_origin",
    "coderivative_cone_zero_membership",
    "coderivative_cylinder",
    "coderivative_scaled_identity",
    "numeric_quotient_sup",
    "CoveringReport",
    "UnsupportedTarget",
    "covering_property_check",
    "estimate_covering_constant",
    "theoretical_covering_constant",
    "witness_zero_ball",
    "witness_zero_cone",
    "witness_zero_cylinder",
    "BadLambda",
    "LeftDomain",
    "NoConvergence",
    "builtin_example",
    "event_probability",
    "hausdorff_excess",
    "picard_solve",
    "residual_bound_check",
    "segment_contains",
    "segment_selection_solve",
]
