"""Quadratic evolution operators of a bisexual population.

A state is a pair of type distributions (females ``x``, males ``y``); the
evolution operator maps it to the offspring distributions through the
inheritance coefficients. The package evaluates the operator and its
derivative, computes sufficient conditions for it to be a contraction, and
studies its orbits numerically.
"""

from .catalog import builtin_model, bundled_model, uniform_model
from .contraction import (
    ContractionReport,
    analyze,
    corollary3_holds,
    corollary4_bound,
    lemma4_bound,
    mu_ratios,
    tangent_block_norm,
    zeta,
)
from .dynamics import (
    LipschitzEstimate,
    Trajectory,
    TrajectoryClassification,
    classify,
    empirical_lipschitz,
    find_fixed_points,
    jacobian_lipschitz,
    sample_state,
    sample_states,
    scalar_iterate_closed_form,
    trajectory,
)
from .errors import QSOError
from .model import (
    TAU_VALID,
    BisexualModel,
    InheritanceTensors,
    Locus,
    PopulationState,
    TangentVector,
    in_fixed_point_locus,
    load_model,
    parse_model_file,
    serialize_model,
    validate_state,
    validate_tensors,
)
from .operator import (
    JacobianMatrix,
    algebra_product,
    evolve,
    is_idempotent,
    jacobian,
    multiplication_matrix,
)

__version__ = "0.1.0"
