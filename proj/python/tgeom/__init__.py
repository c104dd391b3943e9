"""World-function geometry: Σ-products, tubes, gradient lines and coincidence-limit calculus."""

from ._core import (
    ComplexBranchError,
    InputError,
    SolverError,
    World,
    broken_tube,
    case1_radii,
    case1_waist,
    case2_asymptotic_radius,
    check_degeneration,
    check_euclideaness,
    coefficients,
    collinearity_residual,
    curvature,
    first_order_factors,
    gradient_line,
    gradient_line_ode,
    gram_fn,
    implicit_tangent,
    load_world,
    make_world,
    multivector_product,
    parallelism_residual,
    squared_length,
    tube_residual,
    tube_section,
    vector_product,
)

__all__ = [name for name in dir() if not name.startswith("_")]
