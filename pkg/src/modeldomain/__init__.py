"""Exact algebra for weighted homogeneous model domains and their tangent fields."""

from .exactalg import GaussQ, ExactMatrix, nullspace, row_reduce
from .wpoly import (
    WeightSystem,
    Monomial,
    MixedPoly,
    balanced_part,
    signature_decompose,
    weight_graded_parts,
    is_weighted_homogeneous,
    substitute_boundary,
    weighted_substitution,
    dilate,
)
from .dsl import ParseError, parse_poly, parse_field, format_poly, format_field
from .vfield import (
    HoloVectorField,
    FieldBasis,
    field_weight,
    tangency_residual,
    is_tangent,
    tangent_field_space,
    annihilator_space,
    model_field_half,
    model_field_one,
    straighten_negative_field,
)
from .models import (
    DomainModel,
    NumericPoint,
    cayley_forward,
    cayley_inverse,
    cayley_identity_residual,
    chi_t_rescale,
    homogeneous_model_extract,
    order_along_direction,
    assign_weights_adapted,
    zero_set_checks,
)

__all__ = [
    "GaussQ",
    "ExactMatrix",
    "nullspace",
    "row_reduce",
    "WeightSystem",
    "Monomial",
    "MixedPoly",
    "balanced_part",
    "signature_decompose",
    "weight_graded_parts",
    "is_weighted_homogeneous",
    "substitute_boundary",
    "weighted_substitution",
    "dilate",
    "ParseError",
    "parse_poly",
    "parse_field",
    "format_poly",
    "format_field",
    "HoloVectorField",
    "FieldBasis",
    "field_weight",
    "tangency_residual",
    "is_tangent",
    "tangent_field_space",
    "annihilator_space",
    "model_field_half",
    "model_field_one",
    "straighten_negative_field",
    "DomainModel",
    "NumericPoint",
    "cayley_forward",
    "cayley_inverse",
    "cayley_identity_residual",
    "chi_t_rescale",
    "homogeneous_model_extract",
    "order_along_direction",
    "assign_weights_adapted",
    "zero_set_checks",
]
