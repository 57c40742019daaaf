"""Bounds, polar cones and solvable points for systems of forms of degree <= 4.

Submodules:

* ``typecalc``: type and degree vectors and their raising operators.
* ``bounds``: closed-form and searched bounds on the ambient dimension.
* ``polyring``: exact sparse multivariate polynomials and polarization.
* ``polarcone``: form systems, polar cones and containment checks.
* ``solvfield``: numeric (radical certificate) and finite-field contexts.
* ``solver``: point and plane finding with verification.
* ``cli``: the ``obliteration`` command.
"""

from .bounds import BoundQuery, fj_bound, fj_search, p_polynomial, q_polynomial
from .polarcone import (
    FormSystem,
    SpanningTuple,
    iterated_polar,
    line_in_variety_check,
    plane_in_variety_check,
    polar_system,
    restrict_to_complement,
)
from .polyring import MultiPoly, poly_format, poly_parse, polarize
from .solver import (
    NoPoints,
    SolveFailure,
    SolveOutcome,
    eliminate_linear,
    find_linear_subspace,
    find_point,
    verify_point,
)
from .solvfield import FiniteField, NumericField, make_field
from .typecalc import DegreeVector, TypeVector, raise_deg, raise_type, type_of

__version__ = "0.1.0"

__all__ = [
    "BoundQuery",
    "fj_bound",
    "fj_search",
    "p_polynomial",
    "q_polynomial",
    "FormSystem",
    "SpanningTuple",
    "iterated_polar",
    "line_in_variety_check",
    "plane_in_variety_check",
    "polar_system",
    "restrict_to_complement",
    "MultiPoly",
    "poly_format",
    "poly_parse",
    "polarize",
    "NoPoints",
    "SolveFailure",
    "SolveOutcome",
    "eliminate_linear",
    "find_linear_subspace",
    "find_point",
    "verify_point",
    "FiniteField",
    "NumericField",
    "make_field",
    "DegreeVector",
    "TypeVector",
    "raise_deg",
    "raise_type",
    "type_of",
]
