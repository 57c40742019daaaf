"""Field contexts for points over solvable closures.

``NumericField`` works over Q with radical certificates evaluated in mpmath;
``FiniteField`` works exactly in a growing tower of finite fields, where
every extension is abelian and so automatically solvable.
"""

from .certificate import (
    CertificateError,
    CertStore,
    CNum,
    certificate_depth,
    eval_certificate,
    root_degrees,
)
from .finite import FiniteField, GFElem, TowerCapExceeded, is_irreducible_fp
from .numeric import IdenticallyZero, NumericField

__all__ = [
    "CertificateError",
    "CertStore",
    "CNum",
    "certificate_depth",
    "eval_certificate",
    "root_degrees",
    "FiniteField",
    "GFElem",
    "TowerCapExceeded",
    "is_irreducible_fp",
    "IdenticallyZero",
    "NumericField",
    "make_field",
]


def make_field(mode: str, *, p: int = 5, precision: int = 50, seed: int = 0):
    if mode == "numeric":
        return NumericField(precision)
    if mode == "finite":
        return FiniteField(p, seed=seed)
    raise ValueError(f"unknown field mode {mode!r}")
