from .exact import Exact, GaussianRational
from .maxwell import AngularPolynomial, MultipoleExpansion, UnitVec, expand, maxwell_eval, reconstruct
from .sym_tensor import SymTensor, detrace

__all__ = [
    "AngularPolynomial",
    "Exact",
    "GaussianRational",
    "MultipoleExpansion",
    "SymTensor",
    "UnitVec",
    "detrace",
    "expand",
    "maxwell_eval",
    "reconstruct",
]
