"""Exact construction and verification of generalized complex structures
on finitely presented coframe models."""

from .scalars import GaussRational, format_gauss, parse_gauss
from .coeffs import CoeffFn, VariableTable
from .model import CoframeModel, Form, Generator, VectorField

__all__ = [
    "GaussRational",
    "format_gauss",
    "parse_gauss",
    "CoeffFn",
    "VariableTable",
    "CoframeModel",
    "Form",
    "Generator",
    "VectorField",
]

__version__ = "0.1.0"
