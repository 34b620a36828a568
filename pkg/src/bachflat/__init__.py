"""Exact and float curvature of left-invariant metrics on 4-dimensional Lie groups."""

from __future__ import annotations

from .analysis import AnalysisReport, analyze
from .expr_parser import ParseError, format_scalar, parse_algebra, parse_scalar, render_algebra
from .lie import StructureConstants, descriptor, family_algebra, jacobi_check
from .scalars import BiPolynomial, BiQuadratic, FieldMismatchError

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "BiPolynomial",
    "BiQuadratic",
    "FieldMismatchError",
    "ParseError",
    "StructureConstants",
    "analyze",
    "descriptor",
    "family_algebra",
    "format_scalar",
    "jacobi_check",
    "parse_algebra",
    "parse_scalar",
    "render_algebra",
]
