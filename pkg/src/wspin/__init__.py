"""Computational toolkit for quasi-homogeneous superpotentials and W-spin equations."""

from .errors import WSpinError
from .polyparse import QHPolynomial, format_poly, parse_poly

__all__ = ["QHPolynomial", "WSpinError", "format_poly", "parse_poly"]
__version__ = "0.1.0"
