"""Exact algebra: rationals, Novikov rational functions, rational matrices."""

from .matrices import RationalMatrix, inverse, kernel, primitive, rank
from .quantum import QuantumRational, qr_arith, qr_substitute_inverse, series_expand
from .rationals import format_rational, to_rational

__all__ = [
    "RationalMatrix",
    "QuantumRational",
    "qr_arith",
    "qr_substitute_inverse",
    "series_expand",
    "kernel",
    "rank",
    "inverse",
    "primitive",
    "format_rational",
    "to_rational",
]
