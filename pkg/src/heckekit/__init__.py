"""
heckekit: exact computations in type-A Hecke algebras and parabolic
spherical modules, with the subexpression enumeration and Demazure
machinery needed to check non-perversity certificates.
"""

__version__ = "0.1.0"

from . import coxeter, demazure, hecke, laurent, spherical, subexpr, worddata

__all__ = [
    "coxeter",
    "demazure",
    "hecke",
    "laurent",
    "spherical",
    "subexpr",
    "worddata",
]
