"""Exact computations with quantum complete intersections.

Modules: :mod:`~qci.scalars` (fields), :mod:`~qci.algebra` (PBW normal
form), :mod:`~qci.linalg` (exact linear algebra), :mod:`~qci.certificates`
(membership tests for w_alpha), :mod:`~qci.modules` (modules, syzygies,
stable maps), :mod:`~qci.towers` and :mod:`~qci.fdalgebra` (subalgebra
chains, generators, global dimension), :mod:`~qci.cli`.
"""

from .algebra import AlgebraElement, QciPresentation, gen, homogeneous, sigma
from .scalars import Cyclotomic, PrimeField, parse_field

__all__ = [
    "AlgebraElement",
    "Cyclotomic",
    "PrimeField",
    "QciPresentation",
    "gen",
    "homogeneous",
    "parse_field",
    "sigma",
]

__version__ = "0.1.0"
